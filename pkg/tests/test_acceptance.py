"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line (shown in the terminal summary) before
asserting, so a failing criterion is still reported alongside the others.
"""
import dataclasses
import gc
import random
import time
import warnings

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from fuzzyswitch.cli import main
from fuzzyswitch.dsl import (
    RuleCoverageWarning,
    builtin_rulebase,
    check_completeness,
    parse_rules,
    serialize_rules,
)
from fuzzyswitch.engine import SampleGrid, aggregate, defuzzify_centroid, implicate, infer
from fuzzyswitch.metrics import avtg, switch_histogram
from fuzzyswitch.sim import simulate
from fuzzyswitch.switcher import DEFAULT_ROSTER, SwitcherState, Telemetry, select_model, step
from oracles import RULE_TABLE, PROTOTYPES, SCORE_TO_MODEL, brute_centroid


def record(n, name, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {name}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def test_criterion_1_rule_table_fidelity(rb):
    t0 = time.perf_counter()
    hits = 0
    misses = []
    for ants, cons in RULE_TABLE.items():
        t = Telemetry(*(PROTOTYPES[v][a] for v, a in zip(("GU", "GT", "NT"), ants)))
        model = select_model(infer(rb, t).score, rb.output, DEFAULT_ROSTER)
        if model.label == SCORE_TO_MODEL[cons]:
            hits += 1
        else:
            misses.append((ants, cons, model.label))
    elapsed = time.perf_counter() - t0
    ok = hits == 27 and elapsed < 1.0
    record(1, "rule-table fidelity", ok, f"{hits}/27 exact in {elapsed:.3f}s (budget 1s)")
    assert not misses
    assert elapsed < 1.0


def test_criterion_2_centroid_oracle(variables):
    score = variables["Score"]
    span = score.hi - score.lo
    rng = np.random.default_rng(20240601)
    grid = SampleGrid(score, 1001)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(50):
        # a random subset of rules fires with random strengths; each rule clips its consequent
        n_fired = int(rng.integers(1, 28))
        consequents = rng.integers(0, len(score.terms), size=n_fired)
        strengths = rng.uniform(0.05, 1.0, size=n_fired)
        clipped = [implicate(float(a), score.mfs[int(c)], grid) for a, c in zip(strengths, consequents)]
        got = defuzzify_centroid(aggregate(clipped, strengths))
        ref = brute_centroid([(float(a), score.mfs[int(c)].kind, score.mfs[int(c)].points)
                              for a, c in zip(strengths, consequents)], score.lo, score.hi, n=100_000)
        worst = max(worst, abs(got - ref))
    elapsed = time.perf_counter() - t0
    tol = 1e-6 * span
    ok = worst <= tol and elapsed < 5.0
    record(2, "centroid oracle", ok, f"max |err| {worst:.2e} vs tol {tol:.0e} over 50 firings, {elapsed:.2f}s (budget 5s)")
    assert worst <= tol
    assert elapsed < 5.0


def _random_sequences(count, length, seed):
    """Piecewise-steady random telemetry: held levels plus jitter, so streaks actually form."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        runs = []
        total = 0
        while total < length:
            n = int(rng.integers(1, 13))
            base = rng.uniform((0, 20, 0), (100, 100, 200))
            jitter = rng.normal(0, (3, 2, 8), size=(n, 3))
            runs.append(base + jitter)
            total += n
        raw = np.concatenate(runs)[:length]
        raw[:, 2] = np.maximum(np.rint(raw[:, 2]), 0)
        out.append([Telemetry(float(g), float(t), int(n)) for g, t, n in raw])
    return out


def test_criterion_3_hysteresis_bound(rb):
    seqs = _random_sequences(1000, 200, seed=7)
    ks = random.Random(11).choices(range(1, 11), k=len(seqs))
    violations = []
    total_switches = 0
    t0 = time.perf_counter()
    for i, (seq, k) in enumerate(zip(seqs, ks)):
        mode = "same_candidate" if i % 2 == 0 else "any_difference"
        state = SwitcherState.initial(threshold_k=k, counter_mode=mode)
        decisions = []
        for t in seq:
            state, d = step(state, t, rb)
            decisions.append(d)
        switches = [j for j, d in enumerate(decisions) if d.switched]
        total_switches += len(switches)
        if len(switches) > len(seq) // k:
            violations.append((i, "bound", len(switches), k))
        if mode != "same_candidate":
            continue
        for j in switches:
            target = decisions[j].candidate_model
            window = decisions[j - k + 1: j + 1] if j >= k - 1 else []
            run_ok = len(window) == k and all(
                d.candidate_model == target and d.candidate_model != d.model_used for d in window)
            # exactly K: the frame before the window did not already extend the streak
            if run_ok and j - k >= 0:
                before = decisions[j - k]
                run_ok = before.switched or before.candidate_model != target or before.candidate_model == before.model_used
            if not run_ok:
                violations.append((i, "streak", j, k))
    elapsed = time.perf_counter() - t0
    ok = not violations and elapsed < 10.0
    record(3, "hysteresis bound", ok,
           f"{len(violations)} violations over 1000x200 steps ({total_switches} switches), "
           f"{elapsed:.2f}s (budget 10s)")
    assert not violations
    assert total_switches > 0
    assert elapsed < 10.0


@pytest.fixture(scope="module")
def arms(default_scenario, rb):
    """Noise-off runs of the shipped scenario: adaptive plus each single-model arm."""
    sc = dataclasses.replace(default_scenario, rng_seed=None)
    t0 = time.perf_counter()
    logs = {"adaptive": simulate(sc, rb)}
    for i, label in enumerate(sc.roster):
        logs[label] = simulate(sc, rb, pinned=i)
    return logs, time.perf_counter() - t0


def test_criterion_4_switch_histogram_shape(default_scenario, rb):
    t0 = time.perf_counter()
    log = simulate(default_scenario, rb)
    hist = [c for _, c in switch_histogram(log, 500)]
    elapsed = time.perf_counter() - t0
    total = sum(hist)
    second_half = sum(c for (lo, _), c in switch_histogram(log, 500) if lo >= 1000)
    share = second_half / total if total else 1.0
    ok = len(log) == 2000 and hist[0] == 0 and total <= 40 and share >= 0.8 and elapsed < 5.0
    record(4, "switch histogram shape", ok,
           f"bins {hist}, total {total} (<=40), second-half share {share:.0%} (>=80%), {elapsed:.2f}s (budget 5s)")
    assert len(log) == 2000
    assert hist[0] == 0
    assert total <= 40
    assert share >= 0.8
    assert elapsed < 5.0


def test_criterion_5_thermal_mitigation(arms):
    logs, elapsed = arms
    peak = {k: max(r.gt for r in v.records) for k, v in logs.items()}
    ok = peak["small"] - 0.5 <= peak["adaptive"] <= peak["large"] and elapsed < 5.0
    record(5, "thermal mitigation", ok,
           f"peak adaptive {peak['adaptive']:.2f}C, small {peak['small']:.2f}C, large {peak['large']:.2f}C, "
           f"{elapsed:.2f}s for 4 arms (budget 5s)")
    assert peak["adaptive"] <= peak["large"]
    assert peak["adaptive"] >= peak["small"] - 0.5
    assert elapsed < 5.0


def test_criterion_6_avtg_balance(arms):
    logs, elapsed = arms
    a = {k: avtg(v) for k, v in logs.items()}
    detected = {k: sum(r.nt_obs for r in v.records) for k, v in logs.items()}
    ok = a["adaptive"] >= a["large"] and detected["adaptive"] >= detected["small"] and elapsed < 5.0
    record(6, "AVTG balance", ok,
           f"AVTG adaptive {a['adaptive']:.4f} >= large {a['large']:.4f}; "
           f"detected adaptive {detected['adaptive']} >= small {detected['small']}")
    assert a["adaptive"] >= a["large"]
    assert detected["adaptive"] >= detected["small"]
    assert elapsed < 5.0


def test_criterion_7_constant_decision_cost(default_scenario, rb):
    sc = dataclasses.replace(default_scenario, trace=default_scenario.trace * 5, rng_seed=None)
    assert len(sc.trace) == 10_000
    simulate(dataclasses.replace(sc, trace=sc.trace[:500]), rb)  # warm caches
    t0 = time.perf_counter()
    runs = []
    gc_was_enabled = gc.isenabled()
    gc.disable()
    try:
        # per-frame cost is the minimum over repeated runs, which filters scheduler noise
        for _ in range(3):
            runs.append(simulate(sc, rb, time_decisions=True).decision_seconds)
    finally:
        if gc_was_enabled:
            gc.enable()
    elapsed = time.perf_counter() - t0
    per_frame = np.min(np.array(runs), axis=0)
    early = float(np.mean(per_frame[:1000]))
    late = float(np.mean(per_frame[9000:10000]))
    ratio = late / early
    ok = 0.5 <= ratio <= 2.0 and elapsed < 10.0
    record(7, "O(1) decision cost", ok,
           f"mean decision {early * 1e6:.1f}us (frames 0-1000) vs {late * 1e6:.1f}us (9000-10000), "
           f"ratio {ratio:.2f} in [0.5, 2.0], {elapsed:.2f}s (budget 10s)")
    assert 0.5 <= ratio <= 2.0
    assert elapsed < 10.0


def test_criterion_8_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    codes = [main(["simulate", "--out", str(p), "--seed", "42"]) for p in (a, b)]
    capsys.readouterr()
    same = a.read_bytes() == b.read_bytes()
    ok = codes == [0, 0] and same
    record(8, "determinism", ok, f"seed 42 twice: RunLog CSVs {'byte-identical' if same else 'differ'}")
    assert codes == [0, 0]
    assert same


def _random_document(rng: random.Random) -> str:
    """A valid rule document with random variables, shapes, units, and rule subset."""
    n_vars = rng.randint(2, 4)
    names = rng.sample(["GU", "GT", "NT", "Load", "Temp", "Count", "Fps", "Mem", "Score", "Out"], n_vars)
    lines = [f"tnorm {rng.choice(['min', 'product'])}", ""]
    term_labels = []
    for name in names:
        n_terms = rng.randint(1, 4)
        lo = round(rng.uniform(-100, 100), rng.randint(0, 3))
        hi = lo + round(rng.uniform(1, 500), rng.randint(0, 3))
        cs = sorted(rng.sample(range(1, 99), n_terms))
        cs = [lo + (hi - lo) * c / 100 for c in cs]
        labels = rng.sample(["L", "M", "H", "VL", "VH", "S", "XL", "Z"], n_terms)
        unit = rng.choice(["", " unit %", " unit °C", " unit ms"])
        lines.append(f"var {name} range {lo!r} {hi!r}{unit} {{")
        if n_terms == 1:
            lines.append(f"    term {labels[0]} trap {lo!r} {lo!r} {hi!r} {hi!r}")
        for i, lab in enumerate(labels if n_terms > 1 else []):
            if i == 0:
                lines.append(f"    term {lab} trap {lo!r} {lo!r} {cs[0]!r} {cs[1]!r}")
            elif i == n_terms - 1:
                lines.append(f"    term {lab} trap {cs[-2]!r} {cs[-1]!r} {hi!r} {hi!r}")
            else:
                lines.append(f"    term {lab} tri {cs[i - 1]!r} {cs[i]!r} {cs[i + 1]!r}")
        lines.append("}")
        lines.append("")
        term_labels.append(labels)
    *in_names, out_name = names
    *in_labels, out_labels = term_labels
    combos = [[]]
    for labels in in_labels:
        combos = [c + [l] for c in combos for l in labels]
    for combo in rng.sample(combos, rng.randint(1, len(combos))):
        ants = " AND ".join(f"{n} is {l}" for n, l in zip(in_names, combo))
        lines.append(f"rule: IF {ants} THEN {out_name} is {rng.choice(out_labels)}")
    return "\n".join(lines) + "\n"


def test_criterion_9_dsl_round_trip():
    builtin = builtin_rulebase()
    failures = []
    if parse_rules(serialize_rules(builtin)) != builtin:
        failures.append("builtin")
    rng = random.Random(99)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuleCoverageWarning)
        for i in range(100):
            doc = _random_document(rng)
            once = parse_rules(doc)
            if parse_rules(serialize_rules(once)) != once:
                failures.append(i)
    rep = check_completeness(builtin)
    summary = rep.summary()
    ok = not failures and summary == "27/27 covered, 0 conflicts"
    record(9, "DSL round-trip", ok,
           f"builtin + 100 generated documents, {len(failures)} mismatches; check-rules: {summary}")
    assert not failures
    assert summary == "27/27 covered, 0 conflicts"

