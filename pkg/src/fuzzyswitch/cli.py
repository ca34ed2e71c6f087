"""Command-line entry point.

    fuzzyswitch eval --gu 90 --gt 90 --nt 150
    fuzzyswitch simulate --out run.csv [--scenario FILE] [--arm small] [--seed 42]
    fuzzyswitch report --in run.csv [--bins 500]
    fuzzyswitch check-rules [--rules FILE]

Exit codes: 0 success, 1 usage, 2 validation, 3 runtime.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .dsl import DSLError, RuleCoverageWarning, check_completeness, parse_rules
from .engine import NoRuleFired, infer
from .metrics import EmptyLogError, report, summarize
from .sim import ScenarioError, simulate
from .switcher import DEFAULT_ROSTER, select_model
from .traceio import (
    RunLogError,
    TraceError,
    data_path,
    load_rules,
    load_scenario,
    read_runlog_csv,
    write_json,
    write_runlog_csv,
)

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_RUNTIME = 0, 1, 2, 3
VALIDATION_ERRORS = (DSLError, ScenarioError, TraceError, RunLogError, EmptyLogError, ValueError)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(doc, pretty: bool, render=None):
    if pretty and render is not None:
        print(render(doc))
    else:
        print(json.dumps(doc, indent=2, ensure_ascii=False))


def _render_summary(s: dict) -> str:
    rows = [
        ("frames", s["frames"]),
        ("AVTG", f"{s['avtg']:.4f}"),
        ("targets detected", s["total_nt_observed"]),
        ("total GU", f"{s['total_gu']:.1f}"),
        ("switches", s["switch_count"]),
        ("peak temp (C)", f"{s['peak_temp_c']:.2f}"),
        ("mean temp (C)", f"{s['mean_temp_c']:.2f}"),
    ]
    rows += [(f"frames on {m}", n) for m, n in s["model_frames"].items()]
    width = max(len(k) for k, _ in rows)
    lines = [f"{k:<{width}}  {v}" for k, v in rows]
    lines.append("")
    lines.append(f"{'Frames Range':<14}Switch Numbers")
    lines += [f"{h['range']:<14}{h['switches']}" for h in s["switch_histogram"]]
    return "\n".join(lines)


def cmd_eval(args) -> int:
    rb = load_rules(args.rules)
    inputs = (args.gu, args.gt, args.nt)
    for v, x in zip(rb.inputs, inputs):
        if not v.lo <= x <= v.hi:
            print(f"warning: {v.name}={x:g} outside [{v.lo:g}, {v.hi:g}], clamped", file=sys.stderr)
    try:
        res = infer(rb, inputs)
    except NoRuleFired as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    roster = DEFAULT_ROSTER if len(rb.output.terms) == len(DEFAULT_ROSTER) else rb.output.labels
    model = select_model(res.score, rb.output, roster)
    doc = {
        "inputs": {v.name: x for v, x in zip(rb.inputs, inputs)},
        "score": res.score,
        "term": rb.output.labels[model.index],
        "model": model.label,
        "fired": [
            {"rule": rb.describe(r), "strength": a}
            for r, a in zip(rb.rules, res.per_rule_strengths) if a > 0
        ],
        "clamped": list(res.clamped),
    }

    def render(d):
        lines = [f"score {d['score']:.3f} -> {d['term']} -> model {d['model']}"]
        lines += [f"  {f['strength']:.3f}  {f['rule']}" for f in d["fired"]]
        if d["clamped"]:
            lines.append("clamped: " + ", ".join(d["clamped"]))
        return "\n".join(lines)

    _emit(doc, args.pretty, render)
    return EXIT_OK


def _run_arm(scenario_path, rules_path, arm, seed, out, bins):
    sc = load_scenario(scenario_path)
    rb = load_rules(rules_path or sc.rules_path)
    if arm == "adaptive":
        pinned = None
    elif arm in sc.roster:
        pinned = sc.roster.index(arm)
    else:
        raise ScenarioError(f"arm {arm!r} is neither 'adaptive' nor a roster model {sc.roster}")
    log = simulate(sc, rb, pinned=pinned, seed=seed)
    write_runlog_csv(log, out)
    return {"scenario": sc.name, "arm": arm, "seed": log.seed, "log": str(out),
            "summary": summarize(log, bins).to_dict()}


def cmd_simulate(args) -> int:
    out = Path(args.out)
    if args.all_arms:
        sc = load_scenario(args.scenario)
        arms = ["adaptive", *sc.roster]
        outs = [out.with_name(f"{out.stem}_{a}{out.suffix or '.csv'}") for a in arms]
        with ProcessPoolExecutor() as pool:
            futs = [pool.submit(_run_arm, args.scenario, args.rules, a, args.seed, o, args.bins)
                    for a, o in zip(arms, outs)]
            docs = [f.result() for f in futs]
        summary_path = Path(args.summary) if args.summary else out.with_name(f"{out.stem}_arms.summary.json")
        doc = {"arms": docs}
        write_json(doc, summary_path)
        if args.pretty:
            print("\n\n".join(f"[{d['arm']}]\n" + _render_summary(d["summary"]) for d in docs))
        else:
            print(json.dumps({d["arm"]: {"switches": d["summary"]["switch_count"],
                                         "avtg": d["summary"]["avtg"],
                                         "peak_temp_c": d["summary"]["peak_temp_c"]} for d in docs},
                             indent=2))
        return EXIT_OK
    doc = _run_arm(args.scenario, args.rules, args.arm, args.seed, out, args.bins)
    summary_path = Path(args.summary) if args.summary else out.with_suffix(".summary.json")
    write_json(doc, summary_path)
    s = doc["summary"]
    print(f"{doc['arm']}: {s['switch_count']} switches, AVTG {s['avtg']:.6f}", file=sys.stderr)
    _emit(doc, args.pretty, lambda d: _render_summary(d["summary"]))
    return EXIT_OK


def cmd_report(args) -> int:
    log = read_runlog_csv(args.input)
    if not log.records:
        raise EmptyLogError()
    doc = report(log, args.bins)
    _emit(doc, args.pretty, lambda d: _render_summary(d["summary"]))
    return EXIT_OK


def cmd_check_rules(args) -> int:
    path = Path(args.rules) if args.rules else data_path("builtin.frb")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuleCoverageWarning)
        rb = parse_rules(path.read_text(encoding="utf-8"), strict=False)
    rep = check_completeness(rb)
    print(rep.summary())
    for ants in rep.gaps:
        print(f"warning: no rule for {' '.join(ants)}", file=sys.stderr)
    for ants, cons in rep.conflicts:
        print(f"conflict: {' '.join(ants)} -> {' / '.join(cons)}", file=sys.stderr)
    return EXIT_VALIDATION if rep.conflicts else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fuzzyswitch", description="Fuzzy-controlled model switching for video inference.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("eval", help="run the controller on one telemetry sample")
    e.add_argument("--gu", type=float, required=True, help="GPU utilization, percent")
    e.add_argument("--gt", type=float, required=True, help="GPU temperature, degrees C")
    e.add_argument("--nt", type=float, required=True, help="targets in the current frame")
    e.add_argument("--rules", help="rule file (default: built-in 27-rule base)")
    e.add_argument("--pretty", action="store_true")
    e.set_defaults(func=cmd_eval)

    s = sub.add_parser("simulate", help="run a scenario and write its RunLog CSV")
    s.add_argument("--scenario", help="scenario file (default: shipped 2000-frame scenario)")
    s.add_argument("--out", required=True, help="RunLog CSV path")
    s.add_argument("--summary", help="summary JSON path (default: next to --out)")
    s.add_argument("--seed", type=int, help="enable noise with this seed")
    s.add_argument("--arm", default="adaptive", help="adaptive, or a roster model to pin (small|medium|large)")
    s.add_argument("--all-arms", action="store_true", help="run adaptive and every single-model arm")
    s.add_argument("--rules", help="rule file overriding the scenario's")
    s.add_argument("--bins", type=int, default=500)
    s.add_argument("--pretty", action="store_true")
    s.set_defaults(func=cmd_simulate)

    r = sub.add_parser("report", help="summarize a RunLog CSV")
    r.add_argument("--in", dest="input", required=True)
    r.add_argument("--bins", type=int, default=500)
    r.add_argument("--pretty", action="store_true")
    r.set_defaults(func=cmd_report)

    c = sub.add_parser("check-rules", help="completeness and conflict check for a rule file")
    c.add_argument("--rules", help="rule file (default: built-in)")
    c.set_defaults(func=cmd_check_rules)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "bins", 1) < 1:
        print("error: --bins must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (NoRuleFired, OSError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
