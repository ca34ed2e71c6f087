import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fuzzyswitch.engine import LinguisticVariable, Rule, RuleBase, trapezoid
from fuzzyswitch.sim import (
    ModelProfile,
    Scenario,
    ScenarioError,
    ThermalModel,
    observe_targets,
    simulate,
    update_temperature,
    update_utilization,
)
from fuzzyswitch.switcher import ModelId


def profile(recall=((0, 1.0),), base=30.0, per=0.5, label="small", index=0):
    return ModelProfile(ModelId(index, label), base, per, recall)


@pytest.fixture
def thermal():
    return ThermalModel(ambient_c=30, heat_gain_c_per_gu=0.5, alpha=0.1)


# --- observe_targets -------------------------------------------------------------

def test_perfect_recall():
    assert observe_targets(profile(), 37) == 37


def test_half_recall():
    assert observe_targets(profile(((0, 0.5),)), 40) == 20


def test_linear_recall_curve():
    p = profile(((0, 0.9), (100, 0.6)))
    # interpolated recall at 50 is 0.75
    assert p.recall(50) == pytest.approx(0.75)
    assert observe_targets(p, 50) == 37


def test_recall_flat_beyond_curve():
    p = profile(((10, 0.9), (100, 0.6)))
    assert p.recall(0) == 0.9 and p.recall(500) == 0.6


def test_seeded_observation_is_binomial():
    p = profile(((0, 0.5),))
    a = [observe_targets(p, 100, np.random.default_rng(3)) for _ in range(3)]
    assert len(set(a)) == 1 and 0 <= a[0] <= 100


@given(st.integers(0, 400), st.floats(0, 1), st.floats(0, 1), st.integers(0, 2**32 - 1))
def test_observed_never_exceeds_true(nt, r0, r1, seed):
    p = profile(((0, r0), (200, r1)))
    assert 0 <= observe_targets(p, nt) <= nt
    assert 0 <= observe_targets(p, nt, np.random.default_rng(seed)) <= nt


# --- utilization and temperature ---------------------------------------------------

def test_utilization_affine():
    assert update_utilization(profile(), 20) == 40.0


def test_utilization_clamped():
    assert update_utilization(profile(base=60, per=3), 20) == 100.0


def test_utilization_repeatable_without_noise():
    p = profile()
    assert update_utilization(p, 11, 0.0, np.random.default_rng(1)) == update_utilization(p, 11, 0.0, np.random.default_rng(2))


@given(st.floats(0, 100), st.floats(0, 5), st.integers(0, 500), st.floats(0, 50), st.integers(0, 2**32 - 1))
def test_utilization_bounds(base, per, nt, sigma, seed):
    gu = update_utilization(profile(base=base, per=per), nt, sigma, np.random.default_rng(seed))
    assert 0.0 <= gu <= 100.0


def test_temperature_fixed_point(thermal):
    ss = thermal.steady_state(80)
    assert update_temperature(thermal, ss, 80) == ss


def test_temperature_alpha_one():
    tm = ThermalModel(30, 0.5, 1.0)
    assert update_temperature(tm, 55.0, 80) == 70.0


def test_temperature_single_step(thermal):
    assert update_temperature(thermal, 30, 80) == pytest.approx(34.0)


@given(st.lists(st.tuples(st.floats(0, 100), st.floats(0, 100)), min_size=1, max_size=50))
def test_thermal_response_monotone_in_gu(pairs):
    tm = ThermalModel(25, 0.45, 0.05)
    lo_t = hi_t = tm.start_c
    for a, b in pairs:
        lo_t = update_temperature(tm, lo_t, min(a, b))
        hi_t = update_temperature(tm, hi_t, max(a, b))
        assert hi_t >= lo_t


# --- scenario validation -------------------------------------------------------------

def _scenario(**kw):
    base = dict(
        name="t",
        models=(profile(((0, 0.8),), index=0, label="small"),
                profile(((0, 0.9),), index=1, label="medium"),
                profile(((0, 0.95),), index=2, label="large")),
        thermal=ThermalModel(25, 0.45, 0.05),
        trace=(5,) * 50,
    )
    base.update(kw)
    return Scenario(**base)


@pytest.mark.parametrize("kw,match", [
    (dict(trace=()), "empty"),
    (dict(trace=(1, -1)), "negative"),
    (dict(threshold_k=0), "threshold_k"),
    (dict(counter_mode="maybe"), "counter_mode"),
    (dict(initial_model=3), "initial_model"),
    (dict(nt_source="guess"), "nt_source"),
])
def test_scenario_invariants(kw, match):
    with pytest.raises(ScenarioError, match=match):
        _scenario(**kw)


def test_roster_must_be_capacity_ordered():
    bad = (profile(((0, 0.9),), index=0, label="small"), profile(((0, 0.8),), index=1, label="large"))
    with pytest.raises(ScenarioError, match="capacity"):
        _scenario(models=bad)


def test_model_profile_invariants():
    with pytest.raises(ScenarioError):
        profile(((0, 1.2),))
    with pytest.raises(ScenarioError):
        profile(((10, 0.5), (10, 0.6)))
    with pytest.raises(ScenarioError):
        profile(base=-1)
    with pytest.raises(ScenarioError):
        ThermalModel(25, 0.5, 0.0)


# --- simulate ----------------------------------------------------------------------

def test_single_model_roster_never_switches():
    ins = tuple(LinguisticVariable(n, 0, 200, (("A", trapezoid(0, 0, 200, 200)),)) for n in ("GU", "GT", "NT"))
    out = LinguisticVariable("Score", 0, 100, (("S", trapezoid(0, 0, 100, 100)),))
    rb = RuleBase(ins, out, (Rule((0, 0, 0), 0),))
    sc = dataclasses.replace(_scenario(), models=(profile(),), trace=tuple(range(0, 200, 2)))
    log = simulate(sc, rb)
    assert not any(r.switched for r in log.records)


def test_steady_low_load_settles(default_scenario, rb):
    sc = dataclasses.replace(default_scenario, trace=(10,) * 1500, rng_seed=None)
    log = simulate(sc, rb)
    assert sum(r.switched for r in log.records[200:]) <= 1


def test_seeded_runs_are_identical(default_scenario, rb):
    a = simulate(default_scenario, rb, seed=42)
    b = simulate(default_scenario, rb, seed=42)
    assert a == b and a.seed == 42
    c = simulate(default_scenario, rb, seed=43)
    assert c != a


def test_unseeded_run_is_noise_free(default_scenario, rb):
    log = simulate(default_scenario, rb)
    assert log.seed is None
    assert log == simulate(default_scenario, rb)
    recs = log.records
    sc = default_scenario
    m0 = sc.models[0]
    assert recs[0].gu == m0.base_load + m0.per_target_load * recs[0].nt_obs


def test_switch_applies_on_next_frame(default_scenario, rb):
    log = simulate(default_scenario, rb)
    recs = log.records
    for prev, cur in zip(recs, recs[1:]):
        assert (cur.model != prev.model) == prev.switched


def test_pinned_arm_logs_scores_but_never_switches(default_scenario, rb):
    log = simulate(default_scenario, rb, pinned=2)
    assert log.arm == "large"
    assert {r.model for r in log.records} == {"large"}
    assert not any(r.switched for r in log.records)
    assert all(0 <= r.score <= 100 for r in log.records)


def test_frame_invariants_under_noise(default_scenario, rb):
    log = simulate(default_scenario, rb, seed=7)
    tm = default_scenario.thermal
    for r in log.records:
        assert 0 <= r.nt_obs <= r.nt_true
        assert 0 <= r.gu <= 100
    for r in log.records[100:]:
        assert tm.ambient_c - 6 * tm.noise_sigma_c <= r.gt <= tm.ambient_c + tm.heat_gain_c_per_gu * 100 + 6 * tm.noise_sigma_c


def test_large_detects_at_least_small(default_scenario, rb):
    small = simulate(default_scenario, rb, pinned=0)
    large = simulate(default_scenario, rb, pinned=2)
    assert sum(r.nt_obs for r in large.records) >= sum(r.nt_obs for r in small.records)


def test_true_count_source(default_scenario, rb):
    sc = dataclasses.replace(default_scenario, nt_source="true", trace=default_scenario.trace[:300])
    assert len(simulate(sc, rb)) == 300


def test_roster_and_output_terms_must_agree(rb):
    sc = _scenario(models=_scenario().models[:2])
    with pytest.raises(ScenarioError, match="terms"):
        simulate(sc, rb)


def test_decision_timing_collected(default_scenario, rb):
    sc = dataclasses.replace(default_scenario, trace=default_scenario.trace[:50])
    log = simulate(sc, rb, time_decisions=True)
    assert len(log.decision_seconds) == 50 and all(s > 0 for s in log.decision_seconds)
