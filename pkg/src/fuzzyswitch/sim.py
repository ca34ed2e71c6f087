"""Closed-loop device simulation driving the switcher over a target-count trace.

Each frame the model in use detects a share of the true targets, which sets
GPU utilization; utilization drives a first-order thermal model; the
resulting (GU, GT, NT) telemetry feeds the controller, whose decision applies
from the next frame.
"""
from __future__ import annotations

import bisect
import logging
import math
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .engine import RuleBase, infer, NoRuleFired
from .switcher import ModelId, SwitcherState, Telemetry, COUNTER_MODES, step

log = logging.getLogger(__name__)

NT_SOURCES = ("observed", "true")


class ScenarioError(ValueError):
    """A scenario violates one of its invariants."""


@dataclass(frozen=True)
class ModelProfile:
    id: ModelId
    base_load: float
    per_target_load: float
    recall_curve: tuple[tuple[float, float], ...]
    latency_ms: float = 0.0

    def __post_init__(self):
        curve = tuple((float(x), float(r)) for x, r in self.recall_curve)
        object.__setattr__(self, "recall_curve", curve)
        name = self.id.label
        if not curve:
            raise ScenarioError(f"{name}: empty recall curve")
        xs = [x for x, _ in curve]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ScenarioError(f"{name}: recall curve abscissae must increase strictly")
        if any(not 0.0 <= r <= 1.0 for _, r in curve):
            raise ScenarioError(f"{name}: recall must lie in [0, 1]")
        if self.base_load < 0 or self.per_target_load < 0:
            raise ScenarioError(f"{name}: loads must be nonnegative")

    def recall(self, nt: float) -> float:
        """Piecewise-linear recall, held flat beyond the first and last points."""
        curve = self.recall_curve
        if nt <= curve[0][0]:
            return curve[0][1]
        if nt >= curve[-1][0]:
            return curve[-1][1]
        i = bisect.bisect_right([x for x, _ in curve], nt)
        (x0, r0), (x1, r1) = curve[i - 1], curve[i]
        return r0 + (r1 - r0) * (nt - x0) / (x1 - x0)


@dataclass(frozen=True)
class ThermalModel:
    ambient_c: float
    heat_gain_c_per_gu: float
    alpha: float
    noise_sigma_c: float = 0.0
    initial_c: Optional[float] = None

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ScenarioError(f"thermal alpha must be in (0, 1], got {self.alpha}")
        if self.noise_sigma_c < 0:
            raise ScenarioError("thermal noise sigma must be >= 0")

    @property
    def start_c(self) -> float:
        return self.ambient_c if self.initial_c is None else self.initial_c

    def steady_state(self, gu: float) -> float:
        return self.ambient_c + self.heat_gain_c_per_gu * gu


def recall_dominates(big: ModelProfile, small: ModelProfile) -> bool:
    """True if ``big``'s recall is >= ``small``'s everywhere."""
    # both curves are linear between the union of their knots and flat outside
    xs = sorted({x for x, _ in big.recall_curve} | {x for x, _ in small.recall_curve})
    return all(big.recall(x) >= small.recall(x) - 1e-12 for x in xs)


@dataclass(frozen=True)
class Scenario:
    name: str
    models: tuple[ModelProfile, ...]
    thermal: ThermalModel
    trace: tuple[int, ...]
    threshold_k: int = 5
    counter_mode: str = "same_candidate"
    rng_seed: Optional[int] = None
    gu_noise_sigma: float = 0.0
    nt_source: str = "observed"
    initial_model: int = 0
    rules_path: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "models", tuple(self.models))
        object.__setattr__(self, "trace", tuple(int(n) for n in self.trace))
        if not self.models:
            raise ScenarioError("model roster is empty")
        for i, m in enumerate(self.models):
            if m.id.index != i:
                raise ScenarioError(f"model {m.id.label} has index {m.id.index}, expected {i}")
        labels = [m.id.label for m in self.models]
        if len(set(labels)) != len(labels):
            raise ScenarioError(f"duplicate model labels {labels}")
        for small, big in zip(self.models, self.models[1:]):
            if not recall_dominates(big, small):
                raise ScenarioError(
                    f"roster not capacity-ordered: recall of {big.id.label} "
                    f"drops below {small.id.label}"
                )
        if not self.trace:
            raise ScenarioError("trace is empty")
        if min(self.trace) < 0:
            raise ScenarioError("trace has negative target counts")
        if self.threshold_k < 1:
            raise ScenarioError(f"threshold_k must be >= 1, got {self.threshold_k}")
        if self.counter_mode not in COUNTER_MODES:
            raise ScenarioError(f"counter_mode must be one of {COUNTER_MODES}")
        if self.nt_source not in NT_SOURCES:
            raise ScenarioError(f"nt_source must be one of {NT_SOURCES}")
        if self.gu_noise_sigma < 0:
            raise ScenarioError("gu noise sigma must be >= 0")
        if not 0 <= self.initial_model < len(self.models):
            raise ScenarioError(f"initial_model {self.initial_model} not in roster")

    @property
    def roster(self) -> tuple[str, ...]:
        return tuple(m.id.label for m in self.models)


@dataclass(frozen=True)
class FrameRecord:
    frame: int
    model: str
    gu: float
    gt: float
    nt_true: int
    nt_obs: int
    score: float
    switched: bool


@dataclass
class RunLog:
    records: list[FrameRecord]
    scenario: str = ""
    seed: Optional[int] = None
    arm: str = "adaptive"
    decision_seconds: list[float] = field(default_factory=list, repr=False, compare=False)

    def __len__(self):
        return len(self.records)

    def column(self, name: str) -> list:
        return [getattr(r, name) for r in self.records]


def observe_targets(profile: ModelProfile, nt_true: int, rng: np.random.Generator | None = None) -> int:
    if nt_true < 0:
        raise ValueError(f"nt_true must be >= 0, got {nt_true}")
    p = profile.recall(nt_true)
    if rng is None:
        # epsilon absorbs products like 0.57 * 100 = 56.99999999999999
        return min(nt_true, math.floor(nt_true * p + 1e-9))
    return int(rng.binomial(nt_true, p))


def update_utilization(profile: ModelProfile, nt_observed: int, gu_noise: float = 0.0,
                       rng: np.random.Generator | None = None) -> float:
    if nt_observed < 0:
        raise ValueError(f"nt_observed must be >= 0, got {nt_observed}")
    gu = profile.base_load + profile.per_target_load * nt_observed
    if rng is not None and gu_noise > 0:
        gu += rng.normal(0.0, gu_noise)
    return min(max(gu, 0.0), 100.0)


def update_temperature(tm: ThermalModel, prev_t: float, gu: float,
                       rng: np.random.Generator | None = None) -> float:
    t = prev_t + tm.alpha * (tm.steady_state(gu) - prev_t)
    if rng is not None and tm.noise_sigma_c > 0:
        t += rng.normal(0.0, tm.noise_sigma_c)
    return t


def _score_only(rb: RuleBase, t: Telemetry) -> float:
    try:
        return infer(rb, t).score
    except NoRuleFired:
        return math.nan


def simulate(sc: Scenario, rb: RuleBase, pinned: Optional[int] = None, seed: Optional[int] = None,
             time_decisions: bool = False) -> RunLog:
    """Run the scenario's trace through the device model and controller.

    ``pinned`` fixes one model for the whole run (single-model arms); the
    controller score is still logged but never acted on. With no seed (from
    the argument or the scenario) the run is fully deterministic: every
    noise source is off and detection is the floor of expected recall.
    """
    if len(rb.output.terms) != len(sc.models) and pinned is None:
        raise ScenarioError(
            f"roster has {len(sc.models)} models but {rb.output.name} has {len(rb.output.terms)} terms"
        )
    seed = sc.rng_seed if seed is None else seed
    rng = np.random.default_rng(seed) if seed is not None else None
    start = sc.initial_model if pinned is None else pinned
    state = SwitcherState.initial(sc.roster, sc.threshold_k, sc.counter_mode, start)
    temp = sc.thermal.start_c
    records = []
    timings: list[float] = []
    for frame, nt_true in enumerate(sc.trace):
        profile = sc.models[state.prev_model.index]
        nt_obs = observe_targets(profile, nt_true, rng)
        gu = update_utilization(profile, nt_obs, sc.gu_noise_sigma, rng)
        temp = update_temperature(sc.thermal, temp, gu, rng)
        telemetry = Telemetry(gu, temp, nt_obs if sc.nt_source == "observed" else nt_true)
        if pinned is not None:
            score, switched = _score_only(rb, telemetry), False
            used = profile.id.label
        else:
            t0 = time.perf_counter() if time_decisions else 0.0
            state, decision = step(state, telemetry, rb)
            if time_decisions:
                timings.append(time.perf_counter() - t0)
            score, switched, used = decision.score, decision.switched, decision.model_used.label
        records.append(FrameRecord(frame, used, gu, temp, nt_true, nt_obs, score, switched))
    arm = "adaptive" if pinned is None else sc.roster[pinned]
    switches = sum(r.switched for r in records)
    log.info("%s [%s]: %d frames, %d switches", sc.name, arm, len(records), switches)
    return RunLog(records, sc.name, seed, arm, timings)
