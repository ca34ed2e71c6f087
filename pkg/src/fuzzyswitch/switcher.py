"""Frame-by-frame model selection with a K-frame switching guard.

A switch is only committed once the controller has indicated the same
(non-current) model for ``threshold_k`` consecutive frames. The model chosen
on frame ``t`` is used from frame ``t + 1`` on.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .engine import LinguisticVariable, NoRuleFired, RuleBase, infer

COUNTER_MODES = ("same_candidate", "any_difference")
DEFAULT_ROSTER = ("small", "medium", "large")


@dataclass(frozen=True)
class ModelId:
    index: int
    label: str

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class Telemetry:
    gu: float
    gt: float
    nt: int

    def __post_init__(self):
        if not math.isfinite(self.gu) or not math.isfinite(self.gt):
            raise ValueError(f"telemetry must be finite, got gu={self.gu} gt={self.gt}")
        if self.nt < 0:
            raise ValueError(f"target count must be nonnegative, got {self.nt}")

    def as_inputs(self) -> tuple[float, float, float]:
        return (self.gu, self.gt, self.nt)


def select_model(score: float, output_var: LinguisticVariable, roster: Sequence[str] | int) -> ModelId:
    """Map a crisp score to the model of its highest-membership output term.

    Terms map positionally onto the capacity-ordered roster; ties go to the
    smaller model.
    """
    labels = tuple(output_var.labels) if isinstance(roster, int) else tuple(roster)
    n = roster if isinstance(roster, int) else len(labels)
    if n != len(output_var.terms):
        raise ValueError(
            f"roster has {n} models but {output_var.name} has {len(output_var.terms)} terms"
        )
    x = output_var.clamp(score)
    degrees = [mf(x) for mf in output_var.mfs]
    best = max(range(n), key=degrees.__getitem__)  # first maximum == smallest model
    return ModelId(best, labels[best])


@dataclass(frozen=True)
class SwitcherState:
    prev_model: ModelId
    roster: tuple[str, ...] = DEFAULT_ROSTER
    threshold_k: int = 5
    counter_mode: str = "same_candidate"
    candidate: Optional[ModelId] = None
    streak: int = 0
    frame: int = 0
    initial_index: int = 0

    def __post_init__(self):
        if self.threshold_k < 1:
            raise ValueError(f"threshold_k must be >= 1, got {self.threshold_k}")
        if self.counter_mode not in COUNTER_MODES:
            raise ValueError(f"counter_mode must be one of {COUNTER_MODES}")
        if not 0 <= self.prev_model.index < len(self.roster):
            raise ValueError(f"model {self.prev_model} not in roster {self.roster}")

    @classmethod
    def initial(cls, roster: Sequence[str] = DEFAULT_ROSTER, threshold_k: int = 5,
                counter_mode: str = "same_candidate", initial_index: int = 0) -> "SwitcherState":
        roster = tuple(roster)
        return cls(ModelId(initial_index, roster[initial_index]), roster, threshold_k,
                   counter_mode, initial_index=initial_index)


@dataclass(frozen=True)
class Decision:
    frame_index: int
    model_used: ModelId
    candidate_model: ModelId
    score: float
    switched: bool
    error: Optional[str] = None


def reset(state: SwitcherState) -> SwitcherState:
    return SwitcherState.initial(state.roster, state.threshold_k, state.counter_mode, state.initial_index)


def step(state: SwitcherState, t: Telemetry, rb: RuleBase) -> tuple[SwitcherState, Decision]:
    """Advance one frame.

    ``Decision.model_used`` is the model this frame runs on; a switch decided
    here only affects the next frame. If no rule fires, the current model is
    held and the streak restarts.
    """
    used = state.prev_model
    frame = state.frame
    try:
        score = infer(rb, t).score
    except NoRuleFired as exc:
        return _advance(state, used, None, 0), Decision(frame, used, used, math.nan, False, str(exc))

    opt = select_model(score, rb.output, state.roster)
    if opt == used:
        return _advance(state, used, None, 0), Decision(frame, used, opt, score, False)

    if state.counter_mode == "same_candidate":
        streak = state.streak + 1 if opt == state.candidate else 1
    else:
        streak = state.streak + 1
    if streak >= state.threshold_k:
        return _advance(state, opt, None, 0), Decision(frame, used, opt, score, True)
    return _advance(state, used, opt, streak), Decision(frame, used, opt, score, False)


def _advance(state: SwitcherState, model: ModelId, candidate: Optional[ModelId], streak: int) -> SwitcherState:
    # positional construction; dataclasses.replace is a measurable share of a step
    return SwitcherState(model, state.roster, state.threshold_k, state.counter_mode,
                         candidate, streak, state.frame + 1, state.initial_index)
