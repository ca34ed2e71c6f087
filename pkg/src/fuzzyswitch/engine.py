"""Mamdani fuzzy inference over piecewise-linear membership functions.

The pipeline is fuzzify -> firing strength -> min implication -> max
aggregation -> centroid defuzzification. Every aggregate produced here is a
piecewise-linear curve, so the centroid is integrated exactly over its
breakpoints rather than approximated on the sample grid.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field, InitVar
from functools import cached_property
from typing import Sequence

import numpy as np

log = logging.getLogger(__name__)

DEFAULT_SAMPLES = 1001
TNORMS = ("min", "product")


class NoRuleFired(RuntimeError):
    """Raised when the aggregated output set is identically zero."""

    def __init__(self, msg: str = "no rule fired"):
        super().__init__(msg)


@dataclass(frozen=True)
class MembershipFunction:
    """Triangle ``(a, b, c)`` or trapezoid ``(a, b, c, d)``.

    A vertical left edge (``a == b``) is a left shoulder and keeps full
    membership for every ``x`` below ``b``; a vertical right edge does the
    same to the right.
    """

    kind: str
    points: tuple[float, ...]

    def __post_init__(self):
        want = {"triangle": 3, "trapezoid": 4}.get(self.kind)
        if want is None:
            raise ValueError(f"unknown membership shape {self.kind!r}")
        pts = tuple(float(p) for p in self.points)
        if len(pts) != want:
            raise ValueError(f"{self.kind} needs {want} points, got {len(pts)}")
        if not all(math.isfinite(p) for p in pts):
            raise ValueError(f"non-finite abscissa in {pts}")
        if any(p > q for p, q in zip(pts, pts[1:])):
            raise ValueError(f"abscissae must be nondecreasing, got {pts}")
        object.__setattr__(self, "points", pts)
        corners = (pts[0], pts[1], pts[1], pts[2]) if self.kind == "triangle" else pts
        object.__setattr__(self, "_corners", corners)

    @property
    def corners(self) -> tuple[float, float, float, float]:
        """A triangle is the trapezoid (a, b, b, c)."""
        return self._corners

    def __call__(self, x: float) -> float:
        a, b, c, d = self._corners
        if x < b:
            if a == b:
                return 1.0
            if x <= a:
                return 0.0
            return (x - a) / (b - a)
        if x <= c or c == d:
            return 1.0
        if x >= d:
            return 0.0
        return (d - x) / (d - c)

    def support(self) -> tuple[float, float]:
        """Closure of the region with nonzero membership (shoulders are infinite)."""
        a, b, c, d = self.corners
        return (-math.inf if a == b else a, math.inf if c == d else d)


def triangle(a: float, b: float, c: float) -> MembershipFunction:
    return MembershipFunction("triangle", (a, b, c))


def trapezoid(a: float, b: float, c: float, d: float) -> MembershipFunction:
    return MembershipFunction("trapezoid", (a, b, c, d))


def membership(mf: MembershipFunction, x: float) -> float:
    if not math.isfinite(x):
        raise ValueError(f"membership input must be finite, got {x}")
    return mf(x)


@dataclass(frozen=True)
class LinguisticVariable:
    name: str
    lo: float
    hi: float
    terms: tuple[tuple[str, MembershipFunction], ...]
    unit: str = ""

    def __post_init__(self):
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))
        object.__setattr__(self, "terms", tuple((str(l), mf) for l, mf in self.terms))
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)) or self.lo >= self.hi:
            raise ValueError(f"{self.name}: universe needs lo < hi, got [{self.lo}, {self.hi}]")
        if not self.terms:
            raise ValueError(f"{self.name}: no terms")
        labels = self.labels
        if len(set(labels)) != len(labels):
            raise ValueError(f"{self.name}: duplicate term labels in {labels}")
        for label, mf in self.terms:
            if mf.points[0] < self.lo or mf.points[-1] > self.hi:
                raise ValueError(
                    f"{self.name}: term {label} support {mf.points} lies outside "
                    f"universe [{self.lo}, {self.hi}]"
                )
        gap = self._coverage_gap()
        if gap is not None:
            raise ValueError(f"{self.name}: no term covers x={gap}")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.terms)

    @cached_property
    def mfs(self) -> tuple[MembershipFunction, ...]:
        return tuple(mf for _, mf in self.terms)

    @cached_property
    def corner_table(self) -> tuple[tuple[int, float, float, float, float], ...]:
        return tuple((j, *mf.corners) for j, mf in enumerate(self.mfs))

    @cached_property
    def segments(self):
        return _linear_segments(self.mfs, self.lo, self.hi)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"variable {self.name} has no term {label!r}") from None

    def clamp(self, x: float) -> float:
        return min(max(x, self.lo), self.hi)

    def breakpoints(self) -> list[float]:
        """Universe ends plus every term corner; all terms are linear in between."""
        pts = {self.lo, self.hi}
        for mf in self.mfs:
            pts.update(p for p in mf.points if self.lo < p < self.hi)
        return sorted(pts)

    def _coverage_gap(self):
        # memberships are linear between breakpoints and nonnegative, so checking
        # breakpoints and midpoints is exhaustive
        xs = self.breakpoints()
        probes = xs + [(x0 + x1) / 2 for x0, x1 in zip(xs, xs[1:])]
        for x in probes:
            if not any(mf(x) > 0 for mf in self.mfs):
                return x
        return None


@dataclass(frozen=True)
class MembershipVector:
    variable: LinguisticVariable
    degrees: tuple[float, ...]
    clamped: bool = False

    def __getitem__(self, j: int) -> float:
        return self.degrees[j]

    def __len__(self) -> int:
        return len(self.degrees)


def fuzzify(v: LinguisticVariable, x: float) -> MembershipVector:
    """Membership degree of ``x`` in every term of ``v``, in term order.

    Inputs outside the universe are clamped to it; the vector records that.
    """
    if not math.isfinite(x):
        raise ValueError(f"{v.name}: input must be finite, got {x}")
    xc = v.clamp(x)
    if xc != x:
        log.debug("%s=%g clamped to %g", v.name, x, xc)
    return MembershipVector(v, tuple(mf(xc) for _, mf in v.terms), clamped=xc != x)


@dataclass(frozen=True)
class Rule:
    antecedents: tuple[int, ...]
    consequent: int

    def __post_init__(self):
        object.__setattr__(self, "antecedents", tuple(int(q) for q in self.antecedents))


@dataclass(frozen=True)
class RuleBase:
    inputs: tuple[LinguisticVariable, ...]
    output: LinguisticVariable
    rules: tuple[Rule, ...]
    tnorm: str = "min"
    check_conflicts: InitVar[bool] = True

    def __post_init__(self, check_conflicts):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "rules", tuple(self.rules))
        if self.tnorm not in TNORMS:
            raise ValueError(f"tnorm must be one of {TNORMS}, got {self.tnorm!r}")
        names = [v.name for v in self.inputs] + [self.output.name]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        p = len(self.inputs)
        for r, rule in enumerate(self.rules):
            if len(rule.antecedents) != p:
                raise ValueError(f"rule {r}: expected {p} antecedents, got {len(rule.antecedents)}")
            for v, q in zip(self.inputs, rule.antecedents):
                if not 0 <= q < len(v.terms):
                    raise ValueError(f"rule {r}: term index {q} invalid for {v.name}")
            if not 0 <= rule.consequent < len(self.output.terms):
                raise ValueError(f"rule {r}: consequent {rule.consequent} invalid for {self.output.name}")
        if check_conflicts:
            clashes = self.conflicts()
            if clashes:
                raise ValueError(f"conflicting rules for antecedents {clashes[0]}")

    @cached_property
    def rules_by_antecedents(self) -> dict[tuple[int, ...], list[tuple[int, int]]]:
        table: dict[tuple[int, ...], list[tuple[int, int]]] = {}
        for r, rule in enumerate(self.rules):
            table.setdefault(rule.antecedents, []).append((r, rule.consequent))
        return table

    @cached_property
    def rules_by_flat_index(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Rules per antecedent combination, indexed row-major over the input terms."""
        n = 1
        for v in self.inputs:
            n *= len(v.terms)
        table: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for r, rule in enumerate(self.rules):
            f = 0
            for v, q in zip(self.inputs, rule.antecedents):
                f = f * len(v.terms) + q
            table[f].append((r, rule.consequent))
        return tuple(tuple(t) for t in table)

    def conflicts(self) -> list[tuple[int, ...]]:
        """Antecedent combinations mapped to more than one consequent."""
        seen: dict[tuple[int, ...], set[int]] = {}
        for rule in self.rules:
            seen.setdefault(rule.antecedents, set()).add(rule.consequent)
        return [ants for ants, cons in seen.items() if len(cons) > 1]

    def lookup(self, *labels: str) -> str:
        """Consequent label of the rule whose antecedents carry ``labels``."""
        ants = tuple(v.index(l) for v, l in zip(self.inputs, labels))
        for rule in self.rules:
            if rule.antecedents == ants:
                return self.output.labels[rule.consequent]
        raise KeyError(f"no rule for {labels}")

    def describe(self, rule: Rule) -> str:
        parts = " AND ".join(
            f"{v.name} is {v.labels[q]}" for v, q in zip(self.inputs, rule.antecedents)
        )
        return f"IF {parts} THEN {self.output.name} is {self.output.labels[rule.consequent]}"


def firing_strength(rule: Rule, inputs: Sequence[MembershipVector], tnorm: str = "min") -> float:
    if len(inputs) != len(rule.antecedents):
        raise ValueError(
            f"rule has {len(rule.antecedents)} antecedents but {len(inputs)} inputs were given"
        )
    degrees = [mv.degrees[q] for mv, q in zip(inputs, rule.antecedents)]
    if tnorm == "min":
        return min(degrees)
    if tnorm == "product":
        return math.prod(degrees)
    raise ValueError(f"unknown tnorm {tnorm!r}")


@dataclass(frozen=True)
class SampleGrid:
    """Uniform sampling of an output universe."""

    variable: LinguisticVariable
    n: int = DEFAULT_SAMPLES

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need at least 2 samples")

    @cached_property
    def ys(self) -> np.ndarray:
        return np.linspace(self.variable.lo, self.variable.hi, self.n)


def _sample(mf: MembershipFunction, ys: np.ndarray) -> np.ndarray:
    a, b, c, d = mf.corners
    with np.errstate(divide="ignore", invalid="ignore"):
        left = np.ones_like(ys) if a == b else np.clip((ys - a) / (b - a), 0.0, 1.0)
        right = np.ones_like(ys) if c == d else np.clip((d - ys) / (d - c), 0.0, 1.0)
    return np.minimum(left, right)


@dataclass(frozen=True)
class ClippedSet:
    """Consequent set cut at a rule's firing strength."""

    alpha: float
    mf: MembershipFunction
    grid: SampleGrid
    values: np.ndarray = field(repr=False, compare=False)


def implicate(alpha: float, consequent: MembershipFunction, grid: SampleGrid) -> ClippedSet:
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"firing strength must lie in [0, 1], got {alpha}")
    return ClippedSet(alpha, consequent, grid, np.minimum(alpha, _sample(consequent, grid.ys)))


@dataclass(frozen=True)
class AggregatedOutput:
    """Max-aggregated output set.

    ``pieces`` holds the (clip level, consequent) pairs the curve was built
    from; when present the centroid is exact. A curve built only from samples
    (``pieces is None``) is treated as linear between samples.
    """

    variable: LinguisticVariable
    ys: np.ndarray = field(repr=False)
    mu: np.ndarray = field(repr=False)
    strengths: tuple[float, ...] = ()
    pieces: tuple[tuple[float, MembershipFunction], ...] | None = None

    def __post_init__(self):
        if len(self.ys) < 2 or len(self.ys) != len(self.mu):
            raise ValueError("aggregate needs >= 2 samples with one membership each")

    @classmethod
    def from_samples(cls, variable: LinguisticVariable, mu, ys=None) -> "AggregatedOutput":
        mu = np.asarray(mu, dtype=float)
        if ys is None:
            ys = np.linspace(variable.lo, variable.hi, len(mu))
        if np.any(mu < 0) or np.any(mu > 1):
            raise ValueError("sample memberships must lie in [0, 1]")
        return cls(variable, np.asarray(ys, dtype=float), mu)


def aggregate(clipped: Sequence[ClippedSet], strengths: Sequence[float] = ()) -> AggregatedOutput:
    """Pointwise maximum of clipped consequents (all on one grid)."""
    if not clipped:
        raise ValueError("nothing to aggregate")
    grid = clipped[0].grid
    if any(c.grid != grid for c in clipped):
        raise ValueError("clipped sets are sampled on different grids")
    mu = np.max(np.stack([c.values for c in clipped]), axis=0)
    # max(min(a1, f), min(a2, f)) == min(max(a1, a2), f): one piece per consequent
    levels: dict[MembershipFunction, float] = {}
    for c in clipped:
        levels[c.mf] = max(levels.get(c.mf, 0.0), c.alpha)
    pieces = tuple((a, mf) for mf, a in levels.items())
    return AggregatedOutput(grid.variable, grid.ys, mu, tuple(strengths), pieces)


def _linear_segments(mfs, lo: float, hi: float):
    """Split [lo, hi] at every corner; per interval, the terms that are nonzero on it.

    Returns ``[(x0, x1, ((term, mu(x0), mu(x1)), ...)), ...]``.
    """
    xs = {lo, hi}
    for mf in mfs:
        xs.update(p for p in mf.points if lo < p < hi)
    xs = sorted(xs)
    out = []
    for x0, x1 in zip(xs, xs[1:]):
        segs = []
        for t, mf in enumerate(mfs):
            u, w = mf(x0), mf(x1)
            if u > 0.0 or w > 0.0:
                segs.append((t, u, w))
        out.append((x0, x1, tuple(segs)))
    return out


def _at(x0, x1, u, w, x):
    return u + (w - u) * (x - x0) / (x1 - x0)


def _envelope_knots(x0, x1, lines):
    """Knots of ``max_k min(a_k, line_k)`` on [x0, x1]; linear between knots."""
    if len(lines) == 1:
        a, u, w = lines[0]
        if (u - a) * (w - a) < 0.0:
            xc = x0 + (x1 - x0) * (a - u) / (w - u)
            return [(x0, min(a, u)), (xc, a), (x1, min(a, w))]
        return [(x0, min(a, u)), (x1, min(a, w))]
    cuts = {x0, x1}
    for a, u, w in lines:
        if (u - a) * (w - a) < 0.0:
            cuts.add(x0 + (x1 - x0) * (a - u) / (w - u))
    cuts = sorted(cuts)
    xs = []
    n = len(lines)
    for s0, s1 in zip(cuts, cuts[1:]):
        v0 = [min(a, _at(x0, x1, u, w, s0)) for a, u, w in lines]
        v1 = [min(a, _at(x0, x1, u, w, s1)) for a, u, w in lines]
        xs.append(s0)
        for i in range(n):
            for j in range(i + 1, n):
                d0 = v0[i] - v0[j]
                d1 = v1[i] - v1[j]
                if d0 * d1 < 0.0:
                    xs.append(s0 + (s1 - s0) * d0 / (d0 - d1))
    xs.append(x1)
    xs.sort()
    return [(x, max(min(a, _at(x0, x1, u, w, x)) for a, u, w in lines)) for x in xs]


def _pair_moments(x0, x1, p, q) -> tuple[float, float]:
    """Area and moment of ``max(min(a, f), min(b, g))`` for two lines on [x0, x1]."""
    a, u, w = p
    b, r, s = q
    h = x1 - x0
    cuts = [x0, x1]
    if (u - a) * (w - a) < 0.0:
        cuts.append(x0 + h * (a - u) / (w - u))
    if (r - b) * (s - b) < 0.0:
        cuts.append(x0 + h * (b - r) / (s - r))
    if len(cuts) > 2:
        cuts.sort()
    area = moment = 0.0
    xa = x0
    fa = min(a, u)
    ga = min(b, r)
    for xb in cuts[1:]:
        if xb <= xa:
            continue
        t = (xb - x0) / h
        fb = min(a, u + (w - u) * t)
        gb = min(b, r + (s - r) * t)
        d0 = fa - ga
        d1 = fb - gb
        if d0 * d1 < 0.0:
            k = d0 / (d0 - d1)
            xc = xa + (xb - xa) * k
            mc = fa + (fb - fa) * k
            pts = ((xa, fa if d0 > 0 else ga), (xc, mc), (xb, fb if d1 > 0 else gb))
        else:
            pts = ((xa, fa if fa > ga else ga), (xb, fb if fb > gb else gb))
        for (xl, ml), (xr, mr) in zip(pts, pts[1:]):
            dh = xr - xl
            area += dh * (ml + mr) / 2.0
            moment += dh * (xl * (2.0 * ml + mr) + xr * (ml + 2.0 * mr)) / 6.0
        xa, fa, ga = xb, fb, gb
    return area, moment


def _integrate(segments, levels) -> tuple[float, float]:
    area = moment = 0.0
    for x0, x1, segs in segments:
        if len(segs) == 1:
            t, u, w = segs[0]
            lines = [(levels[t], u, w)] if levels[t] > 0.0 else ()
        else:
            lines = [(levels[t], u, w) for t, u, w in segs if levels[t] > 0.0]
        if not lines:
            continue
        if len(lines) == 1:
            a, u, w = lines[0]
            ma = u if u < a else a
            mb = w if w < a else a
            if (u - a) * (w - a) >= 0.0:
                # not cut by its clip level: one linear segment
                h = x1 - x0
                area += h * (ma + mb) / 2.0
                moment += h * (x0 * (2.0 * ma + mb) + x1 * (ma + 2.0 * mb)) / 6.0
            else:
                xc = x0 + (x1 - x0) * (a - u) / (w - u)
                h = xc - x0
                area += h * (ma + a) / 2.0
                moment += h * (x0 * (2.0 * ma + a) + xc * (ma + 2.0 * a)) / 6.0
                h = x1 - xc
                area += h * (a + mb) / 2.0
                moment += h * (xc * (2.0 * a + mb) + x1 * (a + 2.0 * mb)) / 6.0
            continue
        if len(lines) == 2:
            a_, m_ = _pair_moments(x0, x1, lines[0], lines[1])
            area += a_
            moment += m_
            continue
        knots = _envelope_knots(x0, x1, lines)
        for (xa, ma), (xb, mb) in zip(knots, knots[1:]):
            h = xb - xa
            area += h * (ma + mb) / 2.0
            moment += h * (xa * (2.0 * ma + mb) + xb * (ma + 2.0 * mb)) / 6.0
    return area, moment


def envelope_moments(pieces, lo: float, hi: float) -> tuple[float, float]:
    """Exact area and first moment of ``max_k min(alpha_k, mf_k(y))`` on [lo, hi].

    Each clipped piece is linear between its corners and its alpha crossing,
    and an envelope of lines is linear between their pairwise crossings, so
    inserting those points makes segment-wise integration exact.
    """
    pieces = [(a, mf) for a, mf in pieces if a > 0.0]
    if not pieces:
        return 0.0, 0.0
    levels = [a for a, _ in pieces]
    return _integrate(_linear_segments([mf for _, mf in pieces], lo, hi), levels)


def defuzzify_centroid(agg: AggregatedOutput) -> float:
    v = agg.variable
    if agg.pieces is not None:
        area, moment = envelope_moments(agg.pieces, v.lo, v.hi)
    else:
        ys, mu = agg.ys, agg.mu
        h = np.diff(ys)
        area = float(np.sum(h * (mu[:-1] + mu[1:]) / 2.0))
        moment = float(np.sum(h * (ys[:-1] * (2 * mu[:-1] + mu[1:]) + ys[1:] * (mu[:-1] + 2 * mu[1:])) / 6.0))
    if area <= 0.0:
        raise NoRuleFired()
    return min(max(moment / area, v.lo), v.hi)


@dataclass(frozen=True)
class InferenceResult:
    score: float
    per_rule_strengths: tuple[float, ...]
    fired_count: int
    clamped: tuple[str, ...] = ()


def _crisp_inputs(rb: RuleBase, t) -> Sequence[float]:
    values = t.as_inputs() if hasattr(t, "as_inputs") else t
    if len(values) != len(rb.inputs):
        raise ValueError(f"rule base takes {len(rb.inputs)} inputs, got {len(values)}")
    return values


def _fire(rb: RuleBase, t):
    """Per-rule strengths, per-output-term clip levels, and clamped input names.

    Only antecedent combinations with nonzero degree on every input can fire,
    so those are enumerated instead of the whole rule list.
    """
    active = []
    clamped = []
    for v, x in zip(rb.inputs, _crisp_inputs(rb, t)):
        x = float(x)
        if not math.isfinite(x):
            raise ValueError(f"{v.name}: input must be finite, got {x}")
        if x < v.lo or x > v.hi:
            clamped.append(v.name)
            x = v.lo if x < v.lo else v.hi
        act = []
        # same piecewise rule as MembershipFunction.__call__, inlined for speed
        for j, a, b, c, d in v.corner_table:
            if x < b:
                if a == b:
                    act.append((j, 1.0))
                elif x > a:
                    act.append((j, (x - a) / (b - a)))
            elif x <= c or c == d:
                act.append((j, 1.0))
            elif x < d:
                act.append((j, (d - x) / (d - c)))
        active.append(act)
    # (row-major combination index, strength) over inputs seen so far
    combos = [(0, 1.0)]
    use_min = rb.tnorm == "min"
    for v, act in zip(rb.inputs, active):
        n = len(v.terms)
        if use_min:
            combos = [(f * n + j, s if s < d else d) for f, s in combos for j, d in act]
        else:
            combos = [(f * n + j, s * d) for f, s in combos for j, d in act]
    strengths = [0.0] * len(rb.rules)
    levels = [0.0] * len(rb.output.terms)
    table = rb.rules_by_flat_index
    for f, a in combos:
        for r, c in table[f]:
            strengths[r] = a
            if a > levels[c]:
                levels[c] = a
    return strengths, levels, tuple(clamped)


def rule_strengths(rb: RuleBase, t) -> tuple[float, ...]:
    return tuple(_fire(rb, t)[0])


def clip_levels(rb: RuleBase, strengths: Sequence[float]) -> list[float]:
    """Strongest firing per output term (max over rules sharing a consequent)."""
    levels = [0.0] * len(rb.output.terms)
    for rule, a in zip(rb.rules, strengths):
        if a > levels[rule.consequent]:
            levels[rule.consequent] = a
    return levels


def aggregate_for(rb: RuleBase, t, n_samples: int = DEFAULT_SAMPLES) -> AggregatedOutput:
    """Full sampled pipeline for one input; used for inspection and plotting."""
    strengths = rule_strengths(rb, t)
    grid = SampleGrid(rb.output, n_samples)
    clipped = [implicate(a, rb.output.mfs[r.consequent], grid) for r, a in zip(rb.rules, strengths)]
    return aggregate(clipped, strengths)


def infer(rb: RuleBase, t) -> InferenceResult:
    """Crisp score for one telemetry sample (or a sequence of crisp inputs)."""
    strengths, levels, clamped = _fire(rb, t)
    out = rb.output
    area, moment = _integrate(out.segments, levels)
    if area <= 0.0:
        raise NoRuleFired()
    score = min(max(moment / area, out.lo), out.hi)
    fired = len(strengths) - strengths.count(0.0)
    return InferenceResult(score, tuple(strengths), fired, clamped)


def default_variables() -> tuple[tuple[LinguisticVariable, ...], LinguisticVariable]:
    gu = LinguisticVariable(
        "GU", 0, 100,
        (("L", trapezoid(0, 0, 30, 50)), ("M", triangle(30, 50, 70)), ("H", trapezoid(50, 70, 100, 100))),
        unit="%",
    )
    gt = LinguisticVariable(
        "GT", 20, 100,
        (("L", trapezoid(20, 20, 45, 60)), ("M", triangle(45, 60, 75)), ("H", trapezoid(60, 75, 100, 100))),
        unit="°C",
    )
    nt = LinguisticVariable(
        "NT", 0, 200,
        (("L", trapezoid(0, 0, 20, 50)), ("M", triangle(20, 50, 80)), ("H", trapezoid(50, 80, 200, 200))),
        unit="targets",
    )
    score = LinguisticVariable(
        "Score", 0, 100,
        (("S", trapezoid(0, 0, 25, 45)), ("M", triangle(30, 50, 70)), ("L", trapezoid(55, 75, 100, 100))),
    )
    return (gu, gt, nt), score
