"""Run-level evaluation: targets per utilization, switch histograms, thermal stats.

Total GU is the sum of per-frame utilization percentages over the whole run,
so AVTG is in targets per utilization-percent-frame.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import asdict, dataclass

from .sim import RunLog


class EmptyLogError(ValueError):
    def __init__(self):
        super().__init__("empty log")


def avtg(log: RunLog) -> float:
    if not log.records:
        raise EmptyLogError()
    total_gu = sum(r.gu for r in log.records)
    if total_gu <= 0:
        raise ZeroDivisionError("undefined AVTG: total GU is zero")
    return sum(r.nt_obs for r in log.records) / total_gu


def switch_histogram(log: RunLog, bin_width: int = 500) -> list[tuple[tuple[int, int], int]]:
    """Switch counts per consecutive frame range ``[start, end)``; the last range may be short."""
    if bin_width < 1:
        raise ValueError("bin_width must be >= 1")
    n = len(log.records)
    bins = [0] * (-(-n // bin_width))
    for r in log.records:
        if r.switched:
            bins[r.frame // bin_width] += 1
    return [((i * bin_width, min((i + 1) * bin_width, n)), c) for i, c in enumerate(bins)]


def range_label(rng: tuple[int, int]) -> str:
    return f"{rng[0]}–{rng[1]}"


@dataclass
class RunSummary:
    frames: int
    avtg: float
    total_nt_observed: int
    total_nt_true: int
    total_gu: float
    switch_count: int
    switch_histogram: list[tuple[str, int]]
    peak_temp_c: float
    mean_temp_c: float
    model_frames: dict[str, int]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["switch_histogram"] = [{"range": r, "switches": c} for r, c in self.switch_histogram]
        return d


def summarize(log: RunLog, bin_width: int = 500) -> RunSummary:
    recs = log.records
    value = avtg(log)
    temps = [r.gt for r in recs]
    return RunSummary(
        frames=len(recs),
        avtg=value,
        total_nt_observed=sum(r.nt_obs for r in recs),
        total_nt_true=sum(r.nt_true for r in recs),
        total_gu=sum(r.gu for r in recs),
        switch_count=sum(1 for r in recs if r.switched),
        switch_histogram=[(range_label(rg), c) for rg, c in switch_histogram(log, bin_width)],
        peak_temp_c=max(temps),
        mean_temp_c=sum(temps) / len(temps),
        model_frames=dict(Counter(r.model for r in recs)),
    )


def report(log: RunLog, bin_width: int = 500) -> dict:
    """Summary plus per-frame temperature and model-in-use series."""
    doc = {"scenario": log.scenario, "arm": log.arm, "seed": log.seed}
    doc["summary"] = summarize(log, bin_width).to_dict()
    doc["series"] = {
        "frame": log.column("frame"),
        "temperature_c": log.column("gt"),
        "model": log.column("model"),
    }
    return doc
