"""Loading scenarios, rule files, and traces; writing run logs and reports."""
from __future__ import annotations

import csv
import json
import math
from importlib import resources
from pathlib import Path
from typing import Any, Iterable, Mapping

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .dsl import builtin_rulebase, parse_rules
from .engine import RuleBase
from .sim import FrameRecord, ModelProfile, RunLog, Scenario, ScenarioError, ThermalModel
from .switcher import ModelId

RUNLOG_HEADER = ["frame", "model", "gu", "gt", "nt_true", "nt_obs", "score", "switched"]
TRACE_HEADER = ["frame", "nt_true"]
DEFAULT_SCENARIO = "default_2000.scenario"


class TraceError(ValueError):
    pass


class RunLogError(ValueError):
    pass


def data_path(name: str) -> Path:
    return Path(str(resources.files("fuzzyswitch") / "data" / name))


def generate_trace(segments: Iterable[Mapping[str, Any]]) -> list[int]:
    """Concatenate piecewise trace segments.

    Each segment gives ``length`` frames of
    ``round(base_nt + slope * t + amplitude * sin(2 pi t / period))`` with
    ``t`` counted from the segment start, floored at zero.
    """
    out: list[int] = []
    for i, seg in enumerate(segments):
        unknown = set(seg) - {"length", "base_nt", "slope", "amplitude", "period"}
        if unknown:
            raise TraceError(f"segment {i}: unknown keys {sorted(unknown)}")
        try:
            length = int(seg["length"])
            base = float(seg["base_nt"])
        except KeyError as exc:
            raise TraceError(f"segment {i}: missing {exc.args[0]!r}") from None
        slope = float(seg.get("slope", 0.0))
        amp = float(seg.get("amplitude", 0.0))
        period = float(seg.get("period", 1.0))
        if length < 1:
            raise TraceError(f"segment {i}: length must be >= 1")
        if amp and period <= 0:
            raise TraceError(f"segment {i}: period must be > 0")
        for t in range(length):
            v = base + slope * t + amp * math.sin(2 * math.pi * t / period)
            out.append(max(0, math.floor(v + 0.5)))
    if not out:
        raise TraceError("trace has no frames")
    return out


def load_trace_csv(path) -> list[int]:
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != TRACE_HEADER:
            raise TraceError(f"{path}: header must be {','.join(TRACE_HEADER)}")
        counts = []
        for row_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise TraceError(f"{path}:{row_no}: expected 2 columns, got {len(row)}")
            try:
                frame = int(row[0])
                nt = int(row[1])
            except ValueError:
                raise TraceError(f"{path}:{row_no}: non-integer value in {row}") from None
            if frame != len(counts):
                kind = "duplicate" if frame < len(counts) else "gap before"
                raise TraceError(f"{path}:{row_no}: {kind} frame {frame}, expected {len(counts)}")
            if nt < 0:
                raise TraceError(f"{path}:{row_no}: negative count {nt}")
            counts.append(nt)
    if not counts:
        raise TraceError(f"{path}: no frames")
    return counts


def write_trace_csv(counts: Iterable[int], path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRACE_HEADER)
        w.writerows(enumerate(counts))


def _section(doc: Mapping, key: str) -> Mapping:
    val = doc.get(key, {})
    if not isinstance(val, Mapping):
        raise ScenarioError(f"[{key}] must be a table")
    return val


def _model(i: int, raw: Mapping) -> ModelProfile:
    try:
        label = str(raw["label"])
        return ModelProfile(
            ModelId(i, label),
            float(raw["base_load"]),
            float(raw["per_target_load"]),
            tuple((float(x), float(r)) for x, r in raw["recall"]),
            float(raw.get("latency_ms", 0.0)),
        )
    except KeyError as exc:
        raise ScenarioError(f"models[{i}]: missing {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ScenarioError):
            raise
        raise ScenarioError(f"models[{i}]: {exc}") from None


def scenario_from_dict(doc: Mapping, base_dir: Path | None = None) -> Scenario:
    base_dir = base_dir or Path.cwd()
    ctl = _section(doc, "controller")
    noise = _section(doc, "noise")
    th = _section(doc, "thermal")
    tr = _section(doc, "trace")

    models = doc.get("models")
    if not isinstance(models, list) or not models:
        raise ScenarioError("scenario needs at least one [[models]] entry")
    roster = tuple(_model(i, m) for i, m in enumerate(models))

    try:
        thermal = ThermalModel(
            float(th["ambient_c"]),
            float(th["heat_gain_c_per_gu"]),
            float(th["alpha"]),
            float(th.get("noise_sigma_c", 0.0)),
            float(th["initial_c"]) if "initial_c" in th else None,
        )
    except KeyError as exc:
        raise ScenarioError(f"[thermal]: missing {exc.args[0]!r}") from None

    if ("csv" in tr) == ("segments" in tr):
        raise ScenarioError("[trace] needs exactly one of 'csv' or 'segments'")
    if "csv" in tr:
        trace = load_trace_csv(base_dir / tr["csv"])
    else:
        trace = generate_trace(tr["segments"])

    rules = ctl.get("rules")
    return Scenario(
        name=str(doc.get("name", "scenario")),
        models=roster,
        thermal=thermal,
        trace=tuple(trace),
        threshold_k=int(ctl.get("threshold_k", 5)),
        counter_mode=str(ctl.get("counter_mode", "same_candidate")),
        rng_seed=int(noise["seed"]) if "seed" in noise else None,
        gu_noise_sigma=float(noise.get("gu_sigma", 0.0)),
        nt_source=str(ctl.get("nt_source", "observed")),
        initial_model=int(ctl.get("initial_model", 0)),
        rules_path=str(base_dir / rules) if rules else None,
    )


def load_scenario(path=None) -> Scenario:
    """Load and validate a scenario file; ``None`` loads the shipped default."""
    path = Path(path) if path is not None else data_path(DEFAULT_SCENARIO)
    with path.open("rb") as fh:
        try:
            doc = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ScenarioError(f"{path}: {exc}") from None
    return scenario_from_dict(doc, path.parent)


def load_rules(path=None) -> RuleBase:
    if path is None:
        return builtin_rulebase()
    return parse_rules(Path(path).read_text(encoding="utf-8"))


def _f6(x: float) -> str:
    return "nan" if math.isnan(x) else f"{x:.6f}"


def write_runlog_csv(log: RunLog, path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RUNLOG_HEADER)
        for r in log.records:
            w.writerow([r.frame, r.model, _f6(r.gu), _f6(r.gt), r.nt_true, r.nt_obs,
                        _f6(r.score), int(r.switched)])


def read_runlog_csv(path) -> RunLog:
    path = Path(path)
    records = []
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != RUNLOG_HEADER:
            raise RunLogError(f"{path}: header must be {','.join(RUNLOG_HEADER)}")
        for row_no, row in enumerate(reader, start=2):
            if len(row) != len(RUNLOG_HEADER):
                raise RunLogError(f"{path}:{row_no}: expected {len(RUNLOG_HEADER)} columns")
            if row[7] not in ("0", "1"):
                raise RunLogError(f"{path}:{row_no}: switched must be 0 or 1, got {row[7]!r}")
            try:
                rec = FrameRecord(int(row[0]), row[1], float(row[2]), float(row[3]), int(row[4]),
                                  int(row[5]), float(row[6]), bool(int(row[7])))
            except ValueError as exc:
                raise RunLogError(f"{path}:{row_no}: {exc}") from None
            if rec.frame != len(records):
                raise RunLogError(f"{path}:{row_no}: frame {rec.frame} out of sequence")
            records.append(rec)
    return RunLog(records, scenario=path.stem)


def write_json(doc: Mapping, path) -> None:
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=False) + "\n", encoding="utf-8")
