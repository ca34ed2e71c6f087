"""Fuzzy-controlled switching between small/medium/large inference models."""
from .dsl import builtin_rulebase, check_completeness, parse_rules, serialize_rules
from .engine import (
    LinguisticVariable,
    MembershipFunction,
    NoRuleFired,
    Rule,
    RuleBase,
    aggregate,
    defuzzify_centroid,
    firing_strength,
    fuzzify,
    implicate,
    infer,
    membership,
    trapezoid,
    triangle,
)
from .metrics import avtg, summarize, switch_histogram
from .sim import ModelProfile, RunLog, Scenario, ThermalModel, simulate
from .switcher import ModelId, SwitcherState, Telemetry, reset, select_model, step
from .traceio import load_scenario, load_trace_csv, read_runlog_csv, write_runlog_csv

__version__ = "0.1.0"
