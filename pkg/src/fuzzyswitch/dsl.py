"""Text format for linguistic variables and fuzzy rules (``.frb`` files).

Example::

    tnorm min
    var GU range 0 100 unit % {
        term L trap 0 0 30 50
        term M tri 30 50 70
        term H trap 50 70 100 100
    }
    ...
    rule: IF GU is H AND GT is H AND NT is H THEN Score is S

Variables are declared before use. The variable named in the THEN clauses is
the output; every other variable is an input, in declaration order, and every
rule names each input exactly once.
"""
from __future__ import annotations

import itertools
import re
import warnings
from dataclasses import dataclass, field
from typing import Iterator

from .engine import (
    LinguisticVariable,
    MembershipFunction,
    Rule,
    RuleBase,
    TNORMS,
    default_variables,
)

RESERVED = {"var", "range", "unit", "term", "tri", "trap", "rule:", "IF", "AND", "THEN", "is", "tnorm", "{", "}"}
_TOKEN = re.compile(r"[{}]|[^\s{}]+")
_NUMBER = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")
_NAME = re.compile(r"[A-Za-z_]\w*$")
_SHAPES = {"tri": ("triangle", 3), "trap": ("trapezoid", 4)}
_KEYWORD_OF = {"triangle": "tri", "trapezoid": "trap"}

# The 27 built-in rules, one per line group: GU GT NT -> Score
RULE_TABLE = """
L L L M    M L L S    H L L S
L L M M    M L M M    H L M S
L L H L    M L H L    H L H M
L M L S    M M L S    H M L S
L M M M    M M M M    H M M S
L M H M    M M H M    H M H M
L H L S    M H L S    H H L S
L H M S    M H M S    H H M S
L H H M    M H H M    H H H S
"""


class DSLError(ValueError):
    def __init__(self, msg: str, line: int | None = None, col: int | None = None):
        self.line, self.col = line, col
        where = f"line {line}, col {col}: " if line is not None else ""
        super().__init__(where + msg)


class DSLSyntaxError(DSLError):
    pass


class DSLSemanticError(DSLError):
    pass


class RuleCoverageWarning(UserWarning):
    """Some antecedent combination has no rule."""


@dataclass
class _Tok:
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        for m in _TOKEN.finditer(line):
            toks.append(_Tok(m.group(), n, m.start() + 1))
    return toks


@dataclass
class _VarDecl:
    name: str
    lo: float
    hi: float
    unit: str
    terms: list = field(default_factory=list)
    tok: _Tok | None = None


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.pos = 0
        self.last_line = max((t.line for t in self.toks), default=1)

    def peek(self) -> _Tok | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self, what: str) -> _Tok:
        tok = self.peek()
        if tok is None:
            raise DSLSyntaxError(f"unexpected end of input, expected {what}", self.last_line, 1)
        self.pos += 1
        return tok

    def expect(self, word: str) -> _Tok:
        tok = self.next(repr(word))
        if tok.text != word:
            raise DSLSyntaxError(f"expected {word!r}, got {tok.text!r}", tok.line, tok.col)
        return tok

    def name(self, what: str) -> _Tok:
        tok = self.next(what)
        if tok.text in RESERVED or not _NAME.match(tok.text):
            raise DSLSyntaxError(f"expected {what}, got {tok.text!r}", tok.line, tok.col)
        return tok

    def number(self) -> float:
        tok = self.next("a number")
        if not _NUMBER.match(tok.text):
            raise DSLSyntaxError(f"expected a number, got {tok.text!r}", tok.line, tok.col)
        return float(tok.text)

    def parse(self):
        tnorm = None
        decls: list[_VarDecl] = []
        rules = []
        while (tok := self.peek()) is not None:
            if tok.text == "tnorm":
                self.pos += 1
                val = self.next("a t-norm")
                if val.text not in TNORMS:
                    raise DSLSyntaxError(f"tnorm must be one of {TNORMS}, got {val.text!r}", val.line, val.col)
                if tnorm is not None:
                    raise DSLSemanticError("tnorm given twice", tok.line, tok.col)
                tnorm = val.text
            elif tok.text == "var":
                decls.append(self.var_decl())
            elif tok.text == "rule:":
                rules.append(self.rule())
            else:
                raise DSLSyntaxError(
                    f"expected 'var', 'rule:' or 'tnorm', got {tok.text!r}", tok.line, tok.col
                )
        return tnorm or "min", decls, rules

    def var_decl(self) -> _VarDecl:
        self.expect("var")
        name = self.name("a variable name")
        self.expect("range")
        lo, hi = self.number(), self.number()
        unit = ""
        if (tok := self.peek()) is not None and tok.text == "unit":
            self.pos += 1
            u = self.next("a unit")
            if u.text in RESERVED:
                raise DSLSyntaxError(f"expected a unit, got {u.text!r}", u.line, u.col)
            unit = u.text
        self.expect("{")
        decl = _VarDecl(name.text, lo, hi, unit, tok=name)
        while True:
            tok = self.next("'term' or '}'")
            if tok.text == "}":
                break
            if tok.text != "term":
                raise DSLSyntaxError(f"expected 'term' or '}}', got {tok.text!r}", tok.line, tok.col)
            label = self.name("a term label")
            shape = self.next("'tri' or 'trap'")
            if shape.text not in _SHAPES:
                raise DSLSyntaxError(f"expected 'tri' or 'trap', got {shape.text!r}", shape.line, shape.col)
            kind, n = _SHAPES[shape.text]
            pts = [self.number() for _ in range(n)]
            try:
                mf = MembershipFunction(kind, tuple(pts))
            except ValueError as exc:
                raise DSLSemanticError(f"term {label.text}: {exc}", label.line, label.col) from None
            decl.terms.append((label, mf))
        return decl

    def clause(self):
        var = self.name("a variable name")
        self.expect("is")
        label = self.name("a term label")
        return var, label

    def rule(self):
        head = self.expect("rule:")
        self.expect("IF")
        ants = [self.clause()]
        while True:
            tok = self.next("'AND' or 'THEN'")
            if tok.text == "THEN":
                break
            if tok.text != "AND":
                raise DSLSyntaxError(f"expected 'AND' or 'THEN', got {tok.text!r}", tok.line, tok.col)
            ants.append(self.clause())
        return head, ants, self.clause()


def _build_variable(decl: _VarDecl) -> LinguisticVariable:
    labels = [l.text for l, _ in decl.terms]
    for i, (label, _) in enumerate(decl.terms):
        if label.text in labels[:i]:
            raise DSLSemanticError(f"{decl.name}: duplicate term {label.text!r}", label.line, label.col)
    try:
        return LinguisticVariable(decl.name, decl.lo, decl.hi,
                                  tuple((l.text, mf) for l, mf in decl.terms), unit=decl.unit)
    except ValueError as exc:
        raise DSLSemanticError(str(exc), decl.tok.line, decl.tok.col) from None


def parse_rules(text: str, strict: bool = True) -> RuleBase:
    """Parse a rule document into a validated :class:`RuleBase`.

    With ``strict=False`` conflicting rules are kept (for reporting) instead
    of raising. Coverage gaps only emit a :class:`RuleCoverageWarning`.
    """
    tnorm, decls, raw_rules = _Parser(text).parse()
    if not raw_rules:
        raise DSLSemanticError("no rules")
    variables: dict[str, LinguisticVariable] = {}
    for decl in decls:
        if decl.name in variables:
            raise DSLSemanticError(f"variable {decl.name!r} declared twice", decl.tok.line, decl.tok.col)
        variables[decl.name] = _build_variable(decl)

    def lookup(var_tok, label_tok):
        v = variables.get(var_tok.text)
        if v is None:
            raise DSLSemanticError(f"unknown variable {var_tok.text!r}", var_tok.line, var_tok.col)
        if label_tok.text not in v.labels:
            raise DSLSemanticError(
                f"unknown term {label_tok.text!r} for variable {v.name}", label_tok.line, label_tok.col
            )
        return v, v.index(label_tok.text)

    out_names = {cons[0].text for _, _, cons in raw_rules}
    if len(out_names) != 1:
        head = raw_rules[0][0]
        raise DSLSemanticError(f"rules name several outputs: {sorted(out_names)}", head.line, head.col)
    out_name = out_names.pop()
    if out_name not in variables:
        tok = raw_rules[0][2][0]
        raise DSLSemanticError(f"unknown variable {out_name!r}", tok.line, tok.col)
    output = variables[out_name]
    inputs = [v for name, v in variables.items() if name != out_name]
    if not inputs:
        raise DSLSemanticError("no input variables declared")
    slot = {v.name: i for i, v in enumerate(inputs)}

    rules = []
    for head, ants, cons in raw_rules:
        q = [None] * len(inputs)
        for var_tok, label_tok in ants:
            v, j = lookup(var_tok, label_tok)
            if v is output:
                raise DSLSemanticError(f"output {v.name} used as antecedent", var_tok.line, var_tok.col)
            if q[slot[v.name]] is not None:
                raise DSLSemanticError(f"{v.name} named twice in one rule", var_tok.line, var_tok.col)
            q[slot[v.name]] = j
        missing = [inputs[i].name for i, j in enumerate(q) if j is None]
        if missing:
            raise DSLSemanticError(f"rule does not constrain {', '.join(missing)}", head.line, head.col)
        _, c = lookup(*cons)
        rules.append(Rule(tuple(q), c))

    rb = RuleBase(tuple(inputs), output, tuple(rules), tnorm, check_conflicts=False)
    report = check_completeness(rb)
    if report.conflicts and strict:
        raise DSLSemanticError(f"conflicting rules for {report.conflicts[0][0]}")
    if report.gaps:
        warnings.warn(
            f"{len(report.gaps)} of {report.total} antecedent combinations have no rule, "
            f"e.g. {report.gaps[0]}",
            RuleCoverageWarning,
            stacklevel=2,
        )
    return rb


def _num(x: float) -> str:
    s = repr(float(x))
    return s[:-2] if s.endswith(".0") else s


def _var_block(v: LinguisticVariable) -> Iterator[str]:
    unit = f" unit {v.unit}" if v.unit else ""
    yield f"var {v.name} range {_num(v.lo)} {_num(v.hi)}{unit} {{"
    for label, mf in v.terms:
        yield f"    term {label} {_KEYWORD_OF[mf.kind]} " + " ".join(_num(p) for p in mf.points)
    yield "}"


def serialize_rules(rb: RuleBase) -> str:
    lines = [f"tnorm {rb.tnorm}", ""]
    for v in (*rb.inputs, rb.output):
        lines.extend(_var_block(v))
        lines.append("")
    lines.extend(f"rule: {rb.describe(r)}" for r in rb.rules)
    return "\n".join(lines) + "\n"


@dataclass
class CompletenessReport:
    covered: int
    total: int
    conflicts: list[tuple[tuple[str, ...], tuple[str, ...]]]
    gaps: list[tuple[str, ...]]

    def summary(self) -> str:
        return f"{self.covered}/{self.total} covered, {len(self.conflicts)} conflicts"


def check_completeness(rb: RuleBase) -> CompletenessReport:
    seen: dict[tuple[int, ...], list[int]] = {}
    for rule in rb.rules:
        cons = seen.setdefault(rule.antecedents, [])
        if rule.consequent not in cons:
            cons.append(rule.consequent)
    combos = list(itertools.product(*(range(len(v.terms)) for v in rb.inputs)))

    def labels(ants):
        return tuple(v.labels[q] for v, q in zip(rb.inputs, ants))

    gaps = [labels(c) for c in combos if c not in seen]
    conflicts = [
        (labels(ants), tuple(rb.output.labels[c] for c in cons))
        for ants, cons in seen.items()
        if len(cons) > 1
    ]
    return CompletenessReport(len(seen), len(combos), conflicts, gaps)


def builtin_rulebase() -> RuleBase:
    """The 27-rule GU/GT/NT -> Score base over the default variables."""
    inputs, score = default_variables()
    words = RULE_TABLE.split()
    rows = [words[i:i + 4] for i in range(0, len(words), 4)]
    rows.sort(key=lambda r: tuple("LMH".index(x) for x in r[:3]))
    rules = tuple(
        Rule(tuple(v.index(l) for v, l in zip(inputs, row[:3])), score.index(row[3])) for row in rows
    )
    return RuleBase(inputs, score, rules)
