"""Readers for presentation files (.dsp) and resolution scripts (.rsc).

Presentation file::

    # comment
    label F1
    vars x y z w
    type 2 3 2
    (w^3) (y) (x)
    (z) (w) (y^3)

Resolution script::

    script e7
    graph E1-E3 E3-E6            # optional expected dual graph
    step 1
      vars x y z
      claim y^2 + x^3 + x*z^3
      matrix
        (y) (x^2 + z^3)
        (-x) (y)
      chart 1                    # chart I (comma separated), optional 'column'
        divisor E1 = y, z
        expect singular@(0,0,0)
    step 2
      from 1 1                   # this claim continues step 1, chart 1
      rename a2 = w              # chart coordinates -> this step's variables
      ...

Indentation is ignored; ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from .detvar import DetPresentation, PolyMatrix, PresentationError
from .polycore import PolySyntaxError, Polynomial, VarSet, parse_poly
from .tjurina import COLUMN, ROW, ChartIndex


class FormatError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0, source: str = ""):
        self.line = line
        self.col = col
        self.source = source
        where = f"{source}:" if source else ""
        super().__init__(f"{where}{line}:{col}: {message}" if line else f"{where} {message}".strip())


def _strip(line: str) -> str:
    return line.split("#", 1)[0].rstrip()


def split_parenthesized(text: str, line: int = 0, source: str = "") -> List[Tuple[str, int]]:
    """Top-level ``( ... )`` groups of a line, with their 1-based columns."""
    out = []
    depth = 0
    start = None
    for k, ch in enumerate(text):
        if ch == "(":
            if depth == 0:
                start = k
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise FormatError("unbalanced ')'", line, k + 1, source)
            if depth == 0:
                out.append((text[start + 1:k], start + 2))
        elif depth == 0 and not ch.isspace():
            raise FormatError(f"expected '(' but found {ch!r}", line, k + 1, source)
    if depth:
        raise FormatError("unbalanced '('", line, len(text), source)
    return out


def _parse_entry(text: str, vars: VarSet, line: int, col: int, source: str) -> Polynomial:
    try:
        return parse_poly(text, vars)
    except PolySyntaxError as e:
        raise FormatError(str(e), line, col + e.pos, source) from None


def _parse_rows(lines: List[Tuple[int, str]], vars: VarSet, source: str) -> List[List[Polynomial]]:
    rows = []
    for ln, text in lines:
        rows.append([_parse_entry(e, vars, ln, col, source)
                     for e, col in split_parenthesized(text, ln, source)])
    return rows


def _ints(words: List[str], ln: int, source: str) -> List[int]:
    try:
        return [int(w) for w in words]
    except ValueError:
        raise FormatError(f"expected integers, got {' '.join(words)!r}", ln, 1, source) from None


# presentation files

def loads_presentation(text: str, source: str = "") -> DetPresentation:
    label = ""
    vars: Optional[VarSet] = None
    shape: Optional[Tuple[int, int, int]] = None
    shape_line = 0
    rows: List[Tuple[int, str]] = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line.strip():
            continue
        s = line.strip()
        if s.startswith("("):
            if vars is None or shape is None:
                raise FormatError("matrix rows must follow 'vars' and 'type'", ln, 1, source)
            rows.append((ln, line))
            continue
        key, _, rest = s.partition(" ")
        if key == "label":
            label = rest.strip()
        elif key == "vars":
            try:
                vars = VarSet(rest.split())
            except ValueError as e:
                raise FormatError(str(e), ln, 1, source) from None
        elif key == "type":
            nums = _ints(rest.split(), ln, source)
            if len(nums) != 3:
                raise FormatError("'type' needs m n t", ln, 1, source)
            shape = tuple(nums)
            shape_line = ln
        else:
            raise FormatError(f"unknown key {key!r}", ln, 1, source)
    if vars is None or shape is None:
        raise FormatError("missing 'vars' or 'type'", 0, 0, source)
    m, n, t = shape
    if m < 1 or n < 1:
        raise FormatError("matrix dimensions must be positive", shape_line, 1, source)
    if len(rows) != m:
        raise FormatError(f"expected {m} matrix rows, found {len(rows)}", shape_line, 1, source)
    entries = _parse_rows(rows, vars, source)
    for (ln, _), r in zip(rows, entries):
        if len(r) != n:
            raise FormatError(f"expected {n} entries, found {len(r)}", ln, 1, source)
    try:
        return DetPresentation(PolyMatrix(entries, vars), t, label)
    except PresentationError as e:
        raise FormatError(str(e), shape_line, 1, source) from None


def parse_presentation_file(path: Union[str, Path]) -> DetPresentation:
    path = Path(path)
    return loads_presentation(path.read_text(), str(path))


def dumps_presentation(p: DetPresentation) -> str:
    lines = []
    if p.label:
        lines.append(f"label {p.label}")
    lines.append("vars " + " ".join(p.ambient.names))
    lines.append(f"type {p.m} {p.n} {p.t}")
    for r in p.F.rows:
        lines.append(" ".join(f"({e})" for e in r))
    return "\n".join(lines) + "\n"


# resolution scripts

@dataclass
class Expectation:
    kind: str  # "smooth", "singular" or "empty"
    points: List[Tuple[Fraction, ...]] = field(default_factory=list)


@dataclass
class ChartStep:
    chart: ChartIndex
    line: int
    saturate: List[str] = field(default_factory=list)
    divisors: Dict[str, List[str]] = field(default_factory=dict)
    expect: Optional[Expectation] = None


@dataclass
class ScriptStep:
    number: int
    line: int
    vars: Optional[VarSet] = None
    t: int = 2
    claim: Optional[Polynomial] = None
    matrix: Optional[PolyMatrix] = None
    source: Optional[Tuple[int, str]] = None  # (step, chart label)
    renames: Dict[str, str] = field(default_factory=dict)
    charts: List[ChartStep] = field(default_factory=list)

    def presentation(self) -> DetPresentation:
        return DetPresentation(self.matrix, self.t, f"step {self.number}")


@dataclass
class ResolutionScript:
    name: str
    steps: List[ScriptStep]
    graph: Optional[List[Tuple[str, str]]] = None
    source: str = ""

    def step(self, number: int) -> ScriptStep:
        for s in self.steps:
            if s.number == number:
                return s
        raise KeyError(number)


_POINT = re.compile(r"^\(([^()]*)\)$")


def _parse_point(text: str, ln: int, source: str) -> Tuple[Fraction, ...]:
    m = _POINT.match(text.strip())
    if not m:
        raise FormatError(f"bad point {text!r}", ln, 1, source)
    try:
        return tuple(Fraction(c.strip()) for c in m.group(1).split(",") if c.strip())
    except ValueError:
        raise FormatError(f"bad point {text!r}", ln, 1, source) from None


def _parse_expect(rest: str, ln: int, source: str) -> Expectation:
    rest = rest.strip()
    if rest in ("smooth", "empty", "singular"):
        return Expectation(rest)
    if rest.startswith("singular@"):
        pts = re.findall(r"\([^()]*\)", rest[len("singular@"):])
        if not pts:
            raise FormatError("singular@ needs at least one point", ln, 1, source)
        return Expectation("singular", [_parse_point(p, ln, source) for p in pts])
    raise FormatError(f"unknown expectation {rest!r}", ln, 1, source)


def chart_label(c: ChartIndex) -> str:
    lab = ",".join(str(i) for i in c.I)
    return lab if c.side == ROW else lab + " column"


def loads_script(text: str, source: str = "") -> ResolutionScript:
    name = ""
    graph = None
    steps: List[ScriptStep] = []
    step: Optional[ScriptStep] = None
    chart: Optional[ChartStep] = None
    pending_claim: Optional[Tuple[int, str]] = None
    matrix_lines: Optional[List[Tuple[int, str]]] = None
    matrix_owner: Optional[ScriptStep] = None

    def close_matrix():
        nonlocal matrix_lines
        if matrix_lines is None:
            return
        if not matrix_lines:
            raise FormatError("'matrix' without rows", matrix_owner.line, 1, source)
        if matrix_owner.vars is None:
            raise FormatError("'matrix' before 'vars'", matrix_lines[0][0], 1, source)
        rows = _parse_rows(matrix_lines, matrix_owner.vars, source)
        if len({len(r) for r in rows}) != 1:
            raise FormatError("ragged matrix", matrix_lines[0][0], 1, source)
        matrix_owner.matrix = PolyMatrix(rows, matrix_owner.vars)
        matrix_lines = None

    def need_step(ln, key):
        if step is None:
            raise FormatError(f"'{key}' outside a step", ln, 1, source)
        return step

    for ln, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw).strip()
        if not line:
            continue
        if line.startswith("("):
            if matrix_lines is None:
                raise FormatError("matrix row outside a 'matrix' block", ln, 1, source)
            matrix_lines.append((ln, line))
            continue
        close_matrix()
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "script":
            name = rest
        elif key == "graph":
            graph = []
            for e in rest.split():
                a, sep, b = e.partition("-")
                if not sep or not a or not b:
                    raise FormatError(f"bad edge {e!r}", ln, 1, source)
                graph.append((a, b))
        elif key == "step":
            num = _ints(rest.split(), ln, source)
            if len(num) != 1:
                raise FormatError("'step' needs a number", ln, 1, source)
            if any(s.number == num[0] for s in steps):
                raise FormatError(f"duplicate step {num[0]}", ln, 1, source)
            step = ScriptStep(num[0], ln)
            steps.append(step)
            chart = None
        elif key == "vars":
            s = need_step(ln, key)
            try:
                s.vars = VarSet(rest.split())
            except ValueError as e:
                raise FormatError(str(e), ln, 1, source) from None
        elif key == "t":
            need_step(ln, key).t = _ints(rest.split(), ln, source)[0]
        elif key == "claim":
            s = need_step(ln, key)
            if s.vars is None:
                raise FormatError("'claim' before 'vars'", ln, 1, source)
            s.claim = _parse_entry(rest, s.vars, ln, len("claim ") + 1, source)
        elif key == "matrix":
            matrix_owner = need_step(ln, key)
            matrix_lines = []
        elif key == "from":
            s = need_step(ln, key)
            parts = rest.split(None, 1)
            if len(parts) != 2:
                raise FormatError("'from' needs STEP CHART", ln, 1, source)
            s.source = (_ints(parts[:1], ln, source)[0], parts[1].strip())
        elif key == "rename":
            s = need_step(ln, key)
            lhs, sep, rhs = rest.partition("=")
            if not sep or not lhs.strip() or not rhs.strip():
                raise FormatError("'rename' needs NAME = EXPR", ln, 1, source)
            s.renames[lhs.strip()] = rhs.strip()
        elif key == "chart":
            s = need_step(ln, key)
            words = rest.replace(",", " ").split()
            side = ROW
            if words and words[-1] in (ROW, COLUMN):
                side = words.pop()
            idx = _ints(words, ln, source)
            try:
                chart = ChartStep(ChartIndex(tuple(idx), side), ln)
            except ValueError as e:
                raise FormatError(str(e), ln, 1, source) from None
            s.charts.append(chart)
        elif key in ("saturate", "divisor", "expect"):
            if chart is None:
                raise FormatError(f"'{key}' outside a chart block", ln, 1, source)
            if key == "saturate":
                chart.saturate.append(rest)
            elif key == "divisor":
                nm, sep, gens = rest.partition("=")
                nm = nm.strip()
                if not sep or not nm or not gens.strip():
                    raise FormatError("'divisor' needs NAME = GENS", ln, 1, source)
                if nm in chart.divisors:
                    raise FormatError(f"divisor {nm} declared twice in this chart", ln, 1, source)
                chart.divisors[nm] = [g.strip() for g in gens.split(",")]
            else:
                chart.expect = _parse_expect(rest, ln, source)
        else:
            raise FormatError(f"unknown key {key!r}", ln, 1, source)
    close_matrix()

    if not steps:
        raise FormatError("script has no steps", 0, 0, source)
    for s in steps:
        if s.vars is None or s.claim is None or s.matrix is None:
            raise FormatError(f"step {s.number} needs vars, claim and matrix", s.line, 1, source)
        if not 1 <= s.t <= min(s.matrix.m, s.matrix.n):
            raise FormatError(f"t={s.t} out of range", s.line, 1, source)
        if s.source is not None:
            try:
                src = next(x for x in steps if x.number == s.source[0])
            except StopIteration:
                raise FormatError(f"'from' refers to unknown step {s.source[0]}", s.line, 1, source) from None
            if src.number >= s.number:
                raise FormatError("'from' must refer to an earlier step", s.line, 1, source)
            if s.source[1] not in {chart_label(c.chart) for c in src.charts}:
                raise FormatError(f"step {src.number} has no chart {s.source[1]!r}", s.line, 1, source)
        elif s.renames:
            raise FormatError("'rename' without 'from'", s.line, 1, source)
    return ResolutionScript(name, steps, graph, source)


def parse_script_file(path: Union[str, Path]) -> ResolutionScript:
    path = Path(path)
    return loads_script(path.read_text(), str(path))
