"""Smoothness reports, chart pipelines, resolution scripts and divisor incidence."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import isqrt
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from . import linalg, modellab
from .detvar import DetPresentation, PolyMatrix, determinant, minors
from .formats import ChartStep, Expectation, ResolutionScript, ScriptStep, chart_label
from .ideals import (GroebnerLimits, ResourceLimitError, dimension, eliminate, groebner_basis,
                     ideal_dimension, is_trivial, normal_form, same_ideal)
from .polycore import Polynomial, VarSet, evaluate, parse_poly, partial_derivative, substitute
from .tjurina import (ChartIndex, ChartPresentation, chart_presentation, chart_transition,
                      chart_var_names, eliminate_linear, saturate_chart)

Point = Tuple[Fraction, ...]

SMOOTH = "smooth"
SINGULAR = "singular"
POSITIVE_DIM = "singular-locus-positive-dim"
EMPTY = "empty"
UNKNOWN = "resource-limit"


# rational points of zero-dimensional ideals

def _divisors(k: int) -> List[int]:
    k = abs(k)
    small = [d for d in range(1, isqrt(k) + 1) if k % d == 0]
    return sorted(set(small + [k // d for d in small]))


def _univariate_coeffs(p: Polynomial, i: int) -> List[Fraction]:
    deg = max(e[i] for e in p.terms)
    coeffs = [Fraction(0)] * (deg + 1)
    for e, c in p.terms.items():
        coeffs[e[i]] += c
    return coeffs


def _horner(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _deflate(coeffs: List[Fraction], r: Fraction) -> List[Fraction]:
    # divide by (x - r); caller guarantees r is a root
    out = [Fraction(0)] * (len(coeffs) - 1)
    acc = Fraction(0)
    for k in range(len(coeffs) - 1, 0, -1):
        acc = acc * r + coeffs[k]
        out[k - 1] = acc
    return out


def rational_roots(coeffs: Sequence[Fraction]) -> Tuple[List[Fraction], bool]:
    """Distinct rational roots of sum c_k x^k, and whether it splits over Q."""
    coeffs = list(coeffs)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    roots = []
    if coeffs[0] == 0 and len(coeffs) > 1:
        roots.append(Fraction(0))
        while len(coeffs) > 1 and coeffs[0] == 0:
            coeffs.pop(0)
    den = 1
    for c in coeffs:
        den = den * c.denominator // _gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    if len(ints) > 1:
        for p in _divisors(ints[0]):
            for q in _divisors(ints[-1]):
                for r in (Fraction(p, q), Fraction(-p, q)):
                    if r not in roots and _horner(coeffs, r) == 0:
                        roots.append(r)
    rest = coeffs
    for r in roots:
        if r == 0:
            continue
        while len(rest) > 1 and _horner(rest, r) == 0:
            rest = _deflate(rest, r)
    return sorted(roots), len(rest) == 1


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def rational_points(gens: Sequence[Polynomial], vars: VarSet,
                    limits: Optional[GroebnerLimits] = None) -> Tuple[List[Point], bool]:
    """Rational points of a zero-dimensional V(gens) and a completeness flag.

    Each coordinate is found from the eliminant of the ideal in that single
    variable; the list is complete when every eliminant splits over Q.
    """
    gens = [g.to_vars(vars) for g in gens if not g.is_zero()]
    gb = groebner_basis(gens, vars=vars, limits=limits)
    if is_trivial(gb):
        return [], True
    if ideal_dimension(gb) != 0:
        raise ValueError("rational_points needs a zero-dimensional ideal")
    candidates = []
    complete = True
    for i, v in enumerate(vars.names):
        others = [u for u in vars.names if u != v]
        elim = [g for g in eliminate(gb.generators, others, vars, limits) if not g.is_zero()]
        uni = min(elim, key=lambda g: g.total_degree())
        roots, splits = rational_roots(_univariate_coeffs(uni, i))
        complete = complete and splits
        candidates.append(roots)
    pts = [pt for pt in product(*candidates) if all(evaluate(g, pt) == 0 for g in gb.generators)]
    return sorted(pts), complete


# Jacobian criterion

def jacobian(gens: Sequence[Polynomial], vars: VarSet) -> PolyMatrix:
    return PolyMatrix([[partial_derivative(g.to_vars(vars), v) for v in vars.names] for g in gens],
                      vars, len(vars))


def jacobian_rank_at(gens: Sequence[Polynomial], vars: VarSet, point) -> int:
    if not gens:
        return 0
    return linalg.rank(jacobian(gens, vars).evaluate(point))


@dataclass
class SmoothnessReport:
    verdict: str
    vars: Tuple[str, ...]
    dim: int
    codim: int
    singular_dim: Optional[int] = None
    points: List[Point] = field(default_factory=list)
    complete: bool = False
    candidates: List[Tuple[Point, bool]] = field(default_factory=list)
    certificate: str = ""

    @property
    def smooth(self) -> bool:
        return self.verdict == SMOOTH

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "vars": list(self.vars),
            "dim": self.dim,
            "codim": self.codim,
            "singular_dim": self.singular_dim,
            "points": [[str(c) for c in p] for p in self.points],
            "complete": self.complete,
            "candidates": [{"point": [str(c) for c in p], "singular": ok} for p, ok in self.candidates],
            "certificate": self.certificate,
        }


def format_point(pt: Sequence[Fraction]) -> str:
    return "(" + ",".join(str(c) for c in pt) + ")"


def smoothness_report(gens: Sequence[Polynomial], ambient: VarSet,
                      candidates: Sequence[Sequence] = (),
                      limits: Optional[GroebnerLimits] = None) -> SmoothnessReport:
    """Jacobian criterion on V(gens): J = gens + all c x c minors of the Jacobian."""
    gens = [g.to_vars(ambient) for g in gens if not g.is_zero()]
    N = len(ambient)
    names = tuple(ambient.names)
    try:
        d = dimension(gens, ambient, limits)
    except ResourceLimitError as e:
        return SmoothnessReport(UNKNOWN, names, -2, -2, certificate=str(e))
    if d < 0:
        return SmoothnessReport(EMPTY, names, d, N + 1, certificate="1 in (gens)")
    c = N - d
    jac_minors = minors(jacobian(gens, ambient), c) if c else [Polynomial.one(ambient)]
    J = gens + [q for q in jac_minors if not q.is_zero()]
    try:
        gb = groebner_basis(J, vars=ambient, limits=limits)
    except ResourceLimitError as e:
        return SmoothnessReport(UNKNOWN, names, d, c, certificate=str(e))
    if is_trivial(gb):
        return SmoothnessReport(SMOOTH, names, d, c, singular_dim=-1, complete=True,
                                certificate="1 in gens + Jacobian minors")
    sd = ideal_dimension(gb)
    checked = [(tuple(Fraction(x) for x in pt),
                all(evaluate(g, pt) == 0 for g in gb.generators)) for pt in candidates]
    if sd == 0:
        pts, complete = rational_points(gb.generators, ambient, limits)
        cert = "singular points verified on every generator of J"
        if not complete:
            cert += "; some singular points are irrational"
        return SmoothnessReport(SINGULAR, names, d, c, 0, pts, complete, checked, cert)
    return SmoothnessReport(POSITIVE_DIM, names, d, c, sd, [], False, checked,
                            f"singular locus has dimension {sd}")


# chart pipeline

@dataclass
class TransformResult:
    chart: ChartPresentation
    smoothness: SmoothnessReport

    @property
    def generators(self) -> List[Polynomial]:
        return self.chart.reduced_generators()


def run_transform(p: DetPresentation, I: ChartIndex, eliminate: bool = True,
                  saturate_by: Union[None, Polynomial, Sequence[Polynomial]] = None,
                  candidates: Sequence[Sequence] = (),
                  limits: Optional[GroebnerLimits] = None) -> TransformResult:
    cp = chart_presentation(p, I)
    if eliminate:
        cp = eliminate_linear(cp)
    if saturate_by is not None:
        cp = saturate_chart(cp, saturate_by, limits)
    rep = smoothness_report(cp.reduced_generators(), cp.remaining_vars(), candidates, limits)
    return TransformResult(cp, rep)


# divisor incidence

@dataclass
class Incidence:
    a: str
    b: str
    meets: bool
    dim: int
    points: List[Point] = field(default_factory=list)
    smooth: List[bool] = field(default_factory=list)
    complete: bool = True

    def smooth_points(self) -> List[Point]:
        return [p for p, s in zip(self.points, self.smooth) if s]


@dataclass
class DivisorLedger:
    vars: Tuple[str, ...]
    divisors: Dict[str, List[Polynomial]]
    pairs: List[Incidence]

    def get(self, a: str, b: str) -> Optional[Incidence]:
        for inc in self.pairs:
            if {inc.a, inc.b} == {a, b}:
                return inc
        return None


def divisor_incidence(cp: ChartPresentation,
                      divisors: Union[Mapping[str, Sequence[Polynomial]],
                                      Sequence[Tuple[str, Sequence[Polynomial]]]],
                      limits: Optional[GroebnerLimits] = None) -> DivisorLedger:
    """Pairwise intersections of named divisors on the chart variety.

    Works in the full chart coordinates; intersection points are classified
    as smooth or singular points of the chart variety by the Jacobian rank.
    """
    items = list(divisors.items()) if isinstance(divisors, Mapping) else list(divisors)
    names = [n for n, _ in items]
    if len(set(names)) != len(names):
        raise ValueError("a divisor cannot be paired with itself")
    vs = cp.vars
    base = [g for g in cp.full_ideal() if not g.is_zero()]
    divs = {n: [g.to_vars(vs) for g in gens] for n, gens in items}
    for n, gens in divs.items():
        if is_trivial(groebner_basis(base + gens, vars=vs, limits=limits)):
            raise ValueError(f"divisor {n} does not meet the chart")
    for a, b in combinations(names, 2):
        if same_ideal(base + divs[a], base + divs[b], vs):
            raise ValueError(f"divisors {a} and {b} coincide")
    codim = len(vs) - dimension(base, vs, limits)
    pairs = []
    for a, b in combinations(names, 2):
        gb = groebner_basis(base + divs[a] + divs[b], vars=vs, limits=limits)
        if is_trivial(gb):
            pairs.append(Incidence(a, b, False, -1))
            continue
        d = ideal_dimension(gb)
        pts, complete = (rational_points(gb.generators, vs, limits) if d == 0 else ([], False))
        smooth = [jacobian_rank_at(base, vs, pt) == codim for pt in pts]
        pairs.append(Incidence(a, b, True, d, pts, smooth, complete))
    return DivisorLedger(tuple(vs.names), divs, pairs)


def same_chart_point(p: DetPresentation, cp1: ChartPresentation, pt1: Point,
                     cp2: ChartPresentation, pt2: Point) -> bool:
    """Do two full-coordinate chart points lie over the same point of the transform?"""
    amb = p.ambient.names
    d1 = dict(zip(cp1.vars.names, pt1))
    d2 = dict(zip(cp2.vars.names, pt2))
    if any(d1[v] != d2[v] for v in amb):
        return False
    I, J = cp1.chart, cp2.chart
    if I == J:
        return all(d1[v] == d2[v] for v in cp1.chart_vars)
    if I.side != J.side:
        raise ValueError("cannot compare points across Tjur and Tjur^T charts")
    q = p if I.side == "row" else DetPresentation(p.F.transpose(), p.t)
    a = [d1[v] for v in cp1.chart_vars]
    try:
        mapped = chart_transition(I, J, a, q.t, q.n)
    except ValueError:
        return False
    return mapped == [d2[v] for v in cp2.chart_vars]


# resolution scripts

@dataclass
class Failure:
    step: int
    chart: str
    kind: str
    message: str
    polynomial: str = ""

    def __str__(self):
        where = f"step {self.step}" + (f", chart {self.chart}" if self.chart else "")
        poly = f": {self.polynomial}" if self.polynomial else ""
        return f"{where}: {self.kind} failed ({self.message}){poly}"


@dataclass
class ChartResult:
    label: str
    transform: TransformResult
    expectation: Optional[Expectation]
    expectation_ok: Optional[bool]
    continued_by: Optional[int]
    ledger: Optional[DivisorLedger]


@dataclass
class StepResult:
    number: int
    claim: str
    determinant: str
    det_ok: bool
    det_sign: int
    chain_ok: Optional[bool]
    chain_detail: str
    presentation: DetPresentation
    charts: List[ChartResult] = field(default_factory=list)

    def chart(self, label: str) -> ChartResult:
        return next(c for c in self.charts if c.label == label)

    def meeting_points(self, name: str) -> List[Tuple[str, str, Point]]:
        """Distinct smooth points where ``name`` meets another divisor, across charts."""
        found: List[Tuple[str, ChartResult, Point]] = []
        for cr in self.charts:
            if cr.ledger is None:
                continue
            for inc in cr.ledger.pairs:
                if name not in (inc.a, inc.b):
                    continue
                other = inc.b if inc.a == name else inc.a
                for pt in inc.smooth_points():
                    if not any(o == other and same_chart_point(
                            self.presentation, c.transform.chart, q, cr.transform.chart, pt)
                            for o, c, q in found):
                        found.append((other, cr, pt))
        return [(other, cr.label, pt) for other, cr, pt in found]

    def meeting_points_distinct(self, name: str) -> bool:
        """Are the smooth meeting points of ``name`` with different divisors pairwise distinct?"""
        pts = []
        for cr in self.charts:
            if cr.ledger is None:
                continue
            for inc in cr.ledger.pairs:
                if name in (inc.a, inc.b):
                    other = inc.b if inc.a == name else inc.a
                    pts += [(other, cr.transform.chart, p) for p in inc.smooth_points()]
        for (o1, c1, p1), (o2, c2, p2) in combinations(pts, 2):
            if o1 != o2 and same_chart_point(self.presentation, c1, p1, c2, p2):
                return False
        return True


@dataclass
class ScriptReport:
    name: str
    steps: List[StepResult]
    failures: List[Failure]
    edges: List[Tuple[str, str]]
    vertices: List[str]
    expected_graph: Optional[List[Tuple[str, str]]]

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def graph_ok(self) -> Optional[bool]:
        if self.expected_graph is None:
            return None
        return _edge_set(self.expected_graph) == _edge_set(self.edges)


def _edge_set(edges) -> set:
    return {tuple(sorted(e)) for e in edges}


def _check_expectation(exp: Expectation, rep: SmoothnessReport) -> bool:
    if exp.kind == SMOOTH:
        return rep.verdict == SMOOTH
    if exp.kind == EMPTY:
        return rep.verdict == EMPTY
    if rep.verdict not in (SINGULAR, POSITIVE_DIM):
        return False
    if not exp.points:
        return True
    claimed = sorted(tuple(Fraction(c) for c in p) for p in exp.points)
    if rep.verdict == SINGULAR:
        return claimed == rep.points if rep.complete else set(claimed) <= set(rep.points)
    return all(ok for _, ok in rep.candidates) and len(rep.candidates) == len(claimed)


def _chain_check(step: ScriptStep, src: ChartResult) -> Tuple[bool, str]:
    cp = src.transform.chart
    target = step.vars
    bindings = {}
    for old, expr in step.renames.items():
        if old not in cp.remaining_vars():
            return False, f"renamed variable {old} is not a chart coordinate"
        bindings[old] = parse_poly(expr, target)
    missing = [v for v in cp.remaining_vars().names
               if v not in bindings and v not in target]
    if missing:
        return False, f"chart coordinates {missing} have no image"
    mapped = [substitute(g, bindings, target) if bindings else g.to_vars(target)
              for g in src.transform.generators]
    mapped = [g for g in mapped if not g.is_zero()]
    if same_ideal(mapped, [step.claim], target):
        return True, ", ".join(str(g) for g in mapped)
    gb = groebner_basis(mapped, vars=target) if mapped else None
    res = normal_form(step.claim, gb) if gb else step.claim
    if res.is_zero():
        # claim lies in the mapped ideal; report a mapped generator outside (claim)
        gc = groebner_basis([step.claim], vars=target)
        res = next(r for r in (normal_form(g, gc) for g in mapped) if not r.is_zero())
    return False, str(res)


def _parse_in(texts: Sequence[str], vars: VarSet) -> List[Polynomial]:
    return [parse_poly(t, vars) for t in texts]


def run_script(script: ResolutionScript, limits: Optional[GroebnerLimits] = None,
               fail_fast: bool = True) -> ScriptReport:
    sources = {s.source: s.number for s in script.steps if s.source is not None}
    results: Dict[int, StepResult] = {}
    failures: List[Failure] = []
    edges = set()
    vertices = set()
    for step in script.steps:
        p = step.presentation()
        det = determinant(step.matrix) if step.matrix.m == step.matrix.n else None
        if det is None:
            det_ok, sign, det_str = True, 0, "(not square)"
        else:
            det_str = str(det)
            if (det - step.claim).is_zero():
                det_ok, sign = True, 1
            elif (det + step.claim).is_zero():
                det_ok, sign = True, -1
            else:
                det_ok, sign = False, 0
                failures.append(Failure(step.number, "", "det check",
                                        "det(matrix) does not reduce to the claim up to sign",
                                        str(det - step.claim)))
        chain_ok, detail = None, ""
        if step.source is not None:
            src_step, src_chart = step.source
            if src_step in results:
                chain_ok, detail = _chain_check(step, results[src_step].chart(src_chart))
                if not chain_ok:
                    failures.append(Failure(step.number, "", "chain check",
                                            f"output of step {src_step} chart {src_chart} "
                                            "does not give the claim", detail))
        sr = StepResult(step.number, str(step.claim), det_str, det_ok, sign, chain_ok, detail, p)
        results[step.number] = sr
        if failures and fail_fast:
            break
        for cs in step.charts:
            label = chart_label(cs.chart)
            cr = _run_chart(p, cs, label, sources.get((step.number, label)), limits)
            sr.charts.append(cr)
            if cr.expectation_ok is False:
                rep = cr.transform.smoothness
                failures.append(Failure(step.number, label, "smoothness",
                                        f"expected {_exp_str(cr.expectation)}, got {rep.verdict}",
                                        ", ".join(str(g) for g in cr.transform.generators)))
            if cr.ledger is not None:
                vertices.update(cr.ledger.divisors)
                for inc in cr.ledger.pairs:
                    if inc.smooth_points():
                        edges.add(tuple(sorted((inc.a, inc.b))))
        if failures and fail_fast:
            break
    report = ScriptReport(script.name, list(results.values()), failures,
                          sorted(edges), sorted(vertices), script.graph)
    if report.graph_ok is False:
        failures.append(Failure(0, "", "dual graph", "incidences do not give the expected graph",
                                " ".join(f"{a}-{b}" for a, b in report.edges)))
    return report


def _exp_str(exp: Optional[Expectation]) -> str:
    if exp is None:
        return "smooth"
    if exp.points:
        return exp.kind + "@" + "".join(format_point(p) for p in exp.points)
    return exp.kind


def _run_chart(p: DetPresentation, cs: ChartStep, label: str, continued_by: Optional[int],
               limits: Optional[GroebnerLimits]) -> ChartResult:
    cp = eliminate_linear(chart_presentation(p, cs.chart))
    if cs.saturate:
        cp = saturate_chart(cp, _parse_in(cs.saturate, cp.vars), limits)
    exp = cs.expect
    cands = exp.points if exp is not None and exp.kind == SINGULAR else ()
    rep = smoothness_report(cp.reduced_generators(), cp.remaining_vars(), cands, limits)
    tr = TransformResult(cp, rep)
    if exp is not None:
        ok = _check_expectation(exp, rep)
    elif continued_by is None:
        ok = rep.verdict == SMOOTH
    else:
        ok = None
    ledger = None
    if cs.divisors:
        ledger = divisor_incidence(cp, [(n, _parse_in(g, cp.vars)) for n, g in cs.divisors.items()],
                                   limits)
    return ChartResult(label, tr, exp, ok, continued_by, ledger)


# model singularity checks

@dataclass
class ModelCheckReport:
    spec: Tuple[int, int, int]
    seed: int
    trials: int
    counts: Dict[str, List[int]]
    minors_dimension: Optional[int]
    expected_dimension: int
    witness: str

    @property
    def failures(self) -> int:
        return sum(f for _, f in self.counts.values())

    @property
    def passed(self) -> bool:
        return self.failures == 0


def generic_matrix(m: int, n: int) -> PolyMatrix:
    vs = VarSet(f"x{i}_{j}" for i in range(1, m + 1) for j in range(1, n + 1))
    return PolyMatrix([[Polynomial.var(vs, f"x{i}_{j}") for j in range(1, n + 1)]
                       for i in range(1, m + 1)], vs)


def model_check(m: int, n: int, t: int, seed: int = 0, trials: int = 100,
                with_dimension: bool = True,
                limits: Optional[GroebnerLimits] = None) -> ModelCheckReport:
    spec = modellab.ModelSpec(m, n, t)
    rng = random.Random(seed)
    counts: Dict[str, List[int]] = {}

    def tally(name, ok):
        counts.setdefault(name, [0, 0])[0 if ok else 1] += 1

    for _ in range(trials):
        r = rng.randrange(0, min(m, n) + 1)
        A = modellab.random_rank_matrix(spec, r, rng.randrange(2**31))
        tally("rank-nullity", modellab.kernel(A, n).dim + modellab.rank(A) == n)

        A, V, W = modellab.random_nash_point(spec, rng)
        tally("fiber-membership", modellab.in_nash_fiber(A, V, W, t))
        # random (V, W) mostly outside the fiber
        V2 = modellab.random_subspace(n, n - t + 1, rng)
        W2 = modellab.random_subspace(m, t - 1, rng) if t > 1 else modellab.QSubspace(m)
        for VV, WW in ((V, W), (V2, W), (V, W2), (V2, W2)):
            both = modellab.in_tjur_fiber(A, VV, t) and modellab.in_tjurT_fiber(A, WW, t)
            tally("fiber-consistency", modellab.in_nash_fiber(A, VV, WW, t) == both)

        Ap = modellab.nash_perturbation(A, V, W, t)
        seq = modellab.nash_limit_sequence(A, V, W, t, 3)
        ok = True
        for i, Ai in enumerate(seq, start=1):
            ok &= modellab.rank(Ai) == t - 1
            ok &= modellab.in_nash_fiber(Ai, V, W, t)
            if t > 1:
                ok &= modellab.kernel(Ai, n) == V and modellab.image(Ai) == W
            ok &= linalg.add(Ai, linalg.scale(A, -1)) == linalg.scale(Ap, Fraction(1, i))
        tally("limit-sequence", ok)

        s = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
        tally("retraction", modellab.retraction_check(A, V, W, t, s))
        tally("retraction", modellab.retraction_check(A, V, W, t, 0))
        c = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
        tally("scaling", modellab.in_nash_fiber(linalg.scale(A, c), V, W, t))

    try:
        w = modellab.discontinuity_witness(spec)
        tally("witness", w.W1 != w.W2)
        witness = f"W1 = {w.W1!r}, W2 = {w.W2!r}"
    except modellab.PreconditionError as e:
        witness = f"not applicable: {e}"

    dim = None
    if with_dimension:
        M = generic_matrix(m, n)
        dim = dimension(minors(M, t), M.vars, limits)
        tally("dimension-formula", dim == spec.d)
    return ModelCheckReport((m, n, t), seed, trials, counts, dim, spec.d, witness)
