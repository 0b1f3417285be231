"""Grassmannian charts and the chart-wise Tjurina transform.

For a presentation F of type (m, n, t) and I a (t-1)-subset of the columns,
the chart matrix A_I has unit columns at I and free variables a_{j,i}
elsewhere.  The chart of the transform is cut out by the entries of the
m x (n-t+1) matrix with columns

    f_{r,i} - sum_j a_{j,i} f_{r,i_j}        (i not in I).

The transpose transform uses the column space, i.e. the same construction
applied to F^T.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import linalg
from .detvar import (DetPresentation, PolyMatrix, StrataReport, minors, reduce_presentation,
                     transpose_presentation)
from .ideals import GroebnerLimits, dimension
from .polycore import Polynomial, VarSet, substitute

ROW = "row"
COLUMN = "column"


@dataclass(frozen=True)
class ChartIndex:
    """1-based sorted column subset I with |I| = t-1; ``side`` picks Tjur or Tjur^T."""

    I: Tuple[int, ...]
    side: str = ROW

    def __post_init__(self):
        object.__setattr__(self, "I", tuple(sorted(self.I)))
        if len(set(self.I)) != len(self.I):
            raise ValueError(f"repeated index in chart {self.I}")
        if self.side not in (ROW, COLUMN):
            raise ValueError(f"side must be {ROW!r} or {COLUMN!r}")

    def validate(self, t: int, n: int) -> None:
        if len(self.I) != t - 1:
            raise ValueError(f"chart {self.I} must have t-1 = {t - 1} elements")
        if any(not 1 <= i <= n for i in self.I):
            raise ValueError(f"chart {self.I} out of range 1..{n}")

    def __str__(self):
        body = "{" + ",".join(map(str, self.I)) + "}"
        return body + ("^T" if self.side == COLUMN else "")


def all_charts(t: int, n: int, side: str = ROW) -> List[ChartIndex]:
    return [ChartIndex(I, side) for I in combinations(range(1, n + 1), t - 1)]


def chart_var_names(I: Sequence[int], t: int, n: int) -> List[Tuple[str, int, int]]:
    """(name, j, i) for each chart variable, column-major over i not in I.

    With a single chart row the name is ``a<i>``; otherwise ``a<j>_<i>``.
    """
    out = []
    for i in range(1, n + 1):
        if i in I:
            continue
        for j in range(1, t):
            name = f"a{i}" if t == 2 else f"a{j}_{i}"
            out.append((name, j, i))
    return out


def chart_matrix(I: ChartIndex, t: int, n: int, vars: Optional[VarSet] = None) -> PolyMatrix:
    """(t-1) x n matrix with unit columns at I and chart variables elsewhere."""
    I.validate(t, n)
    names = chart_var_names(I.I, t, n)
    if vars is None:
        vars = VarSet(name for name, _, _ in names)
    lookup = {(j, i): name for name, j, i in names}
    rows = []
    for j in range(1, t):
        row = []
        for i in range(1, n + 1):
            if i in I.I:
                row.append(Polynomial.constant(vars, int(I.I.index(i) + 1 == j)))
            else:
                row.append(Polynomial.var(vars, lookup[(j, i)]))
        rows.append(row)
    return PolyMatrix(rows, vars, n)


def _oriented(p: DetPresentation, I: ChartIndex) -> DetPresentation:
    return transpose_presentation(p) if I.side == COLUMN else p


def chart_vars(p: DetPresentation, I: ChartIndex) -> VarSet:
    """Ambient variables followed by the chart variables."""
    q = _oriented(p, I)
    names = [name for name, _, _ in chart_var_names(I.I, q.t, q.n)]
    clash = [v for v in names if v in q.ambient]
    if clash:
        raise ValueError(f"chart variables {clash} collide with ambient variables")
    return q.ambient.extend(names)


def stacked_matrix(p: DetPresentation, I: ChartIndex) -> PolyMatrix:
    """A_I stacked over F; the chart locus is where its t-minors vanish."""
    q = _oriented(p, I)
    I.validate(q.t, q.n)
    vs = chart_vars(p, I)
    A = chart_matrix(I, q.t, q.n, vs)
    return A.stack(q.F.to_vars(vs))


@dataclass(frozen=True)
class ChartPresentation:
    source: DetPresentation
    chart: ChartIndex
    vars: VarSet
    chart_vars: Tuple[str, ...]
    matrix: PolyMatrix
    generators: Tuple[Polynomial, ...]
    ledger: Tuple[Tuple[str, Polynomial], ...] = ()
    saturated_by: Tuple[Polynomial, ...] = ()

    def eliminated(self) -> Tuple[str, ...]:
        return tuple(v for v, _ in self.ledger)

    def remaining_vars(self) -> VarSet:
        return self.vars.without(self.eliminated())

    def reduced_generators(self) -> List[Polynomial]:
        """Generators in the coordinates that survive elimination."""
        vs = self.remaining_vars()
        return [g.to_vars(vs) for g in self.generators]

    def full_ideal(self) -> List[Polynomial]:
        """Generators plus the ledger relations, in ambient+chart coordinates."""
        return list(self.generators) + [g for _, g in self.ledger]

    def lift_point(self, point: Mapping[str, Fraction]) -> Dict[str, Fraction]:
        """Extend a point in remaining coordinates by the eliminated ones."""
        from .polycore import evaluate
        full = {k: Fraction(v) for k, v in point.items()}
        for v, g in reversed(self.ledger):
            h = Polynomial.var(self.vars, v) - g
            full[v] = evaluate(h, full)
        return full


def chart_presentation(p: DetPresentation, I: ChartIndex) -> ChartPresentation:
    """Closed-formula chart equations F'_I (never negated)."""
    q = _oriented(p, I)
    I.validate(q.t, q.n)
    vs = chart_vars(p, I)
    F = q.F.to_vars(vs)
    lookup = {(j, i): name for name, j, i in chart_var_names(I.I, q.t, q.n)}
    cols = []
    for i in range(1, q.n + 1):
        if i in I.I:
            continue
        col = []
        for r in range(q.m):
            e = F[r, i - 1]
            for j, ij in enumerate(I.I, start=1):
                e = e - Polynomial.var(vs, lookup[(j, i)]) * F[r, ij - 1]
            col.append(e)
        cols.append(col)
    rows = [list(r) for r in zip(*cols)] if cols else [[] for _ in range(q.m)]
    M = PolyMatrix(rows, vs, len(cols))
    return ChartPresentation(
        source=p, chart=I, vars=vs,
        chart_vars=tuple(name for name, _, _ in chart_var_names(I.I, q.t, q.n)),
        matrix=M, generators=tuple(M.entries()))


def chart_presentation_via_reduction(p: DetPresentation, I: ChartIndex) -> PolyMatrix:
    """F'_I recomputed by pivoting the stacked matrix on its t-1 unit columns."""
    q = _oriented(p, I)
    S = stacked_matrix(p, I)
    if q.t == 1:
        return S
    reduced = reduce_presentation(DetPresentation(S, q.t))
    return reduced.F


def chart_transition(I: ChartIndex, J: ChartIndex, a_point: Sequence, t: int, n: int) -> List[Fraction]:
    """J-chart coordinates of the row space A_I(a_point).

    The J-columns of A_I(a) must form an invertible block B; the new chart
    matrix is B^{-1} A_I(a).
    """
    I.validate(t, n)
    J.validate(t, n)
    names = chart_var_names(I.I, t, n)
    if len(a_point) != len(names):
        raise ValueError(f"expected {len(names)} chart coordinates")
    A = [[Fraction(0)] * n for _ in range(t - 1)]
    for k, i in enumerate(I.I):
        A[k][i - 1] = Fraction(1)
    for (_, j, i), v in zip(names, a_point):
        A[j - 1][i - 1] = Fraction(v)
    B = [[A[r][c - 1] for c in J.I] for r in range(t - 1)]
    if linalg.rank(B) < t - 1:
        raise ValueError(f"point is not in the overlap of charts {I} and {J}")
    C = linalg.matmul(linalg.inverse(B), A) if t > 1 else A
    return [C[j - 1][i - 1] for _, j, i in chart_var_names(J.I, t, n)]


def _linear_solve_for(g: Polynomial, v: str) -> Optional[Polynomial]:
    """If g = c*v + rest with c a nonzero constant and v absent from rest,
    return h with g/c = v - h."""
    if g.degree_in(v) != 1:
        return None
    coeff = g.coefficient_of(v, 1)
    if not coeff.is_constant():
        return None
    c = coeff.constant_term()
    rest = g - coeff * Polynomial.var(g.vars, v)
    if rest.degree_in(v) > 0:
        return None
    return -rest / c


def eliminate_linear(cp: ChartPresentation) -> ChartPresentation:
    """Substitute away generators of the form v - h, one variable at a time.

    Scan order: variables in VarSet order (ambient before chart), generators
    in list order; the first hit is applied and the scan restarts.
    """
    gens = [g for g in cp.generators if not g.is_zero()]
    ledger = list(cp.ledger)
    vs = cp.vars
    while True:
        hit = None
        for v in vs.names:
            if v in dict(ledger):
                continue
            for k, g in enumerate(gens):
                h = _linear_solve_for(g, v)
                if h is not None:
                    hit = (v, k, h)
                    break
            if hit:
                break
        if hit is None:
            break
        v, k, h = hit
        del gens[k]
        binding = {v: h}
        gens = [substitute(g, binding, vs) for g in gens]
        gens = [g for g in gens if not g.is_zero()]
        # earlier solutions u = h_u may still mention v
        ledger = [(u, Polynomial.var(vs, u) - substitute(Polynomial.var(vs, u) - g, binding, vs))
                  for u, g in ledger]
        ledger.append((v, Polynomial.var(vs, v) - h))
    return replace(cp, generators=tuple(gens), ledger=tuple(ledger))


def saturate_chart(cp: ChartPresentation, f, limits: Optional[GroebnerLimits] = None) -> ChartPresentation:
    from .ideals import saturate
    factors = [f] if isinstance(f, Polynomial) else list(f)
    factors = [q.to_vars(cp.vars) for q in factors]
    gens = saturate(list(cp.generators), factors, cp.vars, limits) if cp.generators else []
    return replace(cp, generators=tuple(gens), saturated_by=cp.saturated_by + tuple(factors))


def tjur_equals_tilde(p: DetPresentation, strata: StrataReport) -> bool:
    """dim X^s < N - (m-s+1)(n-t+1) for s = 1..t-1 (closure dimensions)."""
    if strata.t == 1:
        return True
    return strata.tilde_equals_tjur


@dataclass(frozen=True)
class CriterionReport:
    m: int
    n: int
    t: int
    N: int
    dim_x: int
    dim_x1: int
    # lci certificates, each reproducible from the numbers above
    count_tjur: bool
    count_tjurT: bool
    high_t_applies: bool
    high_t_tjur: bool
    high_t_tjurT: bool
    t2_applies: bool
    t2_tjur: bool
    t2_tjurT: bool
    trivial_t1: bool

    @property
    def tjur_lci(self) -> bool:
        return self.trivial_t1 or self.count_tjur or self.high_t_tjur or self.t2_tjur

    @property
    def tjurT_lci(self) -> bool:
        return self.trivial_t1 or self.count_tjurT or self.high_t_tjurT or self.t2_tjurT


def lci_criteria(m: int, n: int, t: int, N: int, dim_x1: int) -> CriterionReport:
    """Complete-intersection certificates for an EIDS (the caller vouches for EIDS).

    The t >= 3 branch assumes X^2 is nonempty.
    """
    dim_x = N - (m - t + 1) * (n - t + 1)
    t1 = t == 1
    high = t >= 3
    two = t == 2
    return CriterionReport(
        m=m, n=n, t=t, N=N, dim_x=dim_x, dim_x1=dim_x1,
        count_tjur=N - m * (n - t + 1) > dim_x1,
        count_tjurT=N - n * (m - t + 1) > dim_x1,
        high_t_applies=high,
        high_t_tjur=high and n - 1 < m * (t - 2),
        high_t_tjurT=high and m - 1 < n * (t - 2),
        t2_applies=two,
        t2_tjur=two and n <= dim_x - dim_x1,
        t2_tjurT=two and m <= dim_x - dim_x1,
        trivial_t1=t1,
    )


def tjur_identity_t1(p: DetPresentation) -> bool:
    """For t = 1 the only chart is I = {} and F'_I is F itself."""
    if p.t != 1:
        raise ValueError("tjur_identity_t1 requires t = 1")
    I = ChartIndex(())
    cp = chart_presentation(p, I)
    return (chart_matrix(I, 1, p.n).m == 0
            and cp.vars == p.ambient
            and cp.matrix == p.F)


@dataclass(frozen=True)
class ChartDimensionCheck:
    chart: ChartIndex
    dim_chart: int
    dim_x: int
    codim_chart: int
    expected_codim: int

    @property
    def determinantal(self) -> Optional[bool]:
        """Codimension test; only meaningful when dim_chart == dim_x."""
        if self.dim_chart != self.dim_x:
            return None
        return self.codim_chart == self.expected_codim


def chart_dimension_check(p: DetPresentation, I: ChartIndex,
                          limits: Optional[GroebnerLimits] = None) -> ChartDimensionCheck:
    cp = chart_presentation(p, I)
    q = _oriented(p, I)
    d_chart = dimension([g for g in cp.generators if not g.is_zero()], cp.vars, limits)
    d_x = dimension(p.ideal(), p.ambient, limits)
    return ChartDimensionCheck(I, d_chart, d_x, len(cp.vars) - d_chart, q.m * (q.n - q.t + 1))
