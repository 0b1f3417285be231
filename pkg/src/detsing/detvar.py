"""Determinantal presentations: polynomial matrices, minors, strata."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from . import linalg
from .ideals import GroebnerLimits, dimension
from .polycore import Polynomial, VarSet, evaluate, parse_poly


class PresentationError(ValueError):
    pass


class NonPolynomialPivotError(PresentationError):
    def __init__(self, entry: Polynomial, position: Tuple[int, int]):
        self.entry = entry
        self.position = position
        super().__init__(
            f"pivot {entry} at {position} is a local unit without a polynomial inverse")


class PolyMatrix:
    """Dense m x n matrix of polynomials sharing one VarSet."""

    __slots__ = ("rows", "vars", "_n")

    def __init__(self, rows: Sequence[Sequence[Polynomial]], vars: Optional[VarSet] = None,
                 ncols: Optional[int] = None):
        rows = tuple(tuple(r) for r in rows)
        if vars is None:
            if not rows or not rows[0]:
                raise ValueError("an empty matrix needs an explicit VarSet")
            vars = rows[0][0].vars
        if len({len(r) for r in rows}) > 1:
            raise ValueError("ragged matrix")
        self.rows = tuple(tuple(e.to_vars(vars) for e in r) for r in rows)
        self.vars = vars
        if rows:
            ncols = len(rows[0])
        elif ncols is None:
            raise ValueError("a matrix without rows needs an explicit column count")
        self._n = ncols

    @classmethod
    def parse(cls, rows: Sequence[Sequence[str]], vars: Union[VarSet, Sequence[str]]) -> "PolyMatrix":
        if not isinstance(vars, VarSet):
            vars = VarSet(vars)
        return cls([[parse_poly(e, vars) for e in row] for row in rows], vars)

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return self._n

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.m, self.n)

    def __getitem__(self, ij: Tuple[int, int]) -> Polynomial:
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return (isinstance(other, PolyMatrix) and self.rows == other.rows
                and self.vars == other.vars and self._n == other._n)

    def __hash__(self):
        return hash((self.rows, self.vars, self._n))

    def __repr__(self):
        return "PolyMatrix(" + "; ".join(", ".join(str(e) for e in r) for r in self.rows) + ")"

    def entries(self) -> List[Polynomial]:
        return [e for r in self.rows for e in r]

    def column(self, j: int) -> List[Polynomial]:
        return [r[j] for r in self.rows]

    def transpose(self) -> "PolyMatrix":
        if not self.rows:
            return PolyMatrix([[] for _ in range(self._n)], self.vars, 0)
        if not self._n:
            return PolyMatrix([], self.vars, self.m)
        return PolyMatrix([list(c) for c in zip(*self.rows)], self.vars)

    def to_vars(self, vars: VarSet) -> "PolyMatrix":
        return PolyMatrix(self.rows, vars, self._n)

    def stack(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.n != other.n:
            raise ValueError("column counts differ")
        vs = self.vars
        return PolyMatrix(list(self.rows) + [[e.to_vars(vs) for e in r] for r in other.rows],
                          vs, self.n)

    def evaluate(self, point) -> linalg.Matrix:
        return [[evaluate(e, point) for e in r] for r in self.rows]

    def format(self) -> str:
        return "\n".join("  ".join(f"({e})" for e in r) for r in self.rows)


def _det(M: PolyMatrix, rows: Tuple[int, ...], cols: Tuple[int, ...],
         memo: Dict[Tuple[int, Tuple[int, ...]], Polynomial]) -> Polynomial:
    # Laplace along the first remaining row; memo keyed by (depth, remaining columns)
    depth = len(rows) - len(cols)
    key = (depth, cols)
    if key in memo:
        return memo[key]
    if not cols:
        return Polynomial.one(M.vars)
    r = rows[depth]
    total = Polynomial.zero(M.vars)
    for k, c in enumerate(cols):
        e = M.rows[r][c]
        if e.is_zero():
            continue
        sub = _det(M, rows, cols[:k] + cols[k + 1:], memo)
        if sub.is_zero():
            continue
        term = e * sub
        total = total - term if k % 2 else total + term
    memo[key] = total
    return total


def determinant(M: PolyMatrix) -> Polynomial:
    if M.m != M.n:
        raise ValueError("determinant of a non-square matrix")
    return _det(M, tuple(range(M.m)), tuple(range(M.n)), {})


def minors(M: PolyMatrix, t: int) -> List[Polynomial]:
    """All t x t minors, ordered lexicographically by (row set, column set)."""
    if not 1 <= t <= min(M.m, M.n):
        if t == 0:
            return [Polynomial.one(M.vars)]
        raise PresentationError(f"minor size {t} out of range for a {M.m}x{M.n} matrix")
    out = []
    for R in combinations(range(M.m), t):
        memo: Dict = {}
        for C in combinations(range(M.n), t):
            out.append(_det(M, R, C, memo))
    return out


@dataclass(frozen=True)
class DetPresentation:
    """X = F^{-1}(rank < t) for a polynomial matrix F over ``ambient``."""

    F: PolyMatrix
    t: int
    label: str = ""

    def __post_init__(self):
        if not 1 <= self.t <= min(self.F.m, self.F.n):
            raise PresentationError(
                f"t={self.t} out of range for a {self.F.m}x{self.F.n} matrix")

    @property
    def ambient(self) -> VarSet:
        return self.F.vars

    @property
    def m(self) -> int:
        return self.F.m

    @property
    def n(self) -> int:
        return self.F.n

    @property
    def N(self) -> int:
        return len(self.F.vars)

    @property
    def type(self) -> Tuple[int, int, int]:
        return (self.m, self.n, self.t)

    def expected_codim(self) -> int:
        return (self.m - self.t + 1) * (self.n - self.t + 1)

    def ideal(self) -> List[Polynomial]:
        return [p for p in minors(self.F, self.t) if not p.is_zero()]


@dataclass(frozen=True)
class DeterminantalCheck:
    dim: int
    codim: int
    expected_codim: int

    @property
    def verdict(self) -> bool:
        return self.codim == self.expected_codim


def check_determinantal(p: DetPresentation, limits: Optional[GroebnerLimits] = None) -> DeterminantalCheck:
    d = dimension(p.ideal(), p.ambient, limits)
    return DeterminantalCheck(d, p.N - d, p.expected_codim())


def rank_at(M: PolyMatrix, point) -> int:
    if M.m == 0 or M.n == 0:
        return 0
    return linalg.rank(M.evaluate(point))


def origin(vars: VarSet) -> List[Fraction]:
    return [Fraction(0)] * len(vars)


def stratum_at(p: DetPresentation, point) -> int:
    """s with point in X^s, i.e. rank F(point) = s - 1."""
    r = rank_at(p.F, point)
    if r >= p.t:
        raise PresentationError(f"point is not on X (rank {r} >= t={p.t})")
    return r + 1


def transpose_presentation(p: DetPresentation) -> DetPresentation:
    label = p.label + "^T" if p.label else ""
    return DetPresentation(p.F.transpose(), p.t, label)


@dataclass(frozen=True)
class StrataReport:
    """Closure dimensions dim V(s-minors of F) for s = 1..t.

    ``dims[s-1]`` is the dimension of the closure of the stratum X^s; the
    locally closed strata are not computed separately.
    """

    m: int
    n: int
    t: int
    N: int
    dims: Tuple[int, ...]

    def dim(self, s: int) -> int:
        return self.dims[s - 1]

    @property
    def dim_x(self) -> int:
        return self.dims[-1]

    @property
    def determinantal(self) -> bool:
        return self.N - self.dim_x == (self.m - self.t + 1) * (self.n - self.t + 1)

    @property
    def tilde_is_determinantal(self) -> bool:
        """dim X^s <= N - (m-s+1)(n-t+1) for all s (chart dimension equals dim X)."""
        return all(self.dim(s) <= self.N - (self.m - s + 1) * (self.n - self.t + 1)
                   for s in range(1, self.t + 1))

    @property
    def tilde_equals_tjur(self) -> bool:
        return all(self.dim(s) < self.N - (self.m - s + 1) * (self.n - self.t + 1)
                   for s in range(1, self.t))

    @property
    def tilde_is_determinantal_transpose(self) -> bool:
        return all(self.dim(s) <= self.N - (self.m - self.t + 1) * (self.n - s + 1)
                   for s in range(1, self.t + 1))

    @property
    def tilde_equals_tjur_transpose(self) -> bool:
        return all(self.dim(s) < self.N - (self.m - self.t + 1) * (self.n - s + 1)
                   for s in range(1, self.t))


def strata_report(p: DetPresentation, limits: Optional[GroebnerLimits] = None) -> StrataReport:
    dims = []
    for s in range(1, p.t + 1):
        gens = [q for q in minors(p.F, s) if not q.is_zero()]
        dims.append(dimension(gens, p.ambient, limits))
    return StrataReport(p.m, p.n, p.t, p.N, tuple(dims))


def reduce_presentation(p: DetPresentation, unit_scaling: bool = True) -> DetPresentation:
    """Split off the rank of F at the origin.

    Repeatedly pivots on the first entry (row-major) with nonzero constant
    term and clears its row and column.  A constant pivot is divided out
    exactly.  A non-constant pivot u (a unit near the origin) is handled by
    scaling the other rows/columns by u instead of dividing, which leaves
    the t-minor ideal unchanged wherever u != 0; with ``unit_scaling=False``
    such a pivot raises :class:`NonPolynomialPivotError`.
    """
    F = p.F
    zero_pt = origin(F.vars)
    if rank_at(F, zero_pt) == 0:
        raise PresentationError("F vanishes at the origin; nothing to reduce")
    rows = [list(r) for r in F.rows]
    t = p.t
    while rows and rows[0]:
        piv = next(((i, j) for i, r in enumerate(rows) for j, e in enumerate(r)
                    if e.constant_term() != 0), None)
        if piv is None:
            break
        if t == 1:
            raise PresentationError("origin is not on X: rank F(0) >= t")
        i, j = piv
        u = rows[i][j]
        if u.is_constant():
            c = u.constant_term()
            new = []
            for r, row in enumerate(rows):
                if r == i:
                    continue
                f = row[j] / c
                new.append([row[k] - f * rows[i][k] for k in range(len(row)) if k != j])
        elif unit_scaling:
            new = []
            for r, row in enumerate(rows):
                if r == i:
                    continue
                new.append([u * row[k] - row[j] * rows[i][k] for k in range(len(row)) if k != j])
        else:
            raise NonPolynomialPivotError(u, (i + 1, j + 1))
        rows = new
        t -= 1
    if not rows or not rows[0]:
        raise PresentationError("reduction consumed the whole matrix")
    return DetPresentation(PolyMatrix(rows, F.vars), t, p.label)
