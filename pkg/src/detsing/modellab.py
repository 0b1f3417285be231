"""Exact checks on the model singularity M^t_{m,n} (matrices of rank < t).

Points of the three transforms are tuples (A, V, W) with V a subspace of
Q^n of dimension n-t+1 and W a subspace of Q^m of dimension t-1:

* Tjur:   A(V) = 0
* Tjur^T: Im(A) in W
* Nash:   both

Limits are replaced by exact statements about explicit families such as
A + A'/i, evaluated at finitely many parameters.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import linalg
from .linalg import Matrix


class DimensionMismatchError(ValueError):
    pass


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class ModelSpec:
    m: int
    n: int
    t: int

    def __post_init__(self):
        if not (self.m >= 1 and self.n >= 1 and 1 <= self.t <= min(self.m, self.n)):
            raise PreconditionError(f"invalid model spec (m,n,t)=({self.m},{self.n},{self.t})")

    @property
    def d(self) -> int:
        """dim M^t = mn - (m-t+1)(n-t+1)."""
        return self.m * self.n - (self.m - self.t + 1) * (self.n - self.t + 1)


class QSubspace:
    """Subspace of Q^k stored by an rref basis, so equal spaces compare equal."""

    __slots__ = ("k", "basis")

    def __init__(self, k: int, vectors: Sequence[Sequence] = ()):
        vecs = [list(map(Fraction, v)) for v in vectors]
        if any(len(v) != k for v in vecs):
            raise DimensionMismatchError(f"vectors must have length {k}")
        self.k = k
        self.basis = tuple(tuple(v) for v in linalg.row_basis(vecs, k))

    @classmethod
    def span_of_units(cls, k: int, indices: Sequence[int]) -> "QSubspace":
        """span{e_i : i in indices}, indices 1-based."""
        return cls(k, [[int(j == i - 1) for j in range(k)] for i in indices])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence) -> bool:
        if not self.basis:
            return all(x == 0 for x in v)
        return linalg.rank([list(b) for b in self.basis] + [list(map(Fraction, v))]) == self.dim

    def issubset(self, other: "QSubspace") -> bool:
        return self.k == other.k and all(other.contains(b) for b in self.basis)

    def __eq__(self, other):
        return isinstance(other, QSubspace) and self.k == other.k and self.basis == other.basis

    def __hash__(self):
        return hash((self.k, self.basis))

    def __repr__(self):
        vecs = ", ".join("(" + ",".join(str(x) for x in b) + ")" for b in self.basis)
        return f"QSubspace(k={self.k}, [{vecs}])"

    def matrix(self) -> Matrix:
        """Basis vectors as columns (k x dim)."""
        return linalg.transpose([list(b) for b in self.basis]) if self.basis else [[] for _ in range(self.k)]


def _shape(A: Matrix) -> Tuple[int, int]:
    return len(A), (len(A[0]) if A else 0)


def kernel(A: Matrix, ncols: Optional[int] = None) -> QSubspace:
    n = _shape(A)[1] if A else (ncols or 0)
    return QSubspace(n, linalg.nullspace(A, n))


def image(A: Matrix) -> QSubspace:
    m, _ = _shape(A)
    return QSubspace(m, linalg.transpose(A))


def rank(A: Matrix) -> int:
    return linalg.rank(A)


def random_rank_matrix(spec: ModelSpec, r: int, seed: int, lo: int = -9, hi: int = 9) -> Matrix:
    """Product of random m x r and r x n integer matrices of exact rank r."""
    if not 0 <= r <= min(spec.m, spec.n):
        raise PreconditionError(f"rank {r} out of range for {spec.m}x{spec.n}")
    rng = random.Random(seed)
    if r == 0:
        return linalg.zeros(spec.m, spec.n)
    for _ in range(100):
        P = [[Fraction(rng.randint(lo, hi)) for _ in range(r)] for _ in range(spec.m)]
        Q = [[Fraction(rng.randint(lo, hi)) for _ in range(spec.n)] for _ in range(r)]
        A = linalg.matmul(P, Q)
        if linalg.rank(A) == r:
            return A
    raise RuntimeError(f"could not sample a rank-{r} matrix in 100 tries")


def random_subspace(k: int, dim: int, rng: random.Random, lo: int = -9, hi: int = 9) -> QSubspace:
    while True:
        S = QSubspace(k, [[rng.randint(lo, hi) for _ in range(k)] for _ in range(dim)])
        if S.dim == dim:
            return S


def _extend(basis: Sequence[Sequence[Fraction]], within: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    """Vectors from ``within`` that complete ``basis`` to a basis of span(basis + within)."""
    cur = [list(b) for b in basis]
    added = []
    for v in within:
        if linalg.rank(cur + [list(v)]) > len(cur):
            cur.append(list(v))
            added.append(list(v))
    return added


def _check_dims(A: Matrix, V: Optional[QSubspace], W: Optional[QSubspace], t: int):
    m, n = _shape(A)
    if V is not None and (V.k != n or V.dim != n - t + 1):
        raise DimensionMismatchError(f"V must be a {n - t + 1}-dimensional subspace of Q^{n}")
    if W is not None and (W.k != m or W.dim != t - 1):
        raise DimensionMismatchError(f"W must be a {t - 1}-dimensional subspace of Q^{m}")


def in_tjur_fiber(A: Matrix, V: QSubspace, t: int) -> bool:
    _check_dims(A, V, None, t)
    return all(x == 0 for b in V.basis for x in linalg.matvec(A, b))


def in_tjurT_fiber(A: Matrix, W: QSubspace, t: int) -> bool:
    _check_dims(A, None, W, t)
    return image(A).issubset(W)


def in_nash_fiber(A: Matrix, V: QSubspace, W: QSubspace, t: int) -> bool:
    return in_tjur_fiber(A, V, t) and in_tjurT_fiber(A, W, t)


def nash_perturbation(A: Matrix, V: QSubspace, W: QSubspace, t: int) -> Matrix:
    """A' of rank t-1-rank(A) with ker A' + V' = Q^n, V in ker A', Im A' = W'.

    V' complements V inside ker A and W' complements Im A inside W.
    """
    if not in_nash_fiber(A, V, W, t):
        raise PreconditionError("(A, V, W) is not a point of the Nash transform")
    m, n = _shape(A)
    K = kernel(A, n)
    Vp = _extend(V.basis, K.basis)
    Wp = _extend(image(A).basis, W.basis)
    r = linalg.rank(A)
    if len(Vp) != t - 1 - r or len(Wp) != t - 1 - r:
        raise PreconditionError("splitting dimensions do not match t-1-rank(A)")
    if not Vp:
        return linalg.zeros(m, n)
    # basis of Q^n: V' first, then V, then standard vectors to fill up
    units = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    rest = [list(b) for b in V.basis]
    rest += _extend(Vp + rest, units)
    P = linalg.transpose(Vp + rest)
    dual = linalg.inverse(P)  # row k is the functional picking coordinate k
    Ap = linalg.zeros(m, n)
    for k, w in enumerate(Wp):
        for i in range(m):
            for j in range(n):
                Ap[i][j] += w[i] * dual[k][j]
    return Ap


def nash_limit_sequence(A: Matrix, V: QSubspace, W: QSubspace, t: int, steps: int) -> List[Matrix]:
    """A + A'/i for i = 1..steps; each member has kernel V and image W."""
    Ap = nash_perturbation(A, V, W, t)
    return [linalg.add(A, linalg.scale(Ap, Fraction(1, i))) for i in range(1, steps + 1)]


def tangent_membership(A: Matrix, B: Matrix, t: int) -> bool:
    """B(ker A) in Im A, the tangent space of M^t at a regular point A."""
    if linalg.rank(A) != t - 1:
        raise PreconditionError("A is not in the open stratum (rank must be t-1)")
    n = _shape(A)[1]
    im = image(A)
    return all(im.contains(linalg.matvec(B, v)) for v in kernel(A, n).basis)


@dataclass(frozen=True)
class DiscontinuityWitness:
    spec: ModelSpec
    A: Matrix
    V: QSubspace
    W1: QSubspace
    W2: QSubspace
    samples: Tuple[Tuple[Fraction, Matrix, Matrix], ...]

    def sequence(self, which: int, s) -> Matrix:
        return _witness_member(self.spec, which, Fraction(s))


def _witness_member(spec: ModelSpec, which: int, s: Fraction) -> Matrix:
    m, n, t = spec.m, spec.n, spec.t
    A = linalg.zeros(m, n)
    for i in range(t - 2):
        A[i][i] = Fraction(1)
    # 1/s x_{t-1} lands in slot t-1 (first sequence) or slot t (second)
    row = t - 2 if which == 1 else t - 1
    A[row][t - 2] = 1 / s
    return A


def discontinuity_witness(spec: ModelSpec, samples: Sequence = (1, 2, 10)) -> DiscontinuityWitness:
    """Two regular sequences with the same limit (A, V) but different image limits."""
    m, n, t = spec.m, spec.n, spec.t
    if t < 2 or m < t:
        raise PreconditionError("witness needs t >= 2 and t <= m")
    A = linalg.zeros(m, n)
    for i in range(t - 2):
        A[i][i] = Fraction(1)
    V = QSubspace.span_of_units(n, range(t, n + 1))
    W1 = QSubspace.span_of_units(m, range(1, t))
    W2 = QSubspace.span_of_units(m, list(range(1, t - 1)) + [t])
    rows = []
    for s in samples:
        s = Fraction(s)
        A1 = _witness_member(spec, 1, s)
        A2 = _witness_member(spec, 2, s)
        for Ai, Wi in ((A1, W1), (A2, W2)):
            if kernel(Ai, n) != V or image(Ai) != Wi or linalg.rank(Ai) != t - 1:
                raise AssertionError("witness sequence member has wrong kernel/image")
        rows.append((s, A1, A2))
    if W1 == W2:
        raise AssertionError("witness image limits coincide")
    return DiscontinuityWitness(spec, A, V, W1, W2, tuple(rows))


def retraction_check(A: Matrix, V: QSubspace, W: QSubspace, t: int, s) -> bool:
    """(sA)(V) = 0 and Im(sA) in W: f_s maps the Nash fiber point to another one."""
    if not in_nash_fiber(A, V, W, t):
        raise PreconditionError("(A, V, W) is not a point of the Nash transform")
    sA = linalg.scale(A, s)
    kills_v = all(x == 0 for b in V.basis for x in linalg.matvec(sA, b))
    im = image(sA)
    if Fraction(s) == 0 and im.dim != 0:
        return False
    return kills_v and im.issubset(W)


def random_nash_point(spec: ModelSpec, rng: random.Random, r: Optional[int] = None):
    """Random (A, V, W) in the Nash transform with rank A = r (default random < t)."""
    m, n, t = spec.m, spec.n, spec.t
    if r is None:
        r = rng.randrange(0, t)
    A = random_rank_matrix(spec, r, rng.randrange(2**31))
    K = kernel(A, n)
    # V: random (n-t+1)-subspace of ker A
    while True:
        coeffs = [[rng.randint(-9, 9) for _ in range(K.dim)] for _ in range(n - t + 1)]
        vecs = [[sum((c * b[j] for c, b in zip(row, K.basis)), Fraction(0)) for j in range(n)]
                for row in coeffs]
        V = QSubspace(n, vecs)
        if V.dim == n - t + 1:
            break
    im = image(A)
    while True:
        extra = [[rng.randint(-9, 9) for _ in range(m)] for _ in range(t - 1 - im.dim)]
        W = QSubspace(m, [list(b) for b in im.basis] + extra)
        if W.dim == t - 1:
            break
    return A, V, W
