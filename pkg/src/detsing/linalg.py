"""Exact linear algebra over Q on plain lists of Fractions."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple

Matrix = List[List[Fraction]]


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def zeros(m: int, n: int) -> Matrix:
    return [[Fraction(0)] * n for _ in range(m)]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def transpose(A: Matrix) -> Matrix:
    return [list(col) for col in zip(*A)] if A else []


def matmul(A: Matrix, B: Matrix) -> Matrix:
    Bt = transpose(B)
    return [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in Bt] for row in A]


def matvec(A: Matrix, v: Sequence[Fraction]) -> List[Fraction]:
    return [sum((a * x for a, x in zip(row, v)), Fraction(0)) for row in A]


def add(A: Matrix, B: Matrix) -> Matrix:
    return [[a + b for a, b in zip(r, s)] for r, s in zip(A, B)]


def scale(A: Matrix, c) -> Matrix:
    c = Fraction(c)
    return [[a * c for a in row] for row in A]


def _integral_rows(A: Matrix) -> List[List[int]]:
    out = []
    for row in A:
        den = 1
        for x in row:
            den = den * x.denominator // _gcd(den, x.denominator)
        out.append([int(x * den) for x in row])
    return out


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def bareiss_rank(A: Matrix) -> int:
    """Rank by fraction-free (Bareiss) elimination on the denominator-cleared rows."""
    M = _integral_rows(A)
    if not M or not M[0]:
        return 0
    m, n = len(M), len(M[0])
    rank = 0
    prev = 1
    for col in range(n):
        piv = next((r for r in range(rank, m) if M[r][col]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        p = M[rank][col]
        for r in range(rank + 1, m):
            for c in range(col + 1, n):
                M[r][c] = (p * M[r][c] - M[r][col] * M[rank][c]) // prev
            M[r][col] = 0
        prev = p
        rank += 1
        if rank == m:
            break
    return rank


def det(A: Matrix) -> Fraction:
    """Determinant via Bareiss on the denominator-cleared matrix."""
    n = len(A)
    if n == 0:
        return Fraction(1)
    dens = []
    M = []
    for row in A:
        den = 1
        for x in row:
            den = den * x.denominator // _gcd(den, x.denominator)
        dens.append(den)
        M.append([int(x * den) for x in row])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if M[r][k]), None)
            if swap is None:
                return Fraction(0)
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    total_den = 1
    for d in dens:
        total_den *= d
    return Fraction(sign * M[n - 1][n - 1], total_den)


def rref(A: Matrix) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form and pivot columns."""
    R = [list(row) for row in A]
    if not R:
        return R, []
    m, n = len(R), len(R[0])
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if R[i][c]), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(m):
            if i != r and R[i][c]:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return R, pivots


def rank(A: Matrix) -> int:
    return bareiss_rank(A)


def nullspace(A: Matrix, ncols: int = None) -> List[List[Fraction]]:
    """Basis of {v : A v = 0}; ``ncols`` is needed when A has no rows."""
    if not A:
        n = ncols or 0
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    n = len(A[0])
    R, pivots = rref(A)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def row_basis(vectors: Sequence[Sequence[Fraction]], k: int) -> List[List[Fraction]]:
    """Independent rows (in rref) spanning the same space as ``vectors``."""
    vecs = [list(map(Fraction, v)) for v in vectors]
    if not vecs:
        return []
    R, pivots = rref(vecs)
    return [R[i] for i in range(len(pivots))]


def inverse(A: Matrix) -> Matrix:
    n = len(A)
    aug = [list(row) + ident for row, ident in zip(A, identity(n))]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in R]
