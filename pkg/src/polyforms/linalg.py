"""Dense exact linear algebra over Q.

Matrices are lists of rows of ``Fraction``.  Rank uses fraction-free
(Bareiss) elimination on an integer rescaling; reduced row echelon form and
the solvers work directly over ``Fraction``.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

Vector = list[Fraction]
Matrix = list[list[Fraction]]


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def zeros(m: int, n: int) -> Matrix:
    return [[Fraction(0)] * n for _ in range(m)]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def transpose(A: Matrix, ncols: int | None = None) -> Matrix:
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*A)]


def matmul(A: Matrix, B: Matrix, inner: int | None = None) -> Matrix:
    if not A:
        return []
    ncols = len(B[0]) if B else 0
    out = zeros(len(A), ncols)
    for i, row in enumerate(A):
        oi = out[i]
        for k, a in enumerate(row):
            if a:
                for j, b in enumerate(B[k]):
                    if b:
                        oi[j] += a * b
    return out


def matvec(A: Matrix, v: Sequence[Fraction]) -> Vector:
    return [sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in A]


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def is_zero_matrix(A: Matrix) -> bool:
    return all(not x for row in A for x in row)


def _integer_rows(A: Matrix) -> list[list[int]]:
    rows = []
    for row in A:
        den = lcm(*(x.denominator for x in row)) if row else 1
        rows.append([int(x * den) for x in row])
    return rows


def rank(A: Matrix) -> int:
    """Rank by fraction-free Gaussian elimination."""
    if not A or not A[0]:
        return 0
    M = _integer_rows(A)
    m, n = len(M), len(M[0])
    r = 0
    prev = 1
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        p = M[r][c]
        for i in range(r + 1, m):
            a = M[i][c]
            row_i, row_r = M[i], M[r]
            for j in range(c, n):
                row_i[j] = (p * row_i[j] - a * row_r[j]) // prev
        prev = p
        r += 1
    return r


def det(A: Matrix) -> Fraction:
    n = len(A)
    if n == 0:
        return Fraction(1)
    M = [list(row) for row in A]
    sign = 1
    out = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            sign = -sign
        p = M[c][c]
        out *= p
        for i in range(c + 1, n):
            f = M[i][c] / p
            if f:
                for j in range(c, n):
                    M[i][j] -= f * M[c][j]
    return out * sign


def rref(A: Matrix, ncols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    M = [list(row) for row in A]
    m = len(M)
    n = len(M[0]) if M else (ncols or 0)
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        p = M[r][c]
        M[r] = [x / p for x in M[r]]
        for i in range(m):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    return M[:r], pivots


def nullspace(A: Matrix, ncols: int | None = None) -> list[Vector]:
    """Basis of ``{x : A x = 0}``; ``ncols`` is needed when ``A`` has no rows."""
    n = len(A[0]) if A else (ncols or 0)
    R, pivots = rref(A, n)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, pc in zip(R, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def solve(A: Matrix, b: Sequence[Fraction], ncols: int | None = None) -> Vector | None:
    """One solution of ``A x = b`` or ``None`` if inconsistent."""
    n = len(A[0]) if A else (ncols or 0)
    aug = [list(row) + [Fraction(bi)] for row, bi in zip(A, b)]
    R, pivots = rref(aug, n + 1)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, pc in zip(R, pivots):
        x[pc] = row[n]
    return x


def independent_columns(A: Matrix, ncols: int | None = None) -> list[int]:
    """Indices of a maximal set of independent columns, greedily left to right."""
    return rref(A, ncols)[1]


def independent_vectors(vectors: Sequence[Sequence[Fraction]]) -> list[int]:
    """Indices of a greedy maximal independent subset of ``vectors``."""
    if not vectors:
        return []
    return independent_columns(transpose([list(v) for v in vectors]), len(vectors))


def inverse(A: Matrix) -> Matrix:
    n = len(A)
    aug = [list(row) + e for row, e in zip(A, identity(n))]
    R, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ValueError("matrix is singular")
    return [row[n:] for row in R]


def left_inverse(B: Matrix) -> Matrix:
    """``(B^T B)^{-1} B^T`` for a full column rank ``B`` (r x m, m <= r)."""
    m = len(B[0]) if B else 0
    if m == 0:
        return []
    Bt = transpose(B)
    return matmul(inverse(matmul(Bt, B)), Bt)
