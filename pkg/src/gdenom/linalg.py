"""Small exact linear algebra over Q, backed by sympy's DomainMatrix.

Matrices are plain lists of lists of Fraction at this module's boundary.
"""

from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .numkernel import Poly

Matrix = list[list[Fraction]]


def _dm(M: Sequence[Sequence]) -> DomainMatrix:
    rows = len(M)
    cols = len(M[0]) if rows else 0
    return DomainMatrix([[QQ(int(x.numerator), int(x.denominator)) for x in row] for row in M], (rows, cols), QQ)


def _frac(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def _back(D: DomainMatrix) -> Matrix:
    return [[_frac(x) for x in row] for row in D.to_list()]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(r: int, c: int | None = None) -> Matrix:
    return [[Fraction(0)] * (r if c is None else c) for _ in range(r)]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    n, k, m = len(A), len(B), len(B[0]) if B else 0
    out = zeros(n, m)
    for i in range(n):
        Ai = A[i]
        row = out[i]
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                for j in range(m):
                    if Bt[j]:
                        row[j] += a * Bt[j]
    return out


def matadd(A: Matrix, B: Matrix) -> Matrix:
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def matsub(A: Matrix, B: Matrix) -> Matrix:
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def matscale(A: Matrix, c) -> Matrix:
    return [[c * a for a in row] for row in A]


def is_zero(A: Matrix) -> bool:
    return all(not x for row in A for x in row)


def matpow(A: Matrix, k: int) -> Matrix:
    out = identity(len(A))
    for _ in range(k):
        out = matmul(out, A)
    return out


def charpoly(A: Matrix, var: str = "x") -> Poly:
    """det(x I - A)."""
    cs = _dm(A).charpoly()
    return Poly([_frac(c) for c in reversed(cs)], var)


def poly_at_matrix(p: Poly, A: Matrix) -> Matrix:
    n = len(A)
    out = zeros(n)
    for c in reversed(p.coeffs):
        out = matmul(out, A)
        for i in range(n):
            out[i][i] += c
    return out


def nullspace(A: Matrix) -> list[list[Fraction]]:
    """Basis of {x : A x = 0}, as a list of vectors."""
    if not A:
        return []
    return _back(_dm(A).nullspace()) if _dm(A).rank() < len(A[0]) else []


def inverse(A: Matrix) -> Matrix:
    return _back(_dm(A).inv())


def rank(A: Matrix) -> int:
    return _dm(A).rank() if A else 0


def solve(A: Matrix, b: Sequence[Fraction]) -> tuple[list[Fraction] | None, int]:
    """A solution of A x = b (free variables set to 0) and rank(A); None if inconsistent."""
    ncols = len(A[0])
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, pivots = _dm(aug).rref()
    R = _back(R)
    if ncols in pivots:
        return None, len(pivots) - 1
    x = [Fraction(0)] * ncols
    for r, c in enumerate(pivots):
        x[c] = R[r][ncols]
    return x, len(pivots)


def transpose(A: Matrix) -> Matrix:
    return [list(col) for col in zip(*A)]
