"""p-curvature of the first-order system of an operator, reduced modulo a prime.

For X = (y, y', ..., y^(mu-1)) the system X' = G X has G = M_1 / d with
d = B_mu. Writing G_k = M_k / d^k, the recursion G_{k+1} = G_k' + G_k G becomes

    M_{k+1} = d M_k' - k d' M_k + M_k M_1

over F_p[z]; G_p is the p-curvature (up to sign). It is nilpotent exactly
when its characteristic polynomial is X^mu, which we test on the numerator
matrix M_p with the division-free Berkowitz algorithm.

Polynomials over F_p are lists of ints in [0, p), index = degree, no
trailing zeros.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import TypeVar

from .diffop import DiffOp
from .localsystem import BadPrimeError
from .numkernel import PrimeWindow

T = TypeVar("T")
FpPoly = list[int]


# arithmetic in F_p[z]

def _trim(a: FpPoly) -> FpPoly:
    while a and a[-1] == 0:
        a.pop()
    return a


def fp_add(a: FpPoly, b: FpPoly, p: int) -> FpPoly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return _trim(out)


def fp_neg(a: FpPoly, p: int) -> FpPoly:
    return [(-c) % p for c in a]


def fp_sub(a: FpPoly, b: FpPoly, p: int) -> FpPoly:
    return fp_add(a, fp_neg(b, p), p)


def fp_scale(a: FpPoly, c: int, p: int) -> FpPoly:
    c %= p
    if not c:
        return []
    return _trim([(c * x) % p for x in a])


def fp_mul(a: FpPoly, b: FpPoly, p: int) -> FpPoly:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([c % p for c in out])


def fp_deriv(a: FpPoly, p: int) -> FpPoly:
    return _trim([(k * a[k]) % p for k in range(1, len(a))])


def fp_from_ints(cs: Sequence[int], p: int) -> FpPoly:
    return _trim([c % p for c in cs])


def fp_pow(a: FpPoly, k: int, p: int) -> FpPoly:
    out: FpPoly = [1]
    for _ in range(k):
        out = fp_mul(out, a, p)
    return out


def fp_frobenius(a: FpPoly, p: int) -> FpPoly:
    """a^p = a(z^p) over F_p."""
    out = [0] * ((len(a) - 1) * p + 1) if a else []
    for i, c in enumerate(a):
        out[i * p] = c
    return out


def deg(a: FpPoly) -> int:
    return len(a) - 1


# characteristic polynomial over a commutative ring

def berkowitz(
    A: Sequence[Sequence[T]],
    add: Callable[[T, T], T],
    mul: Callable[[T, T], T],
    neg: Callable[[T], T],
    zero: T,
    one: T,
) -> list[T]:
    """Coefficients [1, c_1, ..., c_n] of det(x I - A), highest degree first.

    Division-free, so it works over F_p[z] without leaving the ring.
    """
    n = len(A)
    if n == 0:
        return [one]
    C = [one, neg(A[0][0])]
    for r in range(1, n):
        M = [row[:r] for row in A[:r]]
        R = A[r][:r]
        S = [A[i][r] for i in range(r)]
        a = A[r][r]
        t = [one, neg(a)]
        vec = S
        for _ in range(r):
            dot = zero
            for x, y in zip(R, vec):
                dot = add(dot, mul(x, y))
            t.append(neg(dot))
            vec = [_dot_row(M[i], vec, add, mul, zero) for i in range(r)]
        # new coefficients: lower-triangular Toeplitz (r+2) x (r+1) with first column t, times C
        newC = []
        for i in range(r + 2):
            acc = zero
            for j in range(r + 1):
                if 0 <= i - j < len(t):
                    acc = add(acc, mul(t[i - j], C[j]))
            newC.append(acc)
        C = newC
    return C


def _dot_row(row, vec, add, mul, zero):
    acc = zero
    for x, y in zip(row, vec):
        acc = add(acc, mul(x, y))
    return acc


def fp_charpoly(M: Sequence[Sequence[FpPoly]], p: int) -> list[FpPoly]:
    return berkowitz(
        M,
        lambda a, b: fp_add(a, b, p),
        lambda a, b: fp_mul(a, b, p),
        lambda a: fp_neg(a, p),
        [],
        [1],
    )


# systems

@dataclass
class ModPSystem:
    p: int
    numerators: list[list[FpPoly]]
    d: FpPoly

    @property
    def size(self) -> int:
        return len(self.numerators)


def reduce_system(L: DiffOp, p: int) -> ModPSystem:
    """Companion system of L modulo p, with common denominator d = B_mu mod p.

    L is first scaled to primitive integer coefficients.
    """
    P = L.normalized()
    mu = P.order
    coeffs = [c.integer_coeffs() for c in P.coeffs]
    d = fp_from_ints(coeffs[mu], p)
    if not d:
        raise BadPrimeError(f"bad prime {p}: leading coefficient {P.leading} vanishes mod {p}")
    M = [[[] for _ in range(mu)] for _ in range(mu)]
    for k in range(mu - 1):
        M[k][k + 1] = list(d)
    for i in range(mu):
        M[mu - 1][i] = fp_neg(fp_from_ints(coeffs[i], p), p)
    return ModPSystem(p, M, d)


@dataclass
class PCurvature:
    p: int
    numerators: list[list[FpPoly]]
    denominator: FpPoly  # d^p


def _degree_step(S: ModPSystem) -> int:
    dm1 = max((deg(x) for row in S.numerators for x in row), default=-1)
    return max(deg(S.d) - 1, dm1, 0)


def p_curvature(S: ModPSystem) -> PCurvature:
    p = S.p
    mu = S.size
    d = S.d
    dd = fp_deriv(d, p)
    M1 = S.numerators
    M = [[list(x) for x in row] for row in M1]
    step = _degree_step(S)
    top = max((deg(x) for row in M1 for x in row), default=-1)
    for k in range(1, p):
        nxt = []
        for i in range(mu):
            row = []
            for j in range(mu):
                acc = fp_mul(d, fp_deriv(M[i][j], p), p)
                acc = fp_sub(acc, fp_scale(fp_mul(dd, M[i][j], p), k, p), p)
                for t in range(mu):
                    if M[i][t] and M1[t][j]:
                        acc = fp_add(acc, fp_mul(M[i][t], M1[t][j], p), p)
                row.append(acc)
            nxt.append(row)
        M = nxt
        top_k = max((deg(x) for row in M for x in row), default=-1)
        # numerator degrees grow at most linearly in k
        assert top_k <= top + k * step, (k, top_k, top, step)
    return PCurvature(p, M, fp_frobenius(d, p))


@dataclass
class PCurvatureReport:
    p: int
    status: str  # nilpotent | non-nilpotent | skipped
    charpoly_nonzero_terms: int | None = None
    reason: str | None = None

    @property
    def nilpotent(self) -> bool | None:
        if self.status == "skipped":
            return None
        return self.status == "nilpotent"

    def to_json(self) -> dict:
        out = {"p": self.p, "status": self.status}
        if self.charpoly_nonzero_terms is not None:
            out["charpoly_nonzero_terms"] = self.charpoly_nonzero_terms
        if self.reason is not None:
            out["reason"] = self.reason
        return out


def charpoly_of_pcurvature(S: ModPSystem) -> list[FpPoly]:
    return fp_charpoly(p_curvature(S).numerators, S.p)


def _verdict(L: DiffOp, p: int) -> PCurvatureReport:
    try:
        S = reduce_system(L, p)
    except BadPrimeError as exc:
        return PCurvatureReport(p, "skipped", reason=str(exc))
    cp = charpoly_of_pcurvature(S)
    nonzero = sum(1 for c in cp[1:] if c)
    return PCurvatureReport(p, "nilpotent" if nonzero == 0 else "non-nilpotent", nonzero)


def nilpotence_report(L: DiffOp, window: PrimeWindow, jobs: int = 1) -> list[PCurvatureReport]:
    """One verdict per prime in the window, ordered by p; bad primes are skipped."""
    primes = window.primes()
    if jobs > 1 and len(primes) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(_verdict, [L] * len(primes), primes))
    return [_verdict(L, p) for p in primes]


def gauge_transform(S: ModPSystem, P: list[list[FpPoly]]) -> ModPSystem:
    """System for Y where X = P Y, P a polynomial matrix invertible over F_p(z).

    Y' = P^{-1}(G P - P') Y, i.e. numerators adj(P)(M P - d P') over d det(P).
    """
    p = S.p
    mu = S.size
    det, adj = _det_adj(P, p)
    if not det:
        raise ValueError("gauge matrix is singular mod p")
    MP = _fp_matmul(S.numerators, P, p)
    dP = [[fp_mul(S.d, fp_deriv(x, p), p) for x in row] for row in P]
    inner = [[fp_sub(MP[i][j], dP[i][j], p) for j in range(mu)] for i in range(mu)]
    return ModPSystem(p, _fp_matmul(adj, inner, p), fp_mul(S.d, det, p))


def _fp_matmul(A, B, p):
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc: FpPoly = []
            for t in range(k):
                if A[i][t] and B[t][j]:
                    acc = fp_add(acc, fp_mul(A[i][t], B[t][j], p), p)
            row.append(acc)
        out.append(row)
    return out


def _det(A, p) -> FpPoly:
    cp = fp_charpoly(A, p)
    n = len(A)
    # det(A) = (-1)^n * charpoly(0)
    return cp[n] if n % 2 == 0 else fp_neg(cp[n], p)


def _det_adj(P, p):
    n = len(P)
    det = _det(P, p)
    adj = [[[] for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1 :] for k, row in enumerate(P) if k != i]
            c = _det(minor, p) if minor else [1]
            adj[j][i] = c if (i + j) % 2 == 0 else fp_neg(c, p)
    return det, adj
