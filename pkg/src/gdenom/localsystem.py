"""First-order systems z Y' = A(z) Y at a regular singular point z = 0.

Covers the companion system of an operator, shearing to a nilpotent residue,
the Frobenius solution matrix U(z) z^N, the decomposition of a power series
solution on that basis, and the per-prime Christol-Dwork valuation check of
the coefficients U_n.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .diffop import DiffOp, IrregularPointError, is_regular_at_zero
from .linalg import Matrix
from .numkernel import (
    Poly,
    as_rational,
    floor_log,
    format_rational,
    poly_gcd,
    rational_roots,
    vp,
)
from .ratfunc import (
    RatFunc,
    RMatrix,
    gauge,
    rm_at_zero,
    rm_const,
    rm_identity,
    rm_mul,
)


class ShearingError(ValueError):
    pass


class BadPrimeError(ValueError):
    pass


class DecompositionError(ValueError):
    pass


@dataclass
class LocalSystem:
    A: RMatrix

    def __post_init__(self):
        for row in self.A:
            for a in row:
                if not a.holomorphic_at_zero():
                    raise IrregularPointError(f"system entry {a} has a pole at 0")

    @property
    def size(self) -> int:
        return len(self.A)

    def residue(self) -> Matrix:
        return rm_at_zero(self.A)

    def common_denominator(self) -> Poly:
        d = Poly.const(1)
        for row in self.A:
            for a in row:
                d = d * a.den.exact_div(poly_gcd(d, a.den))
        return d.monic()

    def series(self, n_max: int) -> list[Matrix]:
        """Taylor coefficients A_0..A_{n_max} as constant matrices."""
        cols = [[a.series(n_max) for a in row] for row in self.A]
        return [[[cols[i][j][k] for j in range(self.size)] for i in range(self.size)] for k in range(n_max + 1)]

    def to_json(self) -> dict:
        return {"size": self.size, "A": [[a.to_json() for a in row] for row in self.A]}

    @classmethod
    def from_json(cls, data: dict) -> LocalSystem:
        return cls([[RatFunc.from_json(a) for a in row] for row in data["A"]])


def companion(L: DiffOp) -> LocalSystem:
    """The system for Y = (y, z y', ..., z^(mu-1) y^(mu-1))."""
    if not is_regular_at_zero(L):
        raise IrregularPointError("0 is an irregular singular point of the operator")
    mu = L.order
    var = L.var
    Bmu = L.leading
    A = [[RatFunc(0, var=var) for _ in range(mu)] for _ in range(mu)]
    for k in range(mu - 1):
        A[k][k] = RatFunc(k, var=var)
        A[k][k + 1] = RatFunc(1, var=var)
    for i in range(mu):
        a_i = RatFunc(L.coeff(i).shift_degree(mu - i), Bmu)
        A[mu - 1][i] = -a_i
    A[mu - 1][mu - 1] = A[mu - 1][mu - 1] + (mu - 1)
    return LocalSystem(A)


def integer_eigenvalues(M: Matrix) -> list[int]:
    """Eigenvalues of a rational matrix, which must all be integers."""
    cp = linalg.charpoly(M)
    roots, complete = rational_roots(cp)
    if not complete:
        raise ShearingError(f"residue matrix has non-rational eigenvalues (characteristic polynomial {cp})")
    for r in roots:
        if r.denominator != 1:
            raise ShearingError(f"residue matrix has non-integer eigenvalue {format_rational(r)}")
    return [int(r) for r in roots]


@dataclass
class ShearingResult:
    H: RMatrix
    H_inv: RMatrix
    A_sheared: LocalSystem
    b0: int
    steps: int

    def to_json(self) -> dict:
        return {
            "H": [[a.to_json() for a in row] for row in self.H],
            "H_inv": [[a.to_json() for a in row] for row in self.H_inv],
            "A_sheared": self.A_sheared.to_json(),
            "b0": self.b0,
            "steps": self.steps,
        }


def _laurent_width(M: RMatrix) -> int:
    b0 = 0
    for row in M:
        for a in row:
            if a:
                ts = a.laurent_terms()
                b0 = max(b0, abs(min(ts)), max(ts))
    return b0


def shear(S: LocalSystem, max_steps: int = 10_000) -> ShearingResult:
    """Laurent-polynomial gauge change making the residue nilpotent.

    Each step splits Q^mu into the generalized eigenspace of the largest
    eigenvalue and a complement, then multiplies the first block by 1/z,
    which lowers that eigenvalue by one. Once a single eigenvalue c remains,
    conjugating by z^(-c) I moves it to 0.
    """
    mu = S.size
    var = S.A[0][0].var
    A = S.A
    H = rm_identity(mu, var)
    H_inv = rm_identity(mu, var)
    steps = 0
    while True:
        A0 = rm_at_zero(A)
        eig = integer_eigenvalues(A0)
        if len(set(eig)) == 1:
            c = eig[0]
            if c:
                step = [[RatFunc.laurent({-c: Fraction(int(i == j))}, var) for j in range(mu)] for i in range(mu)]
                step_inv = [[RatFunc.laurent({c: Fraction(int(i == j))}, var) for j in range(mu)] for i in range(mu)]
                A = gauge(A, step, step_inv)
                H = rm_mul(step, H)
                H_inv = rm_mul(H_inv, step_inv)
                steps += 1
            break
        if steps >= max_steps:
            raise ShearingError("shearing did not terminate")
        lam = max(eig)
        mult = eig.count(lam)
        shifted = [[A0[i][j] - (lam if i == j else 0) for j in range(mu)] for i in range(mu)]
        V1 = linalg.nullspace(linalg.matpow(shifted, mu))
        rest = Poly.from_roots([e for e in eig if e != lam], "x")
        V2 = linalg.nullspace(linalg.poly_at_matrix(rest, A0))
        if len(V1) != mult or len(V1) + len(V2) != mu:
            raise ShearingError("generalized eigenspaces do not span the space")
        basis = linalg.transpose(V1 + V2)  # columns
        basis_inv = linalg.inverse(basis)
        step = [[RatFunc(0, var=var) for _ in range(mu)] for _ in range(mu)]
        step_inv = [[RatFunc(0, var=var) for _ in range(mu)] for _ in range(mu)]
        for i in range(mu):
            e = -1 if i < mult else 0
            step[i][i] = RatFunc.laurent({e: Fraction(1)}, var)
            step_inv[i][i] = RatFunc.laurent({-e: Fraction(1)}, var)
        G = rm_mul(step, rm_const(basis_inv, var))
        G_inv = rm_mul(rm_const(basis, var), step_inv)
        A = gauge(A, G, G_inv)
        H = rm_mul(G, H)
        H_inv = rm_mul(H_inv, G_inv)
        steps += 1
    sheared = LocalSystem(A)
    N = sheared.residue()
    if not linalg.is_zero(linalg.matpow(N, mu)):
        raise ShearingError("sheared residue is not nilpotent")
    return ShearingResult(H, H_inv, sheared, _laurent_width(H_inv), steps)


@dataclass
class FrobeniusSeries:
    N: Matrix
    U: list[Matrix]
    A_coeffs: list[Matrix] = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.N)

    @property
    def n_max(self) -> int:
        return len(self.U) - 1

    def to_json(self) -> dict:
        fm = lambda M: [[format_rational(x) for x in row] for row in M]
        return {"N": fm(self.N), "U": [fm(M) for M in self.U]}


def _sylvester(rhs: Matrix, N: Matrix, n: int) -> Matrix:
    """X with n X + X N - N X = rhs, by the nilpotent-commutator iteration."""
    X = linalg.matscale(rhs, Fraction(1, n))
    for _ in range(2 * len(N) + 1):
        comm = linalg.matsub(linalg.matmul(X, N), linalg.matmul(N, X))
        nxt = linalg.matscale(linalg.matsub(rhs, comm), Fraction(1, n))
        if nxt == X:
            return X
        X = nxt
    raise ArithmeticError("Sylvester iteration did not stabilize; residue is not nilpotent")


def frobenius_series(S: LocalSystem, n_max: int) -> FrobeniusSeries:
    """U_0..U_{n_max} with U(z) z^N a solution matrix, U_0 = I, N = A(0) nilpotent.

    Uses the polynomial form d(z)(z U' + U N) = P(z) U with d the common
    denominator of A and P = d A, which gives a recurrence of length deg d + 1
    instead of a full convolution.
    """
    mu = S.size
    N = S.residue()
    if not linalg.is_zero(linalg.matpow(N, mu)):
        raise ValueError("frobenius_series needs a nilpotent residue; shear the system first")
    d = S.common_denominator()
    if d[0] == 0:
        raise IrregularPointError("system has a pole at 0")
    P = [[(a * RatFunc(d)).num for a in row] for row in S.A]
    deg = max([d.degree] + [p.degree for row in P for p in row])
    Pk = [[[P[i][j][k] for j in range(mu)] for i in range(mu)] for k in range(deg + 1)]
    dk = [d[k] for k in range(deg + 1)]
    d0 = dk[0]
    U = [linalg.identity(mu)]
    for n in range(1, n_max + 1):
        rhs = linalg.zeros(mu)
        for k in range(1, min(n, deg) + 1):
            prev = U[n - k]
            term = linalg.matmul(Pk[k], prev)
            if dk[k]:
                lhs = linalg.matadd(linalg.matscale(prev, n - k), linalg.matmul(prev, N))
                term = linalg.matsub(term, linalg.matscale(lhs, dk[k]))
            rhs = linalg.matadd(rhs, term)
        U.append(_sylvester(linalg.matscale(rhs, 1 / d0), N, n))
    return FrobeniusSeries(N, U, S.series(n_max))


def sylvester_defect(fs: FrobeniusSeries, n: int) -> Matrix:
    """n U_n + U_n N - N U_n - sum_{k=1..n} A_k U_{n-k}; zero for a correct series."""
    N, U, A = fs.N, fs.U, fs.A_coeffs
    out = linalg.matadd(linalg.matscale(U[n], n), linalg.matsub(linalg.matmul(U[n], N), linalg.matmul(N, U[n])))
    for k in range(1, n + 1):
        out = linalg.matsub(out, linalg.matmul(A[k], U[n - k]))
    return out


def _nilpotent_exp_terms(N: Matrix) -> list[Matrix]:
    """N^r / r! for r = 0, 1, ... while nonzero; z^N = sum_r (N^r / r!) log(z)^r."""
    out = [linalg.identity(len(N))]
    r = 1
    while True:
        nxt = linalg.matscale(linalg.matmul(out[-1], N), Fraction(1, r))
        if linalg.is_zero(nxt):
            return out
        out.append(nxt)
        r += 1


def _first_row_h(sh: ShearingResult) -> list[dict[int, Fraction]]:
    return [a.laurent_terms() if a else {} for a in sh.H_inv[0]]


def decompose(L: DiffOp, coeffs: Sequence, sh: ShearingResult, fs: FrobeniusSeries) -> list[Fraction]:
    """Coordinates l_1..l_mu of a power series solution on the first row of H^{-1} U z^N.

    Every (z^m, log^r) coefficient of that row is matched against the series,
    the resulting linear system is solved exactly, and the closed-form
    coefficient sum using only constant terms of z^N is checked to reproduce
    every supplied coefficient.
    """
    mu = fs.size
    if L.order != mu:
        raise ValueError(f"operator order {L.order} does not match system size {mu}")
    a = [as_rational(x) for x in coeffs]
    b0 = sh.b0
    n_last = len(a) - 1
    if fs.n_max < n_last + b0:
        raise DecompositionError(f"insufficient Frobenius terms: need U up to {n_last + b0}, have {fs.n_max}")
    if len(a) < 2 * mu + b0:
        raise DecompositionError(f"insufficient coefficients: need at least {2 * mu + b0}, got {len(a)}")
    h = _first_row_h(sh)
    U = fs.U
    logs = _nilpotent_exp_terms(fs.N)

    def base_coeff(m: int) -> list[Fraction]:
        # coefficient of z^m in sum_j h_{1j}(z) U_{jk}(z), indexed by k
        out = [Fraction(0)] * mu
        for j in range(mu):
            for t, c in h[j].items():
                n = m - t
                if 0 <= n <= fs.n_max:
                    Un = U[n][j]
                    for k in range(mu):
                        if Un[k]:
                            out[k] += c * Un[k]
        return out

    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for m in range(-b0, n_last + 1):
        w = base_coeff(m)
        target = a[m] if m >= 0 else Fraction(0)
        for r, Wr in enumerate(logs):
            row = [sum((w[k] * Wr[k][i] for k in range(mu)), Fraction(0)) for i in range(mu)]
            rows.append(row)
            rhs.append(target if r == 0 else Fraction(0))
    ell, rk = linalg.solve(rows, rhs)
    if ell is None:
        raise DecompositionError("input is not a solution of L")
    if rk < mu:
        raise DecompositionError("insufficient coefficients: the coordinates are not determined")
    rebuilt = reconstruct(ell, sh, fs, n_last)
    bad = [n for n in range(len(a)) if rebuilt[n] != a[n]]
    if bad:
        raise DecompositionError(f"reconstruction differs from the input at index {bad[0]}")
    return ell


def reconstruct(ell: Sequence[Fraction], sh: ShearingResult, fs: FrobeniusSeries, n_last: int) -> list[Fraction]:
    """a_n = sum_{i,j,k} sum_t l_i P_{k,i}(0) h_{1,j,t} u_{j,k,n-t} for n = 0..n_last."""
    mu = fs.size
    h = _first_row_h(sh)
    P0 = _nilpotent_exp_terms(fs.N)[0]  # constant term of z^N in log(z)
    U = fs.U
    b0 = sh.b0
    lk = [sum((ell[i] * P0[k][i] for i in range(mu)), Fraction(0)) for k in range(mu)]
    out = []
    for n in range(n_last + 1):
        acc = Fraction(0)
        for j in range(mu):
            for t, c in h[j].items():
                if -b0 <= t <= min(b0, n):
                    Un = U[n - t][j]
                    for k in range(mu):
                        if Un[k] and lk[k]:
                            acc += lk[k] * c * Un[k]
        out.append(acc)
    return out


def cd_exponent(mu: int, p: int) -> tuple[int, int]:
    """(beta_mu, mu - 1 + v_p((mu-1)!) + beta_mu)."""
    prod = 1
    for j in range(1, mu + 1):
        prod *= math.comb(mu, j)
    beta = min(mu - 1, vp(prod, p))
    fact = math.factorial(mu - 1)
    return beta, mu - 1 + vp(fact, p) + beta


@dataclass
class CDBoundReport:
    p: int
    mu: int
    beta: int
    exponent: int
    n_max: int
    violations: list[tuple[int, int, int, int]]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"p": self.p, "exponent": self.exponent, "violations": [list(v) for v in self.violations]}


def check_prime_precondition(fs: FrobeniusSeries, p: int, n_max: int) -> None:
    for k, Ak in enumerate(fs.A_coeffs[: n_max + 1]):
        for i, row in enumerate(Ak):
            for j, x in enumerate(row):
                if x and x.denominator % p == 0:
                    raise BadPrimeError(
                        f"bad prime {p} for this system: coefficient z^{k} of entry ({i},{j}) is {format_rational(x)}"
                    )


def cd_bound_check(fs: FrobeniusSeries, p: int, n_max: int | None = None) -> CDBoundReport:
    """Check v_p(u_{i,j,n}) >= -e * floor(log_p n) for every entry of U_1..U_{n_max}."""
    n_max = fs.n_max if n_max is None else min(n_max, fs.n_max)
    check_prime_precondition(fs, p, n_max)
    mu = fs.size
    beta, e = cd_exponent(mu, p)
    violations = []
    for n in range(1, n_max + 1):
        bound = -e * floor_log(n, p)
        for i, row in enumerate(fs.U[n]):
            for j, x in enumerate(row):
                if x:
                    v = vp(x, p)
                    if v < bound:
                        violations.append((i, j, n, v))
    return CDBoundReport(p, mu, beta, e, n_max, violations)
