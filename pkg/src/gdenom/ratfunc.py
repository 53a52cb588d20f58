"""Rational functions over Q in one variable, and matrices of them."""

from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction

from .numkernel import Poly, as_rational, poly_gcd


class RatFunc:
    """num/den with gcd(num, den) = 1 and den monic."""

    __slots__ = ("den", "num")

    def __init__(self, num, den=None, var: str = "z"):
        num = num if isinstance(num, Poly) else Poly.const(as_rational(num), var)
        den = Poly.const(1, num.var) if den is None else (den if isinstance(den, Poly) else Poly.const(as_rational(den), num.var))
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = num, Poly.const(1, num.var)
            return
        if den.degree > 0:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num.exact_div(g), den.exact_div(g)
        lc = den.lc
        self.num = num * (1 / lc)
        self.den = den * (1 / lc)

    @classmethod
    def laurent(cls, terms: dict[int, Fraction], var: str = "z") -> RatFunc:
        """sum_t c_t z^t with possibly negative t."""
        terms = {t: c for t, c in terms.items() if c}
        if not terms:
            return cls(Poly.zero(var))
        low = min(0, min(terms))
        num = Poly([terms.get(t + low, 0) for t in range(max(terms) - low + 1)], var)
        return cls(num, Poly.monomial(-low, 1, var))

    @property
    def var(self) -> str:
        return self.num.var

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatFunc):
            other = RatFunc(other, var=self.var)
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        if self.den.degree == 0:
            return f"({self.num})"
        return f"({self.num})/({self.den})"

    def _co(self, other) -> RatFunc:
        return other if isinstance(other, RatFunc) else RatFunc(other, var=self.var)

    def __add__(self, other) -> RatFunc:
        o = self._co(other)
        if o.is_zero():
            return self
        if self.is_zero():
            return o
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> RatFunc:
        r = RatFunc.__new__(RatFunc)
        r.num, r.den = -self.num, self.den
        return r

    def __sub__(self, other) -> RatFunc:
        return self + (-self._co(other))

    def __rsub__(self, other) -> RatFunc:
        return self._co(other) - self

    def __mul__(self, other) -> RatFunc:
        o = self._co(other)
        if self.is_zero() or o.is_zero():
            return RatFunc(Poly.zero(self.var))
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> RatFunc:
        o = self._co(other)
        if o.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def derivative(self) -> RatFunc:
        return RatFunc(self.num.derivative() * self.den - self.num * self.den.derivative(), self.den * self.den)

    def times_z(self, k: int = 1) -> RatFunc:
        if k >= 0:
            return RatFunc(self.num.shift_degree(k), self.den)
        return RatFunc(self.num, self.den.shift_degree(-k))

    def holomorphic_at_zero(self) -> bool:
        return self.den[0] != 0

    def at_zero(self) -> Fraction:
        if not self.holomorphic_at_zero():
            raise ZeroDivisionError(f"{self} has a pole at 0")
        return self.num[0] / self.den[0]

    def series(self, n: int) -> list[Fraction]:
        """Taylor coefficients 0..n at z = 0."""
        d0 = self.den[0]
        if d0 == 0:
            raise ZeroDivisionError(f"{self} has a pole at 0")
        inv = 1 / d0
        dc = self.den.coeffs
        out: list[Fraction] = []
        for k in range(n + 1):
            acc = self.num[k]
            for j in range(1, min(k, len(dc) - 1) + 1):
                acc -= dc[j] * out[k - j]
            out.append(acc * inv)
        return out

    def laurent_terms(self) -> dict[int, Fraction]:
        """Exponent -> coefficient, for a Laurent polynomial (den a power of z)."""
        k = self.den.degree
        if any(self.den.coeffs[:-1]) or self.den.lc != 1:
            raise ValueError(f"{self} is not a Laurent polynomial")
        return {i - k: c for i, c in enumerate(self.num.coeffs) if c}

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data: dict, var: str = "z") -> RatFunc:
        return cls(Poly.from_json(data["num"], var), Poly.from_json(data["den"], var))


RMatrix = list[list[RatFunc]]


def rm_identity(n: int, var: str = "z") -> RMatrix:
    return [[RatFunc(int(i == j), var=var) for j in range(n)] for i in range(n)]


def rm_const(M: Sequence[Sequence], var: str = "z") -> RMatrix:
    return [[RatFunc(x, var=var) for x in row] for row in M]


def rm_mul(A: RMatrix, B: RMatrix) -> RMatrix:
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = RatFunc(0, var=A[0][0].var)
            for t in range(k):
                if A[i][t] and B[t][j]:
                    acc = acc + A[i][t] * B[t][j]
            row.append(acc)
        out.append(row)
    return out


def rm_add(A: RMatrix, B: RMatrix) -> RMatrix:
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def rm_sub(A: RMatrix, B: RMatrix) -> RMatrix:
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def rm_derivative(A: RMatrix) -> RMatrix:
    return [[a.derivative() for a in row] for row in A]


def rm_times_z(A: RMatrix) -> RMatrix:
    return [[a.times_z(1) for a in row] for row in A]


def rm_at_zero(A: RMatrix) -> list[list[Fraction]]:
    return [[a.at_zero() for a in row] for row in A]


def rm_equal(A: RMatrix, B: RMatrix) -> bool:
    return all(a == b for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def gauge(A: RMatrix, H: RMatrix, H_inv: RMatrix) -> RMatrix:
    """z H' H^{-1} + H A H^{-1}: the system satisfied by Z = H Y when z Y' = A Y."""
    return rm_add(rm_mul(rm_times_z(rm_derivative(H)), H_inv), rm_mul(rm_mul(H, A), H_inv))
