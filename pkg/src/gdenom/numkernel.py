"""Exact scalars, dense univariate polynomials over Q, primes, D_n and p-adic valuations."""

from __future__ import annotations

import math
import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cache, lru_cache

from sympy.ntheory import divisors

Rational = Fraction

_RATIONAL_RE = re.compile(r"^\s*(-?\d+)(?:/(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; nothing else (no decimals, no exponents)."""
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ValueError(f"malformed rational {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(x: Fraction | int) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact scalars")
    return Fraction(int(x.numerator), int(x.denominator)) if hasattr(x, "numerator") else Fraction(x)


class Poly:
    """Dense univariate polynomial with Fraction coefficients, index = degree.

    Immutable. The variable name is a display tag only and does not take part
    in equality.
    """

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Iterable = (), var: str = "z"):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)
        self.var = var

    # constructors

    @classmethod
    def zero(cls, var: str = "z") -> Poly:
        return cls((), var)

    @classmethod
    def const(cls, c, var: str = "z") -> Poly:
        return cls((c,), var)

    @classmethod
    def monomial(cls, k: int, c=1, var: str = "z") -> Poly:
        return cls([0] * k + [c], var)

    @classmethod
    def x(cls, var: str = "z") -> Poly:
        return cls((0, 1), var)

    @classmethod
    def from_roots(cls, roots: Iterable, var: str = "z") -> Poly:
        p = cls.const(1, var)
        for r in roots:
            p = p * cls((-as_rational(r), 1), var)
        return p

    @classmethod
    def falling(cls, shift, k: int, var: str = "n") -> Poly:
        """(x+shift)(x+shift-1)...(x+shift-k+1)."""
        shift = as_rational(shift)
        return cls.from_roots([-(shift - t) for t in range(k)], var)

    # basic queries

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def ord(self) -> int | None:
        """Lowest degree with a nonzero coefficient; None for zero."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly.const(other).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({self}, {self.var!r})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                term = format_rational(c)
            else:
                mon = self.var if k == 1 else f"{self.var}^{k}"
                if c == 1:
                    term = mon
                elif c == -1:
                    term = "-" + mon
                else:
                    term = f"{format_rational(c)}*{mon}"
            parts.append(term)
        return " + ".join(parts).replace("+ -", "- ")

    # arithmetic

    def _coerce(self, other) -> Poly:
        if isinstance(other, Poly):
            return other
        return Poly.const(as_rational(other), self.var)

    def __add__(self, other) -> Poly:
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out, self.var)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly([-c for c in self.coeffs], self.var)

    def __sub__(self, other) -> Poly:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> Poly:
        return self._coerce(other) - self

    def __mul__(self, other) -> Poly:
        if not isinstance(other, Poly):
            c = as_rational(other)
            return Poly([c * a for a in self.coeffs], self.var)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly.zero(self.var)
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return Poly(out, self.var)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Poly:
        if k < 0:
            raise ValueError("negative power")
        out = Poly.const(1, self.var)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def divmod(self, other: Poly) -> tuple[Poly, Poly]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        inv = 1 / other.lc
        quo = [Fraction(0)] * max(len(rem) - db, 0)
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k] * inv
            if c:
                quo[k - db] = c
                for j, b in enumerate(other.coeffs):
                    rem[k - db + j] -= c * b
        return Poly(quo, self.var), Poly(rem[:db] if db > 0 else [], self.var)

    def __floordiv__(self, other: Poly) -> Poly:
        return self.divmod(other)[0]

    def __mod__(self, other: Poly) -> Poly:
        return self.divmod(other)[1]

    def exact_div(self, other: Poly) -> Poly:
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def __call__(self, x):
        acc = Fraction(0) if not isinstance(x, Poly) else Poly.zero(x.var)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> Poly:
        return Poly([k * c for k, c in enumerate(self.coeffs)][1:], self.var)

    def taylor_shift(self, a) -> Poly:
        """p(x + a)."""
        a = as_rational(a)
        cs = list(self.coeffs)
        n = len(cs)
        # repeated synthetic division
        for i in range(n):
            for k in range(n - 2, i - 1, -1):
                cs[k] += a * cs[k + 1]
        return Poly(cs, self.var)

    def compose_power(self, b: int) -> Poly:
        """p(x^b)."""
        out = [Fraction(0)] * (b * self.degree + 1 if self.coeffs else 0)
        for k, c in enumerate(self.coeffs):
            out[b * k] = c
        return Poly(out, self.var)

    def scale_var(self, c) -> Poly:
        """p(c*x)."""
        c = as_rational(c)
        return Poly([a * c**k for k, a in enumerate(self.coeffs)], self.var)

    def shift_degree(self, k: int) -> Poly:
        """Multiply by x^k (k may be negative if the low coefficients vanish)."""
        if k >= 0:
            return Poly([0] * k + list(self.coeffs), self.var)
        if self.coeffs and any(self.coeffs[:-k]):
            raise ArithmeticError(f"x^{-k} does not divide {self}")
        return Poly(self.coeffs[-k:], self.var)

    def monic(self) -> Poly:
        if self.is_zero():
            return self
        return self * (1 / self.lc)

    def with_var(self, var: str) -> Poly:
        return Poly(self.coeffs, var)

    # content

    def denominator_lcm(self) -> int:
        return lcm_denominators(self.coeffs)

    def content(self) -> Fraction:
        """Positive rational c such that self/c has coprime integer coefficients."""
        if self.is_zero():
            return Fraction(0)
        den = self.denominator_lcm()
        g = 0
        for c in self.coeffs:
            g = math.gcd(g, int(c * den))
        return Fraction(g, den)

    def primitive(self) -> Poly:
        """Integer coefficients with gcd 1 and positive leading coefficient."""
        if self.is_zero():
            return self
        p = self * (1 / self.content())
        return -p if p.lc < 0 else p

    def integer_coeffs(self) -> list[int]:
        for c in self.coeffs:
            if c.denominator != 1:
                raise ValueError("polynomial has non-integer coefficients")
        return [c.numerator for c in self.coeffs]

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str], var: str = "z") -> Poly:
        if not isinstance(data, list):
            raise ValueError("polynomial must be a JSON array of rational strings")
        return cls([parse_rational(str(s)) if not isinstance(s, int) else s for s in data], var)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over Q."""
    while b:
        a, b = b, a % b
    return a.monic()


# primes

@cache
def _sieve(bound: int) -> tuple[int, ...]:
    if bound < 2:
        return ()
    flags = bytearray([1]) * (bound + 1)
    flags[0] = flags[1] = 0
    for p in range(2, math.isqrt(bound) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(range(p * p, bound + 1, p)))
    return tuple(i for i, f in enumerate(flags) if f)


def primes_up_to(n: int) -> list[int]:
    # round the sieve bound up so nearby calls share the cache
    bound = max(64, 1 << max(n, 1).bit_length())
    ps = _sieve(bound)
    return [p for p in ps if p <= n]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in primes_up_to(math.isqrt(n)):
        if n % p == 0:
            return False
    return True


@dataclass(frozen=True)
class PrimeWindow:
    p_min: int
    p_max: int

    def __post_init__(self):
        if self.p_min < 2 or self.p_max < 2:
            raise ValueError("prime window bounds must be >= 2")
        if self.p_max < self.p_min:
            raise ValueError("empty prime window")

    def primes(self) -> list[int]:
        return [p for p in primes_up_to(self.p_max) if p >= self.p_min]


# D_n and valuations

def vp_int(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def vp(x, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    x = as_rational(x)
    if x == 0:
        raise ValueError("p-adic valuation of 0 is +infinity")
    return vp_int(x.numerator, p) - vp_int(x.denominator, p)


def floor_log(n: int, p: int) -> int:
    """Largest e with p^e <= n; 0 for n < 1. Equals v_p(D_n)."""
    e = 0
    q = p
    while q <= n:
        q *= p
        e += 1
    return e


def vp_Dn(n: int, p: int) -> int:
    return floor_log(n, p)


@lru_cache(maxsize=4096)
def Dn(n: int) -> int:
    """lcm(1, ..., n); D_0 = D_1 = 1."""
    if n < 0:
        raise ValueError("D_n needs n >= 0")
    out = 1
    for p in primes_up_to(n):
        out *= p ** floor_log(n, p)
    return out


def lcm_denominators(values: Iterable) -> int:
    out = 1
    for x in values:
        out = math.lcm(out, as_rational(x).denominator)
    return out


def rational_roots(f: Poly) -> tuple[list[Fraction], bool]:
    """Rational roots of f with multiplicity, plus whether they account for deg f.

    Roots are returned sorted ascending, each repeated by its multiplicity.
    """
    if f.is_zero():
        raise ValueError("rational_roots of the zero polynomial")
    g = f.primitive()
    roots: list[Fraction] = []
    k = g.ord()
    roots.extend([Fraction(0)] * k)
    g = g.shift_degree(-k)
    if g.degree >= 1:
        ints = g.integer_coeffs()
        for q in divisors(abs(ints[-1])):
            for pnum in divisors(abs(ints[0])):
                for cand in (Fraction(pnum, q), Fraction(-pnum, q)):
                    if math.gcd(pnum, q) != 1:
                        continue
                    lin = Poly((-cand, 1), g.var)
                    while g.degree >= 1:
                        quo, rem = g.divmod(lin)
                        if rem:
                            break
                        roots.append(cand)
                        g = quo
    roots.sort()
    return roots, len(roots) == f.degree
