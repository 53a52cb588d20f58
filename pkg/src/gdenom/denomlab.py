"""Denominator analytics for coefficient sequences.

Certificates are claims about a finite range n <= N only: that
D_{bn+b0}^s C^(n+1) a_n is an integer for each such n.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from sympy import factorint

from .numkernel import PrimeWindow, as_rational, floor_log, vp, vp_int

INFINITE = math.inf


@dataclass(frozen=True)
class Witness:
    n: int
    p: int
    deficit: int

    def to_json(self) -> dict:
        return {"n": self.n, "p": self.p, "deficit": self.deficit}


@dataclass(frozen=True)
class DenomCertificate:
    s: int
    b: int
    b0: int
    C: int
    N: int
    status: str
    witness: Witness | None = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        return {
            "s": self.s,
            "b": self.b,
            "b0": self.b0,
            "C": self.C,
            "N": self.N,
            "status": self.status,
            "witness": self.witness.to_json() if self.witness else None,
        }

    @classmethod
    def from_json(cls, data: dict) -> DenomCertificate:
        w = data.get("witness")
        return cls(
            int(data["s"]), int(data["b"]), int(data["b0"]), int(data["C"]), int(data["N"]),
            data["status"], Witness(**w) if w else None,
        )


@dataclass(frozen=True)
class ValuationProfile:
    p: int
    values: tuple  # int, or INFINITE for a zero coefficient

    def to_json(self) -> dict:
        return {"p": self.p, "values": ["inf" if v == INFINITE else v for v in self.values]}


def delta_sequence(coeffs: Sequence) -> list[int]:
    """delta_n = least positive integer clearing the denominators of a_0..a_n."""
    out = []
    d = 1
    for x in coeffs:
        d = math.lcm(d, as_rational(x).denominator)
        out.append(d)
    return out


def denominator_primes(coeffs: Iterable) -> list[int]:
    """Primes dividing some denominator, found by factoring only the growth of delta_n."""
    primes: set[int] = set()
    d = 1
    for x in coeffs:
        den = as_rational(x).denominator
        new = den // math.gcd(den, d)
        if new > 1:
            primes.update(factorint(new))
            d = math.lcm(d, den)
    return sorted(primes)


def _vp_or_inf(x: Fraction, p: int):
    return INFINITE if x == 0 else vp(x, p)


def _margin(a: Fraction, p: int, n: int, s: int, b: int, b0: int, vC: int) -> int:
    return vp(a, p) + s * floor_log(b * n + b0, p) + (n + 1) * vC


def certify(coeffs: Sequence, s: int, b: int = 1, b0: int = 0, C: int = 1, N: int | None = None) -> DenomCertificate:
    """Check D_{bn+b0}^s C^(n+1) a_n in Z for every n <= N.

    Only primes dividing some denominator can fail, so only those are checked.
    On failure the smallest (n, p) in lexicographic order is the witness.
    """
    a = [as_rational(x) for x in coeffs]
    N = len(a) - 1 if N is None else N
    if len(a) < N + 1:
        raise ValueError(f"certify needs {N + 1} coefficients, got {len(a)}")
    a = a[: N + 1]
    best: Witness | None = None
    for p in denominator_primes(a):
        vC = vp_int(C, p) if C % p == 0 else 0
        for n, x in enumerate(a):
            if best is not None and n > best.n:
                break
            if x.denominator % p:
                continue
            m = _margin(x, p, n, s, b, b0, vC)
            if m < 0:
                if best is None or (n, p) < (best.n, best.p):
                    best = Witness(n, p, -m)
                break
    return DenomCertificate(s, b, b0, C, N, "fail" if best else "pass", best)


def infer_s(
    coeffs: Sequence, b: int, b0: int, N: int, window: PrimeWindow, cap: int = 8
) -> int | None:
    """Least s <= cap with v_p(a_n) + s v_p(D_{bn+b0}) >= 0 for all window primes and n <= N.

    Returns None when no s up to ``cap`` works.
    """
    a = [as_rational(x) for x in coeffs[: N + 1]]
    need = 0
    for p in window.primes():
        for n, x in enumerate(a):
            if not x or x.denominator % p:
                continue
            deficit = -vp(x, p)
            if deficit <= 0:
                continue
            vD = floor_log(b * n + b0, p)
            if vD == 0:
                return None
            need = max(need, -(-deficit // vD))
            if need > cap:
                return None
    return need


def infer_C(coeffs: Sequence, s: int, b: int, b0: int, N: int, small_primes: Iterable[int]) -> int:
    """Least C supported on ``small_primes`` making the certificate hold at those primes."""
    a = [as_rational(x) for x in coeffs[: N + 1]]
    C = 1
    for p in small_primes:
        e = 0
        for n, x in enumerate(a):
            if not x or x.denominator % p:
                continue
            short = -vp(x, p) - s * floor_log(b * n + b0, p)
            if short > 0:
                e = max(e, -(-short // (n + 1)))
        C *= p**e
    return C


def valuation_profile(coeffs: Sequence, p: int, N: int | None = None) -> ValuationProfile:
    a = [as_rational(x) for x in coeffs]
    N = len(a) - 1 if N is None else N
    return ValuationProfile(p, tuple(_vp_or_inf(x, p) for x in a[: N + 1]))
