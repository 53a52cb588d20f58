"""Worked operators and sequences around Apery's numbers.

The binomial-sum formulas here are independent of the recurrence code and are
used as oracles by the tests.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .diffop import DiffOp
from .numkernel import Poly
from .recurrence import Recurrence

# z^2(1-34z+z^2) D^3 + z(3-153z+6z^2) D^2 + (1-112z+7z^2) D + z - 5
APERY_L = DiffOp(
    [
        Poly([-5, 1]),
        Poly([1, -112, 7]),
        Poly([0, 3, -153, 6]),
        Poly([0, 0, 1, -34, 1]),
    ]
)

# (n+2)^3 U_{n+2} - (34n^3+153n^2+231n+117) U_{n+1} + (n+1)^3 U_n = 0
APERY_RECURRENCE = Recurrence(
    {
        0: Poly([1, 3, 3, 1], "n"),
        1: Poly([-117, -231, -153, -34], "n"),
        2: Poly([8, 12, 6, 1], "n"),
    }
)


def apery_shifted_recurrence(alpha) -> Recurrence:
    """The five-term relation for the operator shifted to z = alpha, as printed in closed form."""
    a = Fraction(alpha)
    n = Poly([0, 1], "n")
    one = Poly.const(1, "n")
    q0 = (n + 1) ** 3
    q1 = ((2 * a - 17) * n * n + (6 * a - 51) * n + (5 * a - 39) * one) * (2 * n + 3)
    q2 = (
        (6 * a * a - 102 * a + 1) * n * n + (24 * a * a - 408 * a + 4) * n + (25 * a * a - 418 * a + 4) * one
    ) * (n + 2)
    q3 = a * (2 * a * a - 51 * a + 1) * (2 * n + 5) * (n + 3) * (n + 2)
    q4 = a * a * (a * a - 34 * a + 1) * (n + 4) * (n + 3) * (n + 2)
    return Recurrence({0: q0, 1: q1, 2: q2, 3: q3, 4: q4})


def apery_a(n: int) -> int:
    return sum(comb(n, k) ** 2 * comb(n + k, k) ** 2 for k in range(n + 1))


def apery_ahat(n: int) -> Fraction:
    """The second Apery sequence, from its double-sum formula."""
    h3 = sum((Fraction(1, m**3) for m in range(1, n + 1)), Fraction(0))
    total = Fraction(0)
    inner = h3
    for k in range(n + 1):
        if k:
            inner += Fraction((-1) ** (k - 1), 2 * k**3 * comb(n, k) * comb(n + k, n))
        total += comb(n, k) ** 2 * comb(n + k, k) ** 2 * inner
    return total


def polylog_coeffs(k: int, N: int) -> list[Fraction]:
    """Coefficients of Li_k: a_0 = 0, a_n = 1/n^k."""
    return [Fraction(0)] + [Fraction(1, n**k) for n in range(1, N + 1)]
