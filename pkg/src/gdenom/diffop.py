"""Differential operators B_0(z) + B_1(z) d/dz + ... + B_mu(z) (d/dz)^mu over Q[z].

Operators act on the left; products are normal-ordered with coefficients to the
left of powers of d/dz, using (d/dz) z = z (d/dz) + 1.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from .numkernel import (
    Poly,
    as_rational,
    format_rational,
    lcm_denominators,
    rational_roots,
)


class IrregularPointError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class DiffOp:
    coeffs: tuple[Poly, ...]
    var: str = "z"

    def __init__(self, coeffs: Sequence, var: str = "z"):
        cs = [c if isinstance(c, Poly) else Poly(c, var) for c in coeffs]
        cs = [c.with_var(var) for c in cs]
        while len(cs) > 1 and cs[-1].is_zero():
            cs.pop()
        if len(cs) < 2 or cs[-1].is_zero():
            raise ValueError("a differential operator needs order >= 1 and a nonzero leading coefficient")
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "var", var)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Poly:
        return self.coeffs[-1]

    def coeff(self, i: int) -> Poly:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Poly.zero(self.var)

    @property
    def degree(self) -> int:
        return max(c.degree for c in self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"DiffOp({self})"

    def __str__(self) -> str:
        d = f"D{self.var}"
        parts = []
        for i, b in enumerate(self.coeffs):
            if b.is_zero():
                continue
            mon = "" if i == 0 else (d if i == 1 else f"{d}^{i}")
            parts.append(f"({b})" + (f"*{mon}" if mon else ""))
        return " + ".join(parts)

    # algebra

    def __mul__(self, other) -> DiffOp:
        """Composition self ∘ other, or scaling by a rational."""
        if not isinstance(other, DiffOp):
            return DiffOp([c * as_rational(other) for c in self.coeffs], self.var)
        out = [Poly.zero(self.var) for _ in range(self.order + other.order + 1)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                db = b
                for r in range(min(i, b.degree) + 1):
                    # D^i b = sum_r C(i, r) b^(r) D^(i-r)
                    out[i - r + j] = out[i - r + j] + a * db * math.comb(i, r)
                    db = db.derivative()
        return DiffOp(out, self.var)

    __rmul__ = __mul__

    def apply(self, y: Poly) -> Poly:
        """L(y) for a polynomial y."""
        out = Poly.zero(self.var)
        dy = y.with_var(self.var)
        for b in self.coeffs:
            out = out + b * dy
            dy = dy.derivative()
        return out

    def normalized(self, strip_z: bool = False) -> DiffOp:
        """Primitive integer coefficients, positive top coefficient of B_mu.

        With ``strip_z`` the largest power of z dividing every B_i is removed too.
        """
        cs = list(self.coeffs)
        if strip_z:
            k = min(c.ord() for c in cs if c)
            cs = [c.shift_degree(-k) for c in cs]
        den = lcm_denominators(x for c in cs for x in c.coeffs)
        g = 0
        for c in cs:
            for x in c.coeffs:
                g = math.gcd(g, int(x * den))
        scale = Fraction(den, g)
        if cs[-1].lc < 0:
            scale = -scale
        return DiffOp([c * scale for c in cs], self.var)

    def to_json(self) -> dict:
        return {
            "variable": self.var,
            "order": self.order,
            "coefficients": [c.to_json() for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, data: dict) -> DiffOp:
        if not isinstance(data, dict) or "coefficients" not in data:
            raise ValueError("operator JSON needs a 'coefficients' array")
        var = data.get("variable", "z")
        coeffs = [Poly.from_json(c, var) for c in data["coefficients"]]
        op = cls(coeffs, var)
        if "order" in data and data["order"] != op.order:
            raise ValueError(f"declared order {data['order']} but coefficients give order {op.order}")
        return op


def derivative_op(k: int = 1, var: str = "z") -> DiffOp:
    """(d/dz)^k."""
    return DiffOp([Poly.zero(var)] * k + [Poly.const(1, var)], var)


# theta form

ThetaForm = dict  # j -> Poly in theta, meaning sum_j z^j c_j(theta)


def to_theta_form(L: DiffOp) -> dict[int, Poly]:
    """Return {j: c_j} with sum_j z^j c_j(theta) = z^mu L, theta = z d/dz."""
    mu = L.order
    falling = [Poly.falling(0, i, "theta") for i in range(mu + 1)]
    terms: dict[int, Poly] = {}
    for i, b in enumerate(L.coeffs):
        for j, c in enumerate(b.coeffs):
            if c:
                m = j + mu - i
                terms[m] = terms.get(m, Poly.zero("theta")) + falling[i] * c
    return {m: c for m, c in sorted(terms.items()) if c}


def _to_falling_basis(c: Poly) -> list[Fraction]:
    """Coefficients f_i with c(x) = sum_i f_i x(x-1)...(x-i+1), via forward differences."""
    vals = [c(k) for k in range(c.degree + 1)]
    out = []
    fact = 1
    for i in range(len(vals)):
        if i:
            fact *= i
        out.append(vals[0] / fact)
        vals = [vals[k + 1] - vals[k] for k in range(len(vals) - 1)]
    return out


def from_theta_form(terms: dict[int, Poly], var: str = "z", strip_z: bool = False) -> DiffOp:
    """Operator sum_j z^j c_j(theta) in coefficient form.

    Negative powers of z are cleared by a left monomial factor; ``strip_z``
    additionally removes any common power of z.
    """
    pieces: dict[int, dict[int, Fraction]] = {}
    for j, c in terms.items():
        for i, f in enumerate(_to_falling_basis(c)):
            if f:
                pieces.setdefault(i, {})
                pieces[i][i + j] = pieces[i].get(i + j, Fraction(0)) + f
    low = min((e for d in pieces.values() for e, v in d.items() if v), default=0)
    shift = -low if (low < 0 or strip_z) else 0
    order = max(pieces) if pieces else 0
    cs = []
    for i in range(order + 1):
        d = pieces.get(i, {})
        top = max(d, default=-1) + shift
        row = [Fraction(0)] * (top + 1)
        for e, v in d.items():
            row[e + shift] += v
        cs.append(Poly(row, var))
    return DiffOp(cs, var)


def indicial_polynomial(L: DiffOp) -> Poly:
    """Coefficient polynomial of the lowest power of z in L(z^s)."""
    terms = to_theta_form(L)
    return terms[min(terms)].with_var("s")


@dataclass(frozen=True)
class ExponentReport:
    point: Fraction | str
    exponents: tuple[Fraction, ...]
    all_rational: bool
    regular: bool

    def to_json(self) -> dict:
        return {
            "point": self.point if isinstance(self.point, str) else format_rational(self.point),
            "exponents": [format_rational(e) for e in self.exponents],
            "all_rational": self.all_rational,
            "regular": self.regular,
        }


def is_regular_at_zero(L: DiffOp) -> bool:
    """0 is an ordinary or regular singular point: ord B_i >= ord B_mu - (mu - i)."""
    mu = L.order
    top = L.leading.ord()
    return all(b.is_zero() or b.ord() >= top - (mu - i) for i, b in enumerate(L.coeffs))


def exponents_at_zero(L: DiffOp) -> ExponentReport:
    roots, complete = rational_roots(indicial_polynomial(L))
    regular = is_regular_at_zero(L)
    return ExponentReport(Fraction(0), tuple(roots), complete, regular)


def exponents_at(L: DiffOp, point) -> ExponentReport:
    """Exponents at a rational point or at infinity (``"inf"``)."""
    if isinstance(point, str) and point.strip().lower() in ("inf", "infinity", "∞"):
        rep = exponents_at_zero(invert(L))
        return ExponentReport("∞", rep.exponents, rep.all_rational, rep.regular)
    alpha = as_rational(point)
    rep = exponents_at_zero(shift(L, alpha))
    return ExponentReport(alpha, rep.exponents, rep.all_rational, rep.regular)


def compute_b(L: DiffOp) -> int:
    """lcm of the denominators of the exponents at 0."""
    rep = exponents_at_zero(L)
    if not rep.all_rational:
        raise ValueError("operator has non-rational exponents at 0")
    return lcm_denominators(rep.exponents)


def b_from_exponents(exponents) -> int:
    return lcm_denominators(exponents)


def shift(L: DiffOp, alpha) -> DiffOp:
    """Coefficients B_i(z + alpha): the operator governing solutions near z = alpha."""
    alpha = as_rational(alpha)
    return DiffOp([b.taylor_shift(alpha) for b in L.coeffs], L.var)


def invert(L: DiffOp) -> DiffOp:
    """Operator in w = 1/z annihilating y(1/w) for every solution y of L."""
    terms = to_theta_form(L)
    top = max(terms)
    flipped = {top - j: c.scale_var(-1) for j, c in terms.items()}
    return from_theta_form(flipped, L.var, strip_z=True).normalized()


def pullback_power(L: DiffOp, b: int, var: str | None = None) -> DiffOp:
    """Operator in x annihilating g(x^b) whenever L annihilates g(z)."""
    if b < 1:
        raise ValueError("pullback exponent must be >= 1")
    terms = to_theta_form(L)
    inv = Fraction(1, b)
    pulled = {b * j: c.scale_var(inv) for j, c in terms.items()}
    return from_theta_form(pulled, var or L.var, strip_z=True).normalized()


def left_compose_derivative(L: DiffOp, k: int) -> DiffOp:
    """(d/dz)^(k+1) ∘ L; kills y whenever L(y) is a polynomial of degree <= k."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return derivative_op(k + 1, L.var) * L
