"""Linear recurrences with polynomial coefficients and their dictionary with operators.

A recurrence is stored as sum_d q_d(n) v_{n+d} = 0 for n >= n_start. Indices
below zero are read as v_m = 0, which is the Taylor-coefficient convention
used by :func:`to_recurrence`.
"""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .diffop import DiffOp, _to_falling_basis
from .numkernel import Poly, as_rational, format_rational, lcm_denominators


class InitialDataError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Recurrence:
    q: dict[int, Poly]
    n_start: int = 0

    def __post_init__(self):
        q = {int(d): (p if isinstance(p, Poly) else Poly(p, "n")).with_var("n") for d, p in self.q.items()}
        q = {d: p for d, p in sorted(q.items()) if p}
        if not q:
            raise ValueError("recurrence has no nonzero coefficient")
        object.__setattr__(self, "q", q)

    @property
    def d_min(self) -> int:
        return min(self.q)

    @property
    def d_max(self) -> int:
        return max(self.q)

    def coeff(self, d: int) -> Poly:
        return self.q.get(d, Poly.zero("n"))

    def reindexed(self) -> Recurrence:
        """Same relation written with shifts 0..k (n replaced by n - d_min)."""
        lo = self.d_min
        return Recurrence({d - lo: p.taylor_shift(-lo) for d, p in self.q.items()}, self.n_start + lo)

    def normalized(self) -> Recurrence:
        """Reindexed, primitive over Z, positive top coefficient of the highest shift."""
        r = self.reindexed()
        den = lcm_denominators(c for p in r.q.values() for c in p.coeffs)
        g = 0
        for p in r.q.values():
            for c in p.coeffs:
                g = math.gcd(g, int(c * den))
        scale = Fraction(den, g)
        if r.q[r.d_max].lc < 0:
            scale = -scale
        return Recurrence({d: p * scale for d, p in r.q.items()}, r.n_start)

    def same_relation(self, other: Recurrence) -> bool:
        a, b = self.normalized(), other.normalized()
        return a.q == b.q

    def __eq__(self, other) -> bool:
        if not isinstance(other, Recurrence):
            return NotImplemented
        return self.q == other.q and self.n_start == other.n_start

    def __str__(self) -> str:
        return " + ".join(f"({p})*v[n+{d}]" for d, p in self.q.items()) + " = 0"

    def to_json(self) -> dict:
        return {
            "variable": "n",
            "n_start": self.n_start,
            "shifts": {str(d): p.to_json() for d, p in self.q.items()},
        }

    @classmethod
    def from_json(cls, data: dict) -> Recurrence:
        if not isinstance(data, dict) or "shifts" not in data:
            raise ValueError("recurrence JSON needs a 'shifts' object")
        q = {int(d): Poly.from_json(p, "n") for d, p in data["shifts"].items()}
        return cls(q, int(data.get("n_start", 0)))


@dataclass
class InitialData:
    base: dict[int, Fraction] = field(default_factory=dict)
    patch: dict[int, Fraction] = field(default_factory=dict)

    @classmethod
    def from_list(cls, values: Sequence, patch: Mapping | None = None) -> InitialData:
        return cls(
            {i: as_rational(v) for i, v in enumerate(values)},
            {int(k): as_rational(v) for k, v in (patch or {}).items()},
        )


def to_recurrence(L: DiffOp) -> Recurrence:
    """Relation on the Taylor coefficients of power series solutions of L.

    The relation at n is the coefficient of z^n in L(sum v_m z^m), so it holds
    for every n >= 0 with v_m = 0 for m < 0.
    """
    q: dict[int, Poly] = {}
    for i, b in enumerate(L.coeffs):
        for j, c in enumerate(b.coeffs):
            if c:
                d = i - j
                q[d] = q.get(d, Poly.zero("n")) + Poly.falling(d, i, "n") * c
    return Recurrence(q, 0)


def to_operator(R: Recurrence, var: str = "z") -> DiffOp:
    """An operator whose coefficient relation is R, up to a left power of z.

    The least such power is used. A relation with constant coefficients only
    would give an order-0 operator; it is first multiplied by n + d_max so
    that the result has order >= 1.
    """
    q = dict(R.q)
    if all(p.degree <= 0 for p in q.values()):
        lift = Poly((R.d_max, 1), "n")
        q = {d: p * lift for d, p in q.items()}
    # q_d(n) = sum_i b_{i, i-d} (n+d)(n+d-1)...(n+d-i+1)
    pieces: dict[int, dict[int, Fraction]] = {}
    for d, p in q.items():
        for i, f in enumerate(_to_falling_basis(p.taylor_shift(-d))):
            if f:
                pieces.setdefault(i, {})[i - d] = f
    c = max(0, -min(j for row in pieces.values() for j in row))
    order = max(pieces)
    cs = []
    for i in range(order + 1):
        row = pieces.get(i, {})
        dense = [Fraction(0)] * (max(row, default=-1) + c + 1)
        for j, f in row.items():
            dense[j + c] = f
        cs.append(Poly(dense, var))
    return DiffOp(cs, var)


def _int_coeffs(p: Poly, den: int) -> list[int]:
    return [int(c * den) for c in p.coeffs]


def _eval_int(cs: list[int], n: int) -> int:
    acc = 0
    for c in reversed(cs):
        acc = acc * n + c
    return acc


def singular_indices(R: Recurrence, N: int) -> list[int]:
    """Indices m = n + d_max <= N where the leading coefficient vanishes at n."""
    lead = R.q[R.d_max]
    out = []
    for n in range(R.n_start, N - R.d_max + 1):
        if lead(n) == 0:
            out.append(n + R.d_max)
    return out


def unroll(R: Recurrence, init: InitialData, N: int) -> list[Fraction]:
    """Exact terms v_0..v_N.

    Indices below n_start + d_max are taken from ``init.base``; later indices
    follow from the relation, except where its leading coefficient vanishes, in
    which case ``init.patch`` must supply the value.
    """
    if N < 0:
        return []
    first = max(R.n_start + R.d_max, 0)
    missing = [m for m in range(min(first, N + 1)) if m not in init.base]
    if missing:
        raise InitialDataError(f"insufficient initial data: missing base indices {missing}")
    den = lcm_denominators(c for p in R.q.values() for c in p.coeffs)
    qi = {d: _int_coeffs(p, den) for d, p in R.q.items()}
    lead_d = R.d_max
    lower = [d for d in qi if d != lead_d]
    v: list[Fraction] = [as_rational(init.base[m]) for m in range(min(first, N + 1))]

    def at(m: int) -> Fraction:
        return v[m] if m >= 0 else Fraction(0)

    for m in range(first, N + 1):
        n = m - lead_d
        acc = Fraction(0)
        for d in lower:
            x = at(n + d)
            if x:
                acc += _eval_int(qi[d], n) * x
        lead = _eval_int(qi[lead_d], n)
        if lead == 0:
            if m not in init.patch:
                raise InitialDataError(f"singular index without patch value: {m}")
            if acc != 0:
                raise InitialDataError(f"relation at n = {n} is inconsistent with the given values")
            v.append(as_rational(init.patch[m]))
        else:
            v.append(-acc / lead)
    return v


def residual_required_length(L: DiffOp) -> int:
    return L.degree + L.order + 1


def residual(L: DiffOp, coeffs: Sequence) -> Poly:
    """The polynomial P = L(sum coeffs_n z^n), from the coefficients it determines.

    Coefficients of z^m are exact for m <= len(coeffs) - 1 - d_max, where d_max
    is the largest shift of the coefficient relation; the returned polynomial
    collects those.
    """
    need = residual_required_length(L)
    if len(coeffs) < need:
        raise ValueError(f"insufficient length: residual needs at least {need} coefficients, got {len(coeffs)}")
    a = [as_rational(x) for x in coeffs]
    R = to_recurrence(L)
    top = len(a) - 1 - max(R.d_max, 0)
    out = []
    for m in range(top + 1):
        acc = Fraction(0)
        for d, p in R.q.items():
            k = m + d
            if 0 <= k < len(a) and a[k]:
                acc += p(m) * a[k]
        out.append(acc)
    return Poly(out, L.var)


def recurrence_table(R: Recurrence) -> list[tuple[int, str]]:
    return [(d, str(p)) for d, p in R.q.items()]


def format_sequence(values: Sequence) -> str:
    return "".join(format_rational(v) + "\n" for v in values)
