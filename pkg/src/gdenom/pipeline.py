"""End-to-end denominator analysis of a power series solution of an operator.

Stages, in order: residual check, exponents at 0 and the ramification b,
pullback z = x^b, companion system, shearing, Frobenius series, decomposition
of the input on the Frobenius basis, per-prime Christol-Dwork checks over a
prime window, the small-prime constant C, and a direct certificate for the
parameters (s, b, b0, C) = (mu - 1, b, b0, C).

The certificate is evidence on the supplied range; the Christol-Dwork stage
only reports whether the coefficients behave as the bound predicts.
"""

from __future__ import annotations

from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import denomlab
from .denomlab import DenomCertificate
from .diffop import DiffOp, compute_b, exponents_at_zero, pullback_power
from .localsystem import (
    BadPrimeError,
    CDBoundReport,
    FrobeniusSeries,
    cd_bound_check,
    companion,
    decompose,
    frobenius_series,
    shear,
)
from .numkernel import PrimeWindow, as_rational, format_rational, primes_up_to
from .recurrence import residual


class PipelineError(ValueError):
    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage


@dataclass
class TheoremOneReport:
    mu: int
    b: int
    b0: int
    C: int
    s: int
    N: int
    window: PrimeWindow
    cd_primes_checked: list[int]
    cd_reports: list[CDBoundReport]
    cd_skipped: dict[int, str]
    certificate: DenomCertificate
    sharpest: DenomCertificate | None
    stages: dict[str, Any] = field(default_factory=dict)

    @property
    def cd_consistent(self) -> bool:
        return all(r.ok for r in self.cd_reports)

    def to_json(self) -> dict:
        return {
            "mu": self.mu,
            "b": self.b,
            "b0": self.b0,
            "C": self.C,
            "s": self.s,
            "N": self.N,
            "window": [self.window.p_min, self.window.p_max],
            "cd_primes_checked": self.cd_primes_checked,
            "cd_consistent": self.cd_consistent,
            "cd_reports": [r.to_json() for r in self.cd_reports],
            "cd_skipped": {str(p): why for p, why in self.cd_skipped.items()},
            "certificate": self.certificate.to_json(),
            "sharpest": self.sharpest.to_json() if self.sharpest else None,
            "stages": self.stages,
        }


def interleave(coeffs: Sequence, b: int) -> list[Fraction]:
    """Coefficients of sum a_n x^(bn)."""
    out: list[Fraction] = []
    for n, x in enumerate(coeffs):
        if n:
            out.extend([Fraction(0)] * (b - 1))
        out.append(as_rational(x))
    return out


def default_window(L: DiffOp, p_max: int = 97) -> PrimeWindow:
    """First prime above the order and above every prime in the leading coefficient.

    A heuristic: the true threshold beyond which every prime behaves is not
    effective.
    """
    lead = L.normalized().leading.integer_coeffs()
    big = L.order
    for c in lead:
        c = abs(c)
        for p in primes_up_to(max(c, 2)):
            if c and c % p == 0:
                big = max(big, p)
    p_min = next(p for p in primes_up_to(10 * big + 100) if p > big)
    return PrimeWindow(p_min, max(p_max, p_min))


def _cd_one(fs: FrobeniusSeries, p: int, n_max: int):
    try:
        return cd_bound_check(fs, p, n_max)
    except BadPrimeError as exc:
        return str(exc)


def theorem_one_analyze(
    L: DiffOp, coeffs: Sequence, N: int, window: PrimeWindow, jobs: int = 1
) -> TheoremOneReport:
    a = [as_rational(x) for x in coeffs]
    if len(a) < N + 1:
        raise PipelineError("input", f"need {N + 1} coefficients, got {len(a)}")
    a = a[: N + 1]
    stages: dict[str, Any] = {}

    try:
        res = residual(L, a)
    except ValueError as exc:
        raise PipelineError("residual", str(exc)) from exc
    if res:
        raise PipelineError("residual", f"L does not annihilate the series: residual {res}")
    stages["residual"] = "0"

    rep = exponents_at_zero(L)
    stages["exponents"] = rep.to_json()
    if not rep.regular:
        raise PipelineError("exponents", "0 is an irregular singular point")
    if not rep.all_rational:
        raise PipelineError("exponents", "exponents at 0 are not all rational")
    b = compute_b(L)
    stages["b"] = b

    if b > 1:
        Lt = pullback_power(L, b)
        at = interleave(a, b)
        stages["pullback"] = {"operator": Lt.to_json(), "exponents": exponents_at_zero(Lt).to_json()}
    else:
        Lt, at = L, a

    try:
        system = companion(Lt)
        sh = shear(system)
    except ValueError as exc:
        raise PipelineError("shear", str(exc)) from exc
    stages["shear"] = {"steps": sh.steps, "b0": sh.b0}

    n_frob = len(at) - 1 + sh.b0
    fs = frobenius_series(sh.A_sheared, n_frob)
    stages["frobenius"] = {"n_max": n_frob, "N": [[format_rational(x) for x in row] for row in fs.N]}

    try:
        ell = decompose(Lt, at, sh, fs)
    except ValueError as exc:
        raise PipelineError("decompose", str(exc)) from exc
    stages["decompose"] = {"ell": [format_rational(x) for x in ell], "reconstruction": "exact"}

    primes = window.primes()
    if jobs > 1 and len(primes) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_cd_one, [fs] * len(primes), primes, [n_frob] * len(primes)))
    else:
        results = [_cd_one(fs, p, n_frob) for p in primes]
    cd_reports = [r for r in results if isinstance(r, CDBoundReport)]
    cd_skipped = {p: r for p, r in zip(primes, results) if isinstance(r, str)}
    stages["christol_dwork"] = {
        "checked": [r.p for r in cd_reports],
        "violations": sum(len(r.violations) for r in cd_reports),
        "note": "a violation is evidence against the operator having generic radius 1 at that prime",
    }

    mu = L.order
    s = mu - 1
    small = [p for p in primes_up_to(window.p_min - 1)]
    C = denomlab.infer_C(a, s, b, sh.b0, N, small)
    cert = denomlab.certify(a, s, b, sh.b0, C, N)
    stages["certificate"] = "certified on range by direct valuation"

    sharpest = None
    for b0 in range(sh.b0 + 1):
        C0 = denomlab.infer_C(a, s, b, b0, N, small)
        c0 = denomlab.certify(a, s, b, b0, C0, N)
        if c0.passed:
            sharpest = c0
            break

    return TheoremOneReport(
        mu=mu,
        b=b,
        b0=sh.b0,
        C=C,
        s=s,
        N=N,
        window=window,
        cd_primes_checked=[r.p for r in cd_reports],
        cd_reports=cd_reports,
        cd_skipped=cd_skipped,
        certificate=cert,
        sharpest=sharpest,
        stages=stages,
    )
