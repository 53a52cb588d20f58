"""Exact denominator analysis for power series solutions of linear differential operators."""

from .denomlab import (
    DenomCertificate,
    certify,
    delta_sequence,
    infer_C,
    infer_s,
    valuation_profile,
)
from .diffop import (
    DiffOp,
    compute_b,
    exponents_at,
    exponents_at_zero,
    invert,
    pullback_power,
    shift,
)
from .localsystem import (
    LocalSystem,
    cd_bound_check,
    companion,
    decompose,
    frobenius_series,
    reconstruct,
    shear,
)
from .numkernel import Dn, Poly, PrimeWindow, Rational, floor_log, parse_rational, vp
from .pcurvature import nilpotence_report, p_curvature, reduce_system
from .pipeline import theorem_one_analyze
from .recurrence import (
    InitialData,
    Recurrence,
    residual,
    to_operator,
    to_recurrence,
    unroll,
)

__all__ = [
    "DenomCertificate",
    "DiffOp",
    "Dn",
    "InitialData",
    "LocalSystem",
    "Poly",
    "PrimeWindow",
    "Rational",
    "Recurrence",
    "cd_bound_check",
    "certify",
    "companion",
    "compute_b",
    "decompose",
    "delta_sequence",
    "exponents_at",
    "exponents_at_zero",
    "floor_log",
    "frobenius_series",
    "infer_C",
    "infer_s",
    "invert",
    "nilpotence_report",
    "p_curvature",
    "parse_rational",
    "pullback_power",
    "reconstruct",
    "reduce_system",
    "residual",
    "shear",
    "shift",
    "theorem_one_analyze",
    "to_operator",
    "to_recurrence",
    "unroll",
    "valuation_profile",
    "vp",
]
