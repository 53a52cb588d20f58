"""JSON schemas for every report the command line emits."""

from __future__ import annotations

import jsonschema

RATIONAL = {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}
POLY = {"type": "array", "items": RATIONAL}
RATFUNC = {
    "type": "object",
    "required": ["num", "den"],
    "properties": {"num": POLY, "den": POLY},
}
RMATRIX = {"type": "array", "items": {"type": "array", "items": RATFUNC}}
QMATRIX = {"type": "array", "items": {"type": "array", "items": RATIONAL}}

OPERATOR = {
    "type": "object",
    "required": ["variable", "order", "coefficients"],
    "properties": {
        "variable": {"type": "string"},
        "order": {"type": "integer", "minimum": 1},
        "coefficients": {"type": "array", "items": POLY, "minItems": 2},
    },
}

RECURRENCE = {
    "type": "object",
    "required": ["variable", "shifts"],
    "properties": {
        "variable": {"type": "string"},
        "n_start": {"type": "integer"},
        "shifts": {"type": "object", "patternProperties": {r"^-?\d+$": POLY}, "additionalProperties": False},
    },
}

EXPONENTS = {
    "type": "object",
    "required": ["point", "exponents", "all_rational", "regular"],
    "properties": {
        "point": {"type": "string"},
        "exponents": {"type": "array", "items": RATIONAL},
        "all_rational": {"type": "boolean"},
        "regular": {"type": "boolean"},
        "kind": {"type": "string"},
    },
}

SEQUENCE = {"type": "array", "items": RATIONAL}

WITNESS = {
    "type": "object",
    "required": ["n", "p", "deficit"],
    "properties": {"n": {"type": "integer"}, "p": {"type": "integer"}, "deficit": {"type": "integer"}},
}

CERTIFICATE = {
    "type": "object",
    "required": ["s", "b", "b0", "C", "N", "status", "witness"],
    "properties": {
        "s": {"type": "integer", "minimum": 0},
        "b": {"type": "integer", "minimum": 1},
        "b0": {"type": "integer", "minimum": 0},
        "C": {"type": "integer", "minimum": 1},
        "N": {"type": "integer"},
        "status": {"enum": ["pass", "fail"]},
        "witness": {"oneOf": [WITNESS, {"type": "null"}]},
    },
}

CD_REPORT = {
    "type": "object",
    "required": ["p", "exponent", "violations"],
    "properties": {
        "p": {"type": "integer"},
        "exponent": {"type": "integer"},
        "violations": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "integer"}, "minItems": 4, "maxItems": 4},
        },
    },
}

CDCHECK = {
    "type": "object",
    "required": ["reports", "skipped"],
    "properties": {
        "reports": {"type": "array", "items": CD_REPORT},
        "skipped": {"type": "object", "additionalProperties": {"type": "string"}},
    },
}

PCURV = {
    "type": "array",
    "items": {
        "type": "object",
        "required": ["p", "status"],
        "properties": {
            "p": {"type": "integer"},
            "status": {"enum": ["nilpotent", "non-nilpotent", "skipped"]},
            "reason": {"type": "string"},
            "charpoly_nonzero_terms": {"type": "integer"},
        },
    },
}

SHEAR = {
    "type": "object",
    "required": ["H", "H_inv", "A_sheared", "b0", "steps"],
    "properties": {
        "H": RMATRIX,
        "H_inv": RMATRIX,
        "A_sheared": {"type": "object", "required": ["size", "A"], "properties": {"A": RMATRIX}},
        "b0": {"type": "integer", "minimum": 0},
        "steps": {"type": "integer", "minimum": 0},
    },
}

FROBENIUS = {
    "type": "object",
    "required": ["N", "U"],
    "properties": {"N": QMATRIX, "U": {"type": "array", "items": QMATRIX}},
}

RESIDUAL = {"type": "object", "required": ["residual"], "properties": {"residual": POLY}}

DELTA = {"type": "array", "items": {"type": "integer", "minimum": 1}}

INFER = {
    "type": "object",
    "required": ["s", "C", "window", "cap"],
    "properties": {
        "s": {"type": ["integer", "null"]},
        "C": {"type": ["integer", "null"]},
        "window": {"type": "array", "items": {"type": "integer"}},
        "cap": {"type": "integer"},
    },
}

THEOREM1 = {
    "type": "object",
    "required": ["mu", "b", "b0", "C", "s", "N", "certificate", "cd_reports", "stages"],
    "properties": {
        "mu": {"type": "integer"},
        "b": {"type": "integer"},
        "b0": {"type": "integer"},
        "C": {"type": "integer"},
        "s": {"type": "integer"},
        "N": {"type": "integer"},
        "window": {"type": "array", "items": {"type": "integer"}},
        "cd_primes_checked": {"type": "array", "items": {"type": "integer"}},
        "cd_consistent": {"type": "boolean"},
        "cd_reports": {"type": "array", "items": CD_REPORT},
        "certificate": CERTIFICATE,
        "sharpest": {"oneOf": [CERTIFICATE, {"type": "null"}]},
        "stages": {"type": "object"},
    },
}

BY_VERB = {
    "exponents": EXPONENTS,
    "recurrence": RECURRENCE,
    "operator": OPERATOR,
    "unroll": SEQUENCE,
    "residual": RESIDUAL,
    "shift": OPERATOR,
    "invert": OPERATOR,
    "pullback": OPERATOR,
    "shear": SHEAR,
    "frobenius": FROBENIUS,
    "cdcheck": CDCHECK,
    "delta": DELTA,
    "certify": CERTIFICATE,
    "infer": INFER,
    "pcurv": PCURV,
    "theorem1": THEOREM1,
}


def validate(verb: str, obj) -> None:
    jsonschema.validate(obj, BY_VERB[verb])
