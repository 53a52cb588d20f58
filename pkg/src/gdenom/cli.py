"""Command-line front end.

Exit codes: 0 on success, 1 when a certificate fails or an ``--expect``
assertion is not met, 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Callable, Sequence
from fractions import Fraction
from pathlib import Path
from typing import Any

import jsonschema

from . import denomlab, schemas
from .diffop import (
    DiffOp,
    IrregularPointError,
    exponents_at,
    invert,
    pullback_power,
    shift,
)
from .localsystem import (
    BadPrimeError,
    ShearingError,
    cd_bound_check,
    companion,
    frobenius_series,
    shear,
)
from .numkernel import PrimeWindow, format_rational, parse_rational, primes_up_to
from .pcurvature import nilpotence_report
from .pipeline import PipelineError, default_window, theorem_one_analyze
from .recurrence import (
    InitialData,
    InitialDataError,
    Recurrence,
    residual,
    to_operator,
    to_recurrence,
    unroll,
)


class InputError(Exception):
    def __init__(self, source: str, message: str, line: int = 1, col: int = 1):
        super().__init__(f"{source}:{line}:{col}: {message}")


# input

def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(path, f"cannot read file: {exc.strerror}") from exc
    except UnicodeDecodeError as exc:
        raise InputError(path, "file is not valid UTF-8") from exc


def _locate(text: str, needle: str) -> tuple[int, int]:
    at = text.find(needle)
    if at < 0:
        return 1, 1
    line = text.count("\n", 0, at) + 1
    col = at - (text.rfind("\n", 0, at) + 1) + 1
    return line, col


def _load_json(path: str, schema: dict) -> Any:
    text = _read(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(path, exc.msg, exc.lineno, exc.colno) from exc
    try:
        jsonschema.validate(data, schema)
    except jsonschema.ValidationError as exc:
        bad = exc.instance
        line, col = _locate(text, json.dumps(bad)) if isinstance(bad, (str, int)) else (1, 1)
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InputError(path, f"at {where}: {exc.message}", line, col) from exc
    return data


def load_operator(path: str) -> DiffOp:
    data = _load_json(path, schemas.OPERATOR)
    try:
        return DiffOp.from_json(data)
    except ValueError as exc:
        raise InputError(path, str(exc)) from exc


def load_recurrence(path: str) -> Recurrence:
    data = _load_json(path, schemas.RECURRENCE)
    try:
        return Recurrence.from_json(data)
    except ValueError as exc:
        raise InputError(path, str(exc)) from exc


def parse_sequence(text: str, source: str = "<sequence>") -> list[Fraction]:
    """One rational per line; an optional first line ``# n: value``; no blank lines."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    out: list[Fraction] = []
    for i, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r")
        if i == 1 and line.lstrip().startswith("#"):
            continue
        if not line.strip():
            raise InputError(source, "blank line", i, 1)
        try:
            out.append(parse_rational(line))
        except ValueError:
            col = len(line) - len(line.lstrip()) + 1
            raise InputError(source, f"not a rational: {line.strip()!r}", i, col) from None
    return out


def load_sequence(path: str) -> list[Fraction]:
    return parse_sequence(_read(path), path)


def _rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def _rational_list(text: str) -> list[Fraction]:
    return [_rational_arg(t) for t in text.split(",")] if text.strip() else []


def _patch_arg(text: str) -> dict[int, Fraction]:
    out = {}
    for item in filter(None, (t.strip() for t in text.split(","))):
        k, sep, v = item.partition("=")
        if not sep:
            raise argparse.ArgumentTypeError(f"expected index=value, got {item!r}")
        try:
            out[int(k)] = _rational_arg(v)
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad index in {item!r}") from None
    return out


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


# output

def table(headers: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    cells = [list(map(str, headers))] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _fmt_matrix(M) -> list[list[str]]:
    return [[format_rational(x) for x in row] for row in M]


class Outcome:
    """What a verb produced: a JSON object, its text rendering and a verdict."""

    def __init__(self, data: Any, text: str, verdict: str | None = None, exit_code: int = 0):
        self.data = data
        self.text = text
        self.verdict = verdict
        self.exit_code = exit_code


def _window(args, L: DiffOp | None = None) -> tuple[PrimeWindow, bool]:
    if args.pmin is None:
        if L is None:
            return PrimeWindow(5, args.pmax), False
        w = default_window(L, args.pmax)
        return w, True
    return PrimeWindow(args.pmin, args.pmax), False


def _base_op(args) -> DiffOp:
    L = load_operator(args.op)
    return shift(L, args.alpha) if args.alpha else L


# verbs

def cmd_exponents(args) -> Outcome:
    L = load_operator(args.op)
    point = args.point
    rep = exponents_at(L, point if point.strip().lower() in ("inf", "infinity") else _rational_arg(point))
    local = invert(L) if rep.point == "∞" else shift(L, rep.point)
    if not rep.regular:
        kind = "irregular singular"
    elif local.leading(Fraction(0)) != 0:
        kind = "ordinary"
    else:
        kind = "regular singular"
    data = rep.to_json() | {"kind": kind}
    exps = ", ".join(data["exponents"])
    if not rep.all_rational:
        exps += ", ..." if exps else "non-rational"
    return Outcome(data, f"{exps} ({kind})")


def cmd_recurrence(args) -> Outcome:
    R = to_recurrence(load_operator(args.op))
    if not args.raw:
        R = R.normalized()
    rows = [(f"v[n+{d}]", str(p)) for d, p in sorted(R.q.items())]
    text = table(["term", "coefficient"], rows) + f"\nvalid for n >= {R.n_start}"
    return Outcome(R.to_json(), text)


def cmd_operator(args) -> Outcome:
    L = to_operator(load_recurrence(args.rec))
    return _op_outcome(L)


def _op_outcome(L: DiffOp) -> Outcome:
    rows = [(f"D^{i}", str(c)) for i, c in enumerate(L.coeffs)]
    return Outcome(L.to_json(), table(["term", "coefficient"], rows))


def cmd_unroll(args) -> Outcome:
    R = load_recurrence(args.rec)
    vals = unroll(R, InitialData.from_list(args.init, args.patch), args.N)
    data = [format_rational(v) for v in vals]
    return Outcome(data, table(["n", "value"], list(enumerate(data))))


def cmd_residual(args) -> Outcome:
    res = residual(load_operator(args.op), load_sequence(args.seq))
    return Outcome({"residual": res.to_json()}, f"residual: {res}")


def cmd_shift(args) -> Outcome:
    return _op_outcome(shift(load_operator(args.op), args.alpha))


def cmd_invert(args) -> Outcome:
    return _op_outcome(invert(load_operator(args.op)))


def cmd_pullback(args) -> Outcome:
    return _op_outcome(pullback_power(load_operator(args.op), args.b))


def cmd_shear(args) -> Outcome:
    sh = shear(companion(_base_op(args)))
    res = sh.A_sheared.residue()
    text = f"steps: {sh.steps}\nb0: {sh.b0}\nresidue after shearing:\n"
    text += table([f"c{j}" for j in range(len(res))], _fmt_matrix(res))
    return Outcome(sh.to_json(), text)


def cmd_frobenius(args) -> Outcome:
    sh = shear(companion(_base_op(args)))
    fs = frobenius_series(sh.A_sheared, args.nmax)
    mu = fs.size
    rows = [[n] + [format_rational(fs.U[n][i][j]) for i in range(mu) for j in range(mu)] for n in range(fs.n_max + 1)]
    heads = ["n"] + [f"u{i}{j}" for i in range(mu) for j in range(mu)]
    text = "N:\n" + table([f"c{j}" for j in range(mu)], _fmt_matrix(fs.N)) + "\n\nU_n:\n" + table(heads, rows)
    return Outcome(fs.to_json(), text)


def cmd_cdcheck(args) -> Outcome:
    sh = shear(companion(_base_op(args)))
    fs = frobenius_series(sh.A_sheared, args.nmax)
    window, _ = _window(args)
    reports, skipped = [], {}
    for p in window.primes():
        try:
            reports.append(cd_bound_check(fs, p))
        except BadPrimeError as exc:
            skipped[str(p)] = str(exc)
    data = {"reports": [r.to_json() for r in reports], "skipped": skipped}
    rows = [(r.p, r.exponent, len(r.violations), "ok" if r.ok else "violated") for r in reports]
    rows += [(p, "-", "-", "skipped") for p in skipped]
    ok = all(r.ok for r in reports)
    return Outcome(data, table(["p", "exponent", "violations", "status"], rows), "pass" if ok else "fail")


def cmd_delta(args) -> Outcome:
    a = load_sequence(args.seq)
    N = len(a) - 1 if args.N is None else args.N
    d = denomlab.delta_sequence(a[: N + 1])
    return Outcome(d, table(["n", "delta_n"], list(enumerate(d))))


def _cert_text(c: denomlab.DenomCertificate) -> str:
    head = f"D_({c.b}n+{c.b0})^{c.s} * {c.C}^(n+1) * a_n integral for n <= {c.N}: {c.status}"
    if c.witness:
        w = c.witness
        head += f"\nwitness: n={w.n} p={w.p} deficit={w.deficit}"
    return head


def cmd_certify(args) -> Outcome:
    a = load_sequence(args.seq)
    c = denomlab.certify(a, args.s, args.b, args.b0, args.C, args.N)
    return Outcome(c.to_json(), _cert_text(c), c.status, 0 if c.passed else 1)


def cmd_infer(args) -> Outcome:
    a = load_sequence(args.seq)
    N = len(a) - 1 if args.N is None else args.N
    window, _ = _window(args)
    s = denomlab.infer_s(a, args.b, args.b0, N, window, args.cap)
    small = args.small_primes if args.small_primes is not None else primes_up_to(window.p_min - 1)
    C = None if s is None else denomlab.infer_C(a, s, args.b, args.b0, N, small)
    data = {"s": s, "C": C, "window": [window.p_min, window.p_max], "cap": args.cap}
    shown = "none up to cap" if s is None else str(s)
    return Outcome(data, table(["quantity", "value"], [("s", shown), ("C", "-" if C is None else C)]))


def cmd_pcurv(args) -> Outcome:
    L = load_operator(args.op)
    window, heuristic = _window(args, L)
    reps = nilpotence_report(L, window, args.jobs)
    rows = [(r.p, r.status, r.reason or "") for r in reps]
    note = "p-curvature verdicts (oracle evidence, not a proof)"
    if heuristic:
        note += f"\nwindow {window.p_min}..{window.p_max} chosen heuristically"
    ok = all(r.nilpotent is not False for r in reps)
    return Outcome([r.to_json() for r in reps], note + "\n" + table(["p", "verdict", "note"], rows),
                   "nilpotent" if ok else "non-nilpotent")


def cmd_theorem1(args) -> Outcome:
    L = load_operator(args.op)
    a = load_sequence(args.seq)
    N = len(a) - 1 if args.N is None else args.N
    window, heuristic = _window(args, L)
    rep = theorem_one_analyze(L, a, N, window, args.jobs)
    rows = [
        ("mu", rep.mu), ("b", rep.b), ("b0", rep.b0), ("C", rep.C), ("s", rep.s), ("N", rep.N),
        ("window", f"{window.p_min}..{window.p_max}" + (" (heuristic)" if heuristic else "")),
        ("Christol-Dwork", "consistent" if rep.cd_consistent else "violations found"),
        ("certificate", rep.certificate.status),
    ]
    if rep.sharpest:
        rows.append(("sharpest", f"b0={rep.sharpest.b0} C={rep.sharpest.C}"))
    c = rep.certificate
    return Outcome(rep.to_json(), table(["field", "value"], rows), c.status, 0 if c.passed else 1)


VERBS: dict[str, tuple[Callable, str]] = {
    "exponents": (cmd_exponents, "local exponents at a point"),
    "recurrence": (cmd_recurrence, "recurrence for the Taylor coefficients of solutions"),
    "operator": (cmd_operator, "differential operator of a recurrence"),
    "unroll": (cmd_unroll, "terms of a recurrence from initial data"),
    "residual": (cmd_residual, "L applied to a truncated series"),
    "shift": (cmd_shift, "operator recentred at z = alpha"),
    "invert": (cmd_invert, "operator in the variable 1/z"),
    "pullback": (cmd_pullback, "operator after z = x^b"),
    "shear": (cmd_shear, "shearing of the companion system"),
    "frobenius": (cmd_frobenius, "Frobenius series of the sheared system"),
    "cdcheck": (cmd_cdcheck, "per-prime Christol-Dwork valuation check"),
    "delta": (cmd_delta, "common denominators of prefixes"),
    "certify": (cmd_certify, "check a denominator bound on a range"),
    "infer": (cmd_infer, "least exponent s and constant C"),
    "pcurv": (cmd_pcurv, "p-curvature nilpotence verdicts"),
    "theorem1": (cmd_theorem1, "full denominator analysis of a series solution"),
}

EXPECT = ("pass", "fail", "nilpotent", "non-nilpotent")


class _HelpFormatter(argparse.ArgumentDefaultsHelpFormatter):
    # required flags have no default worth printing
    def _get_help_string(self, action):
        return action.help if action.required else super()._get_help_string(action)


def build_parser() -> argparse.ArgumentParser:
    fmt = _HelpFormatter
    parser = argparse.ArgumentParser(prog="gdenom", description=__doc__.splitlines()[0], formatter_class=fmt)
    sub = parser.add_subparsers(dest="verb", required=True, metavar="VERB")

    def common(p):
        p.add_argument("--json", action="store_true", help="emit JSON instead of a text table")
        p.add_argument("--expect", choices=EXPECT, default=None, help="exit 1 unless the verdict matches")
        p.add_argument("--jobs", type=int, default=1, help="concurrent prime workers")

    def window(p):
        p.add_argument("--pmin", type=int, default=None, help="smallest prime in the window (None: heuristic or 5)")
        p.add_argument("--pmax", type=int, default=97, help="largest prime in the window")

    ps = {}
    for verb, (_, helptext) in VERBS.items():
        ps[verb] = sub.add_parser(verb, help=helptext, description=helptext, formatter_class=fmt)
        common(ps[verb])

    op = dict(required=True, help="operator JSON file")
    seq = dict(required=True, help="sequence file, one rational per line")
    alpha = dict(type=_rational_arg, default=Fraction(0), help="recentre the operator at this point first")

    ps["exponents"].add_argument("--op", **op)
    ps["exponents"].add_argument("--point", default="0", help="rational point or 'inf'")
    ps["recurrence"].add_argument("--op", **op)
    ps["recurrence"].add_argument("--raw", action="store_true", help="skip normalization")
    ps["operator"].add_argument("--rec", required=True, help="recurrence JSON file")
    ps["unroll"].add_argument("--rec", required=True, help="recurrence JSON file")
    ps["unroll"].add_argument("--init", type=_rational_list, required=True, help="comma-separated initial values")
    ps["unroll"].add_argument("--patch", type=_patch_arg, default={}, help="index=value pairs at singular indices")
    ps["unroll"].add_argument("--N", type=int, default=50, help="last index")
    ps["residual"].add_argument("--op", **op)
    ps["residual"].add_argument("--seq", **seq)
    ps["shift"].add_argument("--op", **op)
    ps["shift"].add_argument("--alpha", type=_rational_arg, required=True, help="new origin")
    ps["invert"].add_argument("--op", **op)
    ps["pullback"].add_argument("--op", **op)
    ps["pullback"].add_argument("--b", type=int, required=True, help="ramification index")
    for v in ("shear", "frobenius", "cdcheck"):
        ps[v].add_argument("--op", **op)
        ps[v].add_argument("--alpha", **alpha)
    ps["frobenius"].add_argument("--nmax", type=int, default=10, help="last coefficient index")
    ps["cdcheck"].add_argument("--nmax", type=int, default=100, help="last coefficient index")
    window(ps["cdcheck"])
    ps["delta"].add_argument("--seq", **seq)
    ps["delta"].add_argument("--N", type=int, default=None, help="last index (None: whole file)")
    ps["certify"].add_argument("--seq", **seq)
    ps["certify"].add_argument("--s", type=int, required=True, help="exponent of D")
    ps["certify"].add_argument("--b", type=int, default=1, help="index multiplier")
    ps["certify"].add_argument("--b0", type=int, default=0, help="index offset")
    ps["certify"].add_argument("--C", type=int, default=1, help="geometric constant")
    ps["certify"].add_argument("--N", type=int, default=None, help="last index (None: whole file)")
    ps["infer"].add_argument("--seq", **seq)
    ps["infer"].add_argument("--b", type=int, default=1, help="index multiplier")
    ps["infer"].add_argument("--b0", type=int, default=0, help="index offset")
    ps["infer"].add_argument("--N", type=int, default=None, help="last index (None: whole file)")
    ps["infer"].add_argument("--cap", type=int, default=8, help="largest exponent tried")
    ps["infer"].add_argument("--small-primes", type=_int_list, default=None,
                             help="primes allowed in C (None: primes below pmin)")
    window(ps["infer"])
    ps["pcurv"].add_argument("--op", **op)
    window(ps["pcurv"])
    ps["theorem1"].add_argument("--op", **op)
    ps["theorem1"].add_argument("--seq", **seq)
    ps["theorem1"].add_argument("--N", type=int, default=None, help="last index (None: whole file)")
    window(ps["theorem1"])
    return parser


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2)


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    fn = VERBS[args.verb][0]
    try:
        outcome = fn(args)
    except InputError as exc:
        print(f"error: {exc}", file=err)
        return 2
    except (
        PipelineError, IrregularPointError, ShearingError, InitialDataError, BadPrimeError, ValueError,
        argparse.ArgumentTypeError,
    ) as exc:
        print(f"error: {exc}", file=err)
        return 2
    print(dumps(outcome.data) if args.json else outcome.text, file=out)
    if args.expect is not None:
        return 0 if outcome.verdict == args.expect else 1
    return outcome.exit_code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
