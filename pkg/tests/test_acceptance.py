"""Acceptance criteria, each timed against its runtime budget.

Every criterion prints one PASS/FAIL line; the lines are also repeated in the
pytest terminal summary. Run directly with ``python tests/test_acceptance.py``.
"""

import functools
import math
import random
import sys
import time
from fractions import Fraction

from gdenom import linalg
from gdenom.corpus import (
    APERY_L,
    APERY_RECURRENCE,
    apery_a,
    apery_ahat,
    apery_shifted_recurrence,
    polylog_coeffs,
)
from gdenom.denomlab import certify, delta_sequence, infer_s
from gdenom.diffop import (
    DiffOp,
    compute_b,
    exponents_at_zero,
    from_theta_form,
    pullback_power,
    shift,
)
from gdenom.localsystem import (
    BadPrimeError,
    cd_bound_check,
    companion,
    decompose,
    frobenius_series,
    reconstruct,
    shear,
    sylvester_defect,
)
from gdenom.numkernel import Dn, Poly, PrimeWindow, is_prime, vp
from gdenom.pcurvature import nilpotence_report
from gdenom.ratfunc import gauge, rm_equal
from gdenom.recurrence import InitialData, to_operator, to_recurrence, unroll

RESULTS: list[str] = []


def criterion(number: int, title: str, budget: float):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            start = time.perf_counter()
            ok = False
            try:
                fn(*args, **kwargs)
                ok = True
            finally:
                elapsed = time.perf_counter() - start
                ok = ok and elapsed < budget
                line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {elapsed:6.2f}s / {budget:g}s  {title}"
                print(line)
                RESULTS.append(line)
            assert elapsed < budget, f"{title}: {elapsed:.2f}s exceeds {budget}s"

        return wrapper

    return deco


@criterion(1, "operator to recurrence matches the Apery recurrence", 1)
def test_c01_operator_to_recurrence():
    R = to_recurrence(APERY_L).normalized()
    assert R.q == APERY_RECURRENCE.q
    assert R.q[0].coeffs == (1, 3, 3, 1)
    assert R.q[1].coeffs == (-117, -231, -153, -34)
    assert R.q[2].coeffs == (8, 12, 6, 1)


@criterion(2, "shifted operator at alpha = 1 gives the five-term recurrence", 1)
def test_c02_shifted_recurrence():
    got = to_recurrence(shift(APERY_L, 1)).reindexed()
    want = apery_shifted_recurrence(1)
    assert sorted(got.q) == [0, 1, 2, 3, 4]
    assert all(got.q[d] == want.q[d] for d in want.q)


@criterion(3, "Apery numbers: oracle match n <= 50 and delta_n = 1 for n <= 200", 5)
def test_c03_apery_integrality():
    a = unroll(APERY_RECURRENCE, InitialData.from_list([1, 5]), 200)
    assert a[:51] == [apery_a(n) for n in range(51)]
    assert delta_sequence(a) == [1] * 201


@criterion(4, "second Apery sequence needs D_n^3 and not D_n^2", 10)
def test_c04_sharp_exponent():
    ahat = unroll(APERY_RECURRENCE, InitialData.from_list([0, 6]), 200)
    assert ahat[:11] == [apery_ahat(n) for n in range(11)]
    assert certify(ahat, s=3, b=1, b0=0, C=1, N=200).passed
    c = certify(ahat, s=2, b=1, b0=0, C=1, N=200)
    assert not c.passed and c.witness is not None
    n, p = c.witness.n, c.witness.p
    assert (Dn(n) ** 2 * ahat[n]).denominator % p == 0


@criterion(5, "infer_s recovers k for 1/n^k, k = 1, 2, 3", 5)
def test_c05_polylog_filtration():
    window = PrimeWindow(5, 97)
    for k in (1, 2, 3):
        assert infer_s(polylog_coeffs(k, 300), 1, 0, 300, window) == k


@criterion(6, "exponents, ramification b and pullback", 1)
def test_c06_exponents_and_b():
    assert exponents_at_zero(APERY_L).exponents == (0, 0, 0)
    assert exponents_at_zero(shift(APERY_L, 1)).exponents == (0, 1, 2)
    s = Poly([0, 1], "s")
    half = Poly([Fraction(-1, 2), 1], "s")
    L = from_theta_form({0: s * (s - Poly.const(1, "s")) * half})
    assert sorted(exponents_at_zero(L).exponents) == [0, Fraction(1, 2), 1]
    assert compute_b(L) == 2
    assert sorted(exponents_at_zero(pullback_power(L, 2)).exponents) == [0, 1, 2]


@criterion(7, "shearing the shifted system: nilpotent residue and exact gauge identity", 2)
def test_c07_shearing():
    S = companion(shift(APERY_L, 1))
    sh = shear(S)
    R = sh.A_sheared.residue()
    assert linalg.is_zero(linalg.matpow(R, 3))
    assert rm_equal(gauge(S.A, sh.H, sh.H_inv), sh.A_sheared.A)


@criterion(8, "Frobenius series to n = 100 and Christol-Dwork bound for 5 <= p <= 97", 60)
def test_c08_frobenius_and_cd():
    sh = shear(companion(APERY_L))
    fs = frobenius_series(sh.A_sheared, 100)
    for n in range(101):
        assert linalg.is_zero(sylvester_defect(fs, n))
    checked = 0
    for p in PrimeWindow(5, 97).primes():
        try:
            rep = cd_bound_check(fs, p)
        except BadPrimeError:
            continue
        assert rep.exponent == 2 and rep.violations == []
        checked += 1
    assert checked > 0


@criterion(9, "decomposition reproduces a_0..a_50 exactly", 10)
def test_c09_reconstruction():
    a = [apery_a(n) for n in range(51)]
    sh = shear(companion(APERY_L))
    fs = frobenius_series(sh.A_sheared, 50 + sh.b0)
    ell = decompose(APERY_L, a, sh, fs)
    assert reconstruct(ell, sh, fs, 50) == a


@criterion(10, "p-curvature: Apery nilpotent for 5 <= p <= 47, d/dz - 1 not for p <= 20", 30)
def test_c10_pcurvature():
    reps = nilpotence_report(APERY_L, PrimeWindow(5, 47))
    good = [r for r in reps if r.status != "skipped"]
    assert [r.p for r in good] == PrimeWindow(5, 47).primes()
    assert all(r.nilpotent for r in good)
    exp = DiffOp([Poly([-1]), Poly([1])])
    reps = nilpotence_report(exp, PrimeWindow(2, 20))
    assert [r.p for r in reps] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert all(r.nilpotent is False for r in reps)


def _rand_rational(rng):
    num = rng.randint(-10**6, 10**6) * rng.choice([1, 2**rng.randint(0, 15), 3**rng.randint(0, 9)])
    den = rng.randint(1, 10**6) * rng.choice([1, 5**rng.randint(0, 7), 7**rng.randint(0, 5)])
    return Fraction(num or 1, den)


def _rand_operator(rng):
    mu = rng.randint(1, 3)
    cs = [Poly([Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(rng.randint(0, 4))]) for _ in range(mu + 1)]
    if cs[-1].is_zero():
        cs[-1] = Poly([rng.randint(1, 5)])
    return DiffOp(cs)


@criterion(11, "property suites: D_n, valuations, operator round trip, certify monotonicity", 60)
def test_c11_property_suites():
    rng = random.Random(11)
    for n in range(2, 501):
        prime_powers = [p for p in range(2, n + 1) if is_prime(p) and p ** round(math.log(n, p)) == n]
        assert Dn(n) == (prime_powers[0] if prime_powers else 1) * Dn(n - 1)
    for i in range(10_000):
        x, y, p = _rand_rational(rng), _rand_rational(rng), (2, 3, 5, 7)[i % 4]
        assert vp(x * y, p) == vp(x, p) + vp(y, p)
        assert vp(1 / x, p) == -vp(x, p)
        if x + y:
            assert vp(x + y, p) >= min(vp(x, p), vp(y, p))
    for _ in range(100):
        L = _rand_operator(rng)
        assert to_operator(to_recurrence(L)).normalized(strip_z=True) == L.normalized(strip_z=True)
    for _ in range(20):
        seq = [Fraction(rng.randint(-99, 99), rng.choice([1, 2, 4, 9, 27, 25, 8, 16, 49, 6])) for _ in range(60)]
        passes = [certify(seq, s).passed for s in range(10)]
        first = passes.index(True) if True in passes else len(passes)
        assert all(passes[first:])


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_c")]
    failed = 0
    for t in tests:
        try:
            t()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
