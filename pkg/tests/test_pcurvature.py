import math
import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from gdenom.diffop import DiffOp
from gdenom.localsystem import BadPrimeError
from gdenom.numkernel import Poly, PrimeWindow
from gdenom.pcurvature import (
    berkowitz,
    charpoly_of_pcurvature,
    fp_charpoly,
    fp_frobenius,
    fp_mul,
    fp_pow,
    gauge_transform,
    nilpotence_report,
    p_curvature,
    reduce_system,
)

z, X = sympy.symbols("z X")


def int_berkowitz(A):
    return berkowitz(A, lambda a, b: a + b, lambda a, b: a * b, lambda a: -a, 0, 1)


@settings(max_examples=60)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_berkowitz_matches_sympy(A):
    assert int_berkowitz(A) == sympy.Matrix(A).charpoly(X).all_coeffs()


def test_frobenius_is_pth_power():
    p = 5
    a = [1, 2, 0, 3]
    assert fp_frobenius(a, p) == fp_pow(a, p, p)


def brute_charpoly(L: DiffOp, p: int):
    """Char. poly of d^p on Q(z)[d]/Q(z)[d]L, reduced mod p afterwards.

    Coefficients are returned highest first as (num, den) integer lists mod p.
    """
    mu = L.order
    B = [sum(sympy.Rational(c.numerator, c.denominator) * z**k for k, c in enumerate(b.coeffs)) for b in L.coeffs]
    reduce_top = [-B[i] / B[mu] for i in range(mu)]

    def d(v):
        # d * sum a_i d^i = sum (a_i' + a_{i-1}) d^i, then d^mu is rewritten via L
        out = [sympy.diff(v[i], z) + (v[i - 1] if i else 0) + v[mu - 1] * reduce_top[i] for i in range(mu)]
        return [sympy.cancel(a) for a in out]

    cols = []
    for j in range(mu):
        v = [sympy.Integer(int(i == j)) for i in range(mu)]
        for _ in range(p):
            v = d(v)
        cols.append(v)
    M = sympy.Matrix(mu, mu, lambda i, j: cols[j][i])
    cp = M.charpoly(X).all_coeffs()
    out = []
    for c in cp:
        num, den = sympy.fraction(sympy.cancel(sympy.together(c)))
        out.append((_mod_coeffs(num, p), _mod_coeffs(den, p)))
    return out


def _mod_coeffs(expr, p):
    poly = sympy.Poly(expr, z)
    cs = poly.all_coeffs()[::-1]
    den = math.lcm(*[int(sympy.Rational(c).q) for c in cs])
    ints = [int(sympy.Rational(c) * den) for c in cs]
    assert den % p != 0
    inv = pow(int(den), -1, p)
    out = [(c * inv) % p for c in ints]
    while out and out[-1] == 0:
        out.pop()
    return out


def random_operator(rng, mu):
    while True:
        cs = [Poly([rng.randint(-3, 3) for _ in range(rng.randint(1, 3))]) for _ in range(mu + 1)]
        if not cs[-1].is_zero():
            return DiffOp(cs)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
@pytest.mark.parametrize("mu", [1, 2])
def test_pcurvature_against_brute_force(mu, p):
    rng = random.Random(100 * mu + p)
    checked = 0
    for _ in range(14):
        L = random_operator(rng, mu)
        try:
            S = reduce_system(L, p)
        except BadPrimeError:
            continue
        ours = charpoly_of_pcurvature(S)
        brute = brute_charpoly(L.normalized(), p)
        for k in range(1, mu + 1):
            # ours: c_k / d^(p k); brute: num/den; equal up to the sign (-1)^k
            dk = fp_pow(S.d, p * k, p)
            lhs = fp_mul(ours[k], brute[k][1], p)
            rhs = fp_mul(brute[k][0], dk, p)
            neg = [(-x) % p for x in rhs]
            assert lhs in (rhs, neg)
        checked += 1
    assert checked >= 5


def test_gauge_invariance():
    rng = random.Random(7)
    L = DiffOp([Poly([1, 2]), Poly([0, -3, 1]), Poly([2, 0, 1])])
    for p in (5, 7, 11):
        S = reduce_system(L, p)
        cp = fp_charpoly(p_curvature(S).numerators, p)
        for _ in range(3):
            P = [[[rng.randrange(p) for _ in range(2)] for _ in range(2)] for _ in range(2)]
            P[0][0], P[1][1] = [1, 1], [1]
            try:
                T = gauge_transform(S, P)
            except ValueError:
                continue
            cq = fp_charpoly(p_curvature(T).numerators, p)
            for k in range(1, 3):
                assert fp_mul(cp[k], fp_pow(T.d, p * k, p), p) == fp_mul(cq[k], fp_pow(S.d, p * k, p), p)


def test_apery_nilpotent(apery_L):
    reps = nilpotence_report(apery_L, PrimeWindow(5, 47))
    assert [r.p for r in reps] == [5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]
    assert all(r.nilpotent for r in reps)


def test_exponential_not_nilpotent():
    L = DiffOp([Poly([-1]), Poly([1])])
    reps = nilpotence_report(L, PrimeWindow(2, 20))
    assert reps and all(r.status == "non-nilpotent" for r in reps)


def test_bad_prime_skipped():
    L = DiffOp([Poly([-1]), Poly([5])])
    (rep,) = nilpotence_report(L, PrimeWindow(5, 5))
    assert rep.status == "skipped" and rep.nilpotent is None
    assert "bad prime" in rep.reason


def test_parallel_matches_serial(apery_L):
    w = PrimeWindow(5, 23)
    assert nilpotence_report(apery_L, w, jobs=2) == nilpotence_report(apery_L, w)
