import math
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from gdenom.numkernel import (
    Dn,
    Poly,
    PrimeWindow,
    floor_log,
    format_rational,
    is_prime,
    lcm_denominators,
    parse_rational,
    poly_gcd,
    primes_up_to,
    rational_roots,
    vp,
    vp_Dn,
)

nonzero_rationals = st.fractions(max_denominator=10**6).filter(lambda x: x != 0)
small_primes = st.sampled_from([2, 3, 5, 7, 11, 13, 97])
polys = st.lists(st.fractions(max_denominator=20, min_value=-20, max_value=20), max_size=6).map(Poly)


class TestRationals:
    @pytest.mark.parametrize("text,value", [("3", 3), ("-7/4", Fraction(-7, 4)), (" 10/20 ", Fraction(1, 2))])
    def test_parse(self, text, value):
        assert parse_rational(text) == value

    @pytest.mark.parametrize("text", ["", "1.5", "1/0", "a", "1/-2", "1e3", "--1"])
    def test_parse_rejects(self, text):
        with pytest.raises(ValueError):
            parse_rational(text)

    @given(st.fractions())
    def test_format_roundtrip(self, x):
        assert parse_rational(format_rational(x)) == x


class TestPoly:
    def test_arithmetic(self):
        z = Poly.x()
        p = (z + 1) ** 3
        assert p.coeffs == (1, 3, 3, 1)
        assert p.derivative() == 3 * (z + 1) ** 2
        q, r = p.divmod(z + 1)
        assert q == (z + 1) ** 2 and r.is_zero()
        assert p(Fraction(1, 2)) == Fraction(27, 8)

    def test_degree_and_ord(self):
        assert Poly.zero().degree == -1
        assert Poly([0, 0, 2, 1]).ord() == 2

    @given(polys, polys)
    def test_ring_laws(self, a, b):
        assert a * b == b * a
        assert (a + b) - b == a
        if not b.is_zero():
            q, r = a.divmod(b)
            assert q * b + r == a
            assert r.degree < b.degree

    @given(polys, st.fractions(max_denominator=10, min_value=-5, max_value=5))
    def test_taylor_shift(self, p, a):
        x = Fraction(3, 7)
        assert p.taylor_shift(a)(x) == p(x + a)

    @given(polys, polys)
    def test_gcd_divides(self, a, b):
        if a.is_zero() and b.is_zero():
            return
        g = poly_gcd(a, b)
        for f in (a, b):
            if not f.is_zero():
                assert f.divmod(g)[1].is_zero()

    def test_json_roundtrip(self):
        p = Poly([Fraction(1, 3), 0, -2])
        assert Poly.from_json(p.to_json()) == p

    def test_falling(self):
        f = Poly.falling(0, 3, "n")
        assert [f(n) for n in range(5)] == [0, 0, 0, 6, 24]


class TestRoots:
    @settings(max_examples=50)
    @given(
        st.lists(st.fractions(max_denominator=6, min_value=-4, max_value=4), min_size=1, max_size=5),
        st.lists(st.integers(1, 3), min_size=5, max_size=5),
    )
    def test_multiplicities_exact(self, roots, mults):
        p = Poly.const(1)
        expected = []
        for r, m in zip(roots, mults):
            p = p * Poly((-r, 1)) ** m
            expected += [r] * m
        got, complete = rational_roots(p * 7)
        assert complete
        assert got == sorted(expected)

    def test_irrational_part_flags_incomplete(self):
        got, complete = rational_roots(Poly([-2, 0, 1]) * Poly([-1, 1]))
        assert got == [1] and not complete


class TestPrimes:
    def test_primes_match_sympy(self):
        assert primes_up_to(1000) == list(sympy.primerange(2, 1001))
        assert all(is_prime(p) == sympy.isprime(p) for p in range(-3, 500))

    def test_window(self):
        assert PrimeWindow(5, 20).primes() == [5, 7, 11, 13, 17, 19]
        with pytest.raises(ValueError):
            PrimeWindow(10, 5)
        with pytest.raises(ValueError):
            PrimeWindow(1, 5)


class TestDn:
    def test_small_values(self):
        assert [Dn(n) for n in range(11)] == [1, 1, 2, 6, 12, 60, 60, 420, 840, 2520, 2520]

    def test_recurrence_identity(self):
        # D_n = p D_{n-1} when n is a power of the prime p, else D_n = D_{n-1}
        for n in range(2, 501):
            f = sympy.factorint(n)
            ratio = next(iter(f)) if len(f) == 1 else 1
            assert Dn(n) == ratio * Dn(n - 1)
            assert Dn(n) == math.lcm(*range(1, n + 1))

    def test_valuation_is_floor_log(self):
        for p in (2, 3, 5, 7):
            for n in range(1, 300):
                assert vp(Dn(n), p) == floor_log(n, p) == vp_Dn(n, p)
        assert floor_log(0, 2) == 0


def check_valuation_laws(x, y, p):
    assert vp(x * y, p) == vp(x, p) + vp(y, p)
    assert vp(1 / x, p) == -vp(x, p)
    if x + y != 0:
        assert vp(x + y, p) >= min(vp(x, p), vp(y, p))
        if vp(x, p) != vp(y, p):
            assert vp(x + y, p) == min(vp(x, p), vp(y, p))


def random_rationals(count, seed=0):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        num = rng.randint(-10**9, 10**9) * rng.choice([1, 2**rng.randint(0, 20), 3**rng.randint(0, 12)])
        den = rng.randint(1, 10**9) * rng.choice([1, 2**rng.randint(0, 20), 5**rng.randint(0, 9)])
        if num:
            out.append(Fraction(num, den))
    return out


class TestValuationLaws:
    @settings(max_examples=300)
    @given(nonzero_rationals, nonzero_rationals, small_primes)
    def test_laws(self, x, y, p):
        check_valuation_laws(x, y, p)

    def test_laws_on_ten_thousand(self):
        xs = random_rationals(10_000, seed=1)
        ys = random_rationals(10_000, seed=2)
        for i, (x, y) in enumerate(zip(xs, ys)):
            check_valuation_laws(x, y, (2, 3, 5, 7)[i % 4])

    def test_zero_raises(self):
        with pytest.raises(ValueError):
            vp(0, 3)


class TestLcm:
    @given(st.lists(st.fractions(max_denominator=1000), max_size=20), st.fractions(max_denominator=1000))
    def test_monotone(self, xs, extra):
        d = lcm_denominators(xs)
        d2 = lcm_denominators(xs + [extra])
        assert d2 % d == 0
        assert all((x * d).denominator == 1 for x in xs)
