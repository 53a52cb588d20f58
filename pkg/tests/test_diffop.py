from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gdenom.diffop import (
    DiffOp,
    b_from_exponents,
    compute_b,
    derivative_op,
    exponents_at,
    exponents_at_zero,
    from_theta_form,
    indicial_polynomial,
    invert,
    is_regular_at_zero,
    left_compose_derivative,
    pullback_power,
    shift,
    to_theta_form,
)
from gdenom.numkernel import Poly

small_q = st.fractions(max_denominator=4, min_value=-6, max_value=6)


@st.composite
def operators(draw, max_order=3, max_deg=3):
    mu = draw(st.integers(1, max_order))
    cs = [Poly(draw(st.lists(small_q, max_size=max_deg + 1))) for _ in range(mu + 1)]
    if cs[-1].is_zero():
        cs[-1] = Poly(draw(st.lists(small_q, min_size=1, max_size=max_deg + 1)).__add__([1]))
    return DiffOp(cs)


def euler_op(exponents) -> DiffOp:
    """prod (theta - e), written in D."""
    s = Poly([0, 1], "s")
    f = Poly.const(1, "s")
    for e in exponents:
        f = f * (s - Poly.const(e, "s"))
    return from_theta_form({0: f})


def test_order_must_be_positive():
    with pytest.raises(ValueError):
        DiffOp([Poly([1])])


def test_composition_matches_application(apery_L):
    y = Poly([1, -2, Fraction(1, 3), 5, 0, 7])
    D = derivative_op()
    assert (D * apery_L).apply(y) == apery_L.apply(y).derivative()
    assert (apery_L * D).apply(y) == apery_L.apply(y.derivative())


def test_json_roundtrip(apery_L):
    assert DiffOp.from_json(apery_L.to_json()) == apery_L


def test_apery_exponents(apery_L):
    rep = exponents_at_zero(apery_L)
    assert rep.exponents == (0, 0, 0) and rep.regular and rep.all_rational
    assert indicial_polynomial(apery_L) == Poly([0, 0, 0, 1])
    assert exponents_at_zero(shift(apery_L, 1)).exponents == (0, 1, 2)
    assert exponents_at(apery_L, "inf").exponents == (1, 1, 1)


def test_irregular_point_detected():
    # z^2 D - 1 has an irregular singularity at 0
    assert not is_regular_at_zero(DiffOp([Poly([-1]), Poly([0, 0, 1])]))
    assert is_regular_at_zero(DiffOp([Poly([-1]), Poly([0, 1])]))


def test_b_from_half_integers():
    L = euler_op([0, 1, Fraction(1, 2)])
    assert sorted(exponents_at_zero(L).exponents) == [0, Fraction(1, 2), 1]
    assert compute_b(L) == 2
    P = pullback_power(L, 2)
    assert sorted(exponents_at_zero(P).exponents) == [0, 1, 2]
    assert b_from_exponents([Fraction(1, 3), Fraction(1, 4)]) == 12


@settings(max_examples=40)
@given(st.lists(st.fractions(max_denominator=6, min_value=-3, max_value=3), min_size=1, max_size=3), st.integers(1, 4))
def test_pullback_scales_exponents(exps, b):
    L = euler_op(exps)
    got = sorted(exponents_at_zero(pullback_power(L, b)).exponents)
    assert got == sorted(b * e for e in exps)


@settings(max_examples=40)
@given(operators())
def test_theta_roundtrip(L):
    # the theta form describes z^mu L
    back = from_theta_form(to_theta_form(L))
    assert back == DiffOp([c.shift_degree(L.order) for c in L.coeffs])
    assert from_theta_form(to_theta_form(L), strip_z=True).normalized() == L.normalized(strip_z=True)


@settings(max_examples=30)
@given(operators(), small_q, small_q)
def test_shift_group_law(L, a, b):
    assert shift(shift(L, a), b) == shift(L, a + b)
    assert shift(L, 0) == L


def test_shift_matches_substitution(apery_L):
    y = Poly([3, 1, -1, 2])
    a = Fraction(2, 3)
    # (L_a y)(z) = (L y(. - a))(z + a)
    lhs = shift(apery_L, a).apply(y)
    rhs = apery_L.apply(y.taylor_shift(-a)).taylor_shift(a)
    assert lhs == rhs


def test_invert_is_involution_up_to_normalization():
    L = DiffOp([Poly([-1]), Poly([1, -1])])
    assert exponents_at_zero(invert(L)).exponents == (1,)
    assert invert(invert(L)).normalized() == L.normalized()
    assert invert(derivative_op()).normalized() == derivative_op().normalized()


def test_left_composition_adds_exponent(apery_L):
    L4 = left_compose_derivative(apery_L, 0)
    assert L4.order == 4
    assert exponents_at_zero(L4).exponents == (0, 0, 0, 1)
    assert left_compose_derivative(apery_L, 1).order == 5


def test_normalized_is_primitive_with_positive_lead():
    L = DiffOp([Poly([Fraction(2, 3)]), Poly([0, Fraction(-4, 3)])])
    N = L.normalized()
    assert N.coeffs == (Poly([-1]), Poly([0, 2]))
