"""Truncated power series arithmetic."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from regsum.power_series import (
    DomainError,
    NonUnitError,
    OrderExceededError,
    PowerSeries,
    cosh_series,
    exp_series,
    geometric_series,
    log1p_series,
    working_order,
)

small_rationals = st.fractions(min_value=-6, max_value=6, max_denominator=6)


def test_constructor_requires_a_term():
    with pytest.raises(ValueError):
        PowerSeries([])


def test_order_and_coeff():
    s = PowerSeries([1, 2, 3])
    assert s.order == 2
    assert s.coeff(1) == 2
    assert s.constant_term() == 1
    with pytest.raises(OrderExceededError):
        s.coeff(3)
    with pytest.raises(OrderExceededError):
        s.coeff(-1)


def test_truncate():
    s = PowerSeries([1, 2, 3])
    assert s.truncate(1).coeffs == (Fraction(1), Fraction(2))
    with pytest.raises(OrderExceededError):
        s.truncate(5)


def test_equality_up_to_common_order():
    assert PowerSeries([1, 2]) == PowerSeries([1, 2, 99])
    assert PowerSeries([1, 2]) != PowerSeries([1, 3])


def test_constant_and_t():
    assert PowerSeries.constant(5, 3).coeffs == (5, 0, 0, 0)
    assert PowerSeries.t(2).coeffs == (0, 1, 0)
    with pytest.raises(ValueError):
        PowerSeries.t(0)


def test_from_function():
    s = PowerSeries.from_function(lambda n: Fraction(1, n + 1), 3)
    assert s.coeffs == (1, Fraction(1, 2), Fraction(1, 3), Fraction(1, 4))


def test_mul_golden():
    a = PowerSeries([1, 1, 0, 0])
    assert (a * a).coeffs == (1, 2, 1, 0)


def test_pow():
    a = PowerSeries([1, 1, 0, 0])
    assert a ** 3 == a * a * a
    assert (a ** 0) == PowerSeries.constant(1, 3)
    with pytest.raises(ValueError):
        a ** -1


def test_scalar_mul_both_sides():
    s = PowerSeries([1, 2])
    assert (s * Fraction(1, 2)).coeffs == (Fraction(1, 2), 1)
    assert (Fraction(1, 2) * s).coeffs == (Fraction(1, 2), 1)
    assert s.scale(2).coeffs == (2, 4)


def test_geometric_series_inverts_linear_factor():
    r = Fraction(2, 3)
    g = geometric_series(r, 10)
    linear = PowerSeries.constant(1, 10) - PowerSeries.t(10) * r
    assert g * linear == PowerSeries.constant(1, 10)
    assert g.coeff(4) == r ** 4


def test_inverse_round_trip():
    s = PowerSeries([2, "1/3", -1, 4, 0, 1])
    assert s * s.inverse() == PowerSeries.constant(1, s.order)


def test_inverse_needs_unit():
    with pytest.raises(NonUnitError):
        PowerSeries([0, 1]).inverse()


def test_exp_series_coefficients():
    h = Fraction(1, 2)
    e = exp_series(h, 6)
    for n in range(7):
        assert e.coeff(n) == h ** n / math.factorial(n)


def test_exp_needs_zero_constant():
    with pytest.raises(DomainError):
        PowerSeries([1, 1]).exp()


def test_log_needs_unit_constant():
    with pytest.raises(DomainError):
        PowerSeries([2, 1]).log()


def test_exp_log_round_trip():
    f = PowerSeries([0, 1, "-1/2", "1/3", 2, 0, "5/7"])
    assert f.exp().log() == f
    g = PowerSeries([1, "1/2", 3, 0, -1])
    assert g.log().exp() == g


def test_log1p_exp_is_one_plus_t():
    n = 9
    assert log1p_series(n).exp() == PowerSeries.constant(1, n) + PowerSeries.t(n)


def test_derivative_and_integral():
    s = PowerSeries([3, 1, 4, 1])
    assert s.derivative().coeffs == (1, 8, 3)
    assert s.integral().coeffs == (0, 3, Fraction(1, 2), Fraction(4, 3), Fraction(1, 4))
    assert s.integral().derivative() == s


def test_compose_golden():
    # 1/(1-t) composed with t/(1+t)... checked against (1+t) directly:
    # substituting t -> -t in 1/(1-t) gives 1/(1+t)
    outer = geometric_series(1, 8)
    inner = -PowerSeries.t(8)
    assert outer.compose(inner) == geometric_series(-1, 8)
    with pytest.raises(DomainError):
        outer.compose(PowerSeries.constant(1, 8))


def test_partial_sums():
    s = PowerSeries([1, -1, 1, -1])
    assert s.partial_sums().coeffs == (1, 0, 1, 0)
    assert geometric_series(1, 4).partial_sums().coeffs == (1, 2, 3, 4, 5)


def test_cosh_series_even_coefficients():
    c = cosh_series(8)
    for n in range(9):
        expect = Fraction(1, math.factorial(n)) if n % 2 == 0 else Fraction(0)
        assert c.coeff(n) == expect


def test_cosh_inverse_starts_like_sech():
    inv = cosh_series(6).inverse()
    assert inv.coeff(0) == 1
    assert inv.coeff(2) == Fraction(-1, 2)
    assert inv.coeff(4) == Fraction(5, 24)


def test_strings_round_trip():
    s = PowerSeries(["1/2", "-3", "0"])
    assert s.to_strings() == ["1/2", "-3", "0"]
    assert PowerSeries.from_strings(s.to_strings()) == s


def test_str_rendering():
    assert str(PowerSeries([1, "1/2", 0])) == "1 + 1/2*t + O(t^3)"


def test_working_order_padding():
    assert working_order(3) == 7
    assert working_order(2, 5) == 9
    assert working_order() >= 4


@given(st.lists(small_rationals, min_size=1, max_size=8),
       st.lists(small_rationals, min_size=1, max_size=8))
def test_mul_commutes(a, b):
    sa, sb = PowerSeries(a), PowerSeries(b)
    assert sa * sb == sb * sa


@given(small_rationals, small_rationals)
def test_exp_turns_sums_into_products(a, b):
    assert exp_series(a, 8) * exp_series(b, 8) == exp_series(a + b, 8)


@given(st.lists(small_rationals, min_size=1, max_size=8))
def test_derivative_of_integral_returns_input(cs):
    s = PowerSeries(cs)
    assert s.integral().derivative() == s
