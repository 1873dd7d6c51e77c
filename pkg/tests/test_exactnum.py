from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from classchain.exactnum import (
    PowerSeries,
    RationalInterval,
    finite_q_product,
    format_rational,
    infinite_product_enclosure,
    product_enclosure,
    product_series_coefficients,
    q_product_series,
    series_divide_one_minus,
    tail_bound,
    to_rational,
    unitary_prefactor_series,
)

rationals = st.fractions(min_value=-10, max_value=10, max_denominator=50)


def test_to_rational():
    assert to_rational("1/2") == F(1, 2)
    assert to_rational(3) == 3
    with pytest.raises(TypeError):
        to_rational(0.5)
    with pytest.raises(ValueError):
        to_rational("abc")
    assert format_rational(F(3)) == "3/1"


@given(rationals, rationals, rationals, rationals)
def test_interval_ops_contain_point_results(a, b, c, d):
    x = RationalInterval(min(a, b), max(a, b))
    y = RationalInterval(min(c, d), max(c, d))
    for px in (x.lo, x.hi, x.mid):
        for py in (y.lo, y.hi):
            assert px + py in x + y
            assert px - py in x - y
            assert px * py in x * y


def test_interval_rejects_empty_and_zero_division():
    with pytest.raises(ValueError):
        RationalInterval(1, 0)
    with pytest.raises(ZeroDivisionError):
        RationalInterval(-1, 1).reciprocal()


def test_outward_contains():
    x = RationalInterval(F(1, 3), F(2, 3))
    y = x.outward(10)
    assert y.lo <= x.lo and x.hi <= y.hi
    assert y.width <= x.width + F(2, 1024)


def test_finite_q_product():
    assert finite_q_product(3, 2) == 8 * 80
    assert finite_q_product(3, 0) == 1


@pytest.mark.parametrize("q", [3, 5, 9])
@pytest.mark.parametrize("u2", [F(1, 100), F(1, 4), F(1)])
def test_infinite_product_enclosure(q, u2):
    eps = F(1, 10**15)
    iv = infinite_product_enclosure(u2, q, eps)
    assert iv.width <= eps
    # the limit lies in [p (1 - T), p] for a partial product p and its tail bound T
    p = F(1)
    for r in range(1, 12):
        p *= 1 - u2 / F(q) ** (2 * r - 1)
    assert iv.lo <= p
    assert p * (1 - tail_bound(u2, q, 11)) <= iv.hi


def test_product_enclosure_increasing():
    # prod (1 + 2^-r) over r >= 1 lies in (2.38, 2.39)
    iv = product_enclosure(lambda r: 1 + F(1, 2**r), lambda R: F(1, 2**R), F(1, 10**12), kind="increasing")
    assert F(238, 100) < iv.lo and iv.hi < F(239, 100)


def test_power_series_algebra():
    a = PowerSeries([1, 1], 5)
    b = series_divide_one_minus(PowerSeries.one(5), 1)
    assert list((a * b).coeffs) == [1, 2, 2, 2, 2]
    assert PowerSeries.monomial(2, 3, 4)[2] == 3
    with pytest.raises(IndexError):
        a[7]


def test_q_product_series_matches_truncated_product():
    # prod_{r>=1}(1 - x/2^r) vs expansion, compared through x^3 with many factors
    coeffs = q_product_series(1, 2, 4)
    direct = PowerSeries.one(4)
    for r in range(1, 60):
        direct = direct * PowerSeries([1, -F(1, 2**r)], 4)
    for n in range(4):
        assert abs(direct[n] - coeffs[n]) < F(1, 2**50)


def test_product_series_coefficients():
    s = product_series_coefficients(3, 2)
    assert s[0] == 1 and s[1] == 0
    assert s[2] == F(-3, 8)
    assert unitary_prefactor_series(3, 2)[1] == F(-1, 4)
