from fractions import Fraction as F

import pytest

from classchain.grouptheory import (
    GroupSpec,
    QScaled,
    a_o,
    a_sp,
    group_order,
    inv_a_lumped,
    order_gl,
    order_o,
    order_sp,
    order_u,
    orthogonal_sign_sum,
    orthogonal_sign_sum_closed,
)


def test_small_orders():
    assert order_sp(2, 3) == 24
    assert order_sp(2, 5) == 120
    assert order_sp(4, 3) == 51840
    assert (order_o(2, 3, "+"), order_o(2, 3, "-")) == (4, 8)
    assert order_o(3, 3) == 48
    assert (order_o(4, 3, "+"), order_o(4, 3, "-")) == (1152, 1440)
    assert order_o(0, 3) == 1
    assert order_u(1, 3) == 4
    assert order_u(2, 3) == 96
    assert order_gl(2, 3) == 48


def test_group_spec():
    assert group_order(GroupSpec("Sp", 4, 3)) == 51840
    assert GroupSpec("O", 4, 3, "-").label() == "O-(4,3)"
    with pytest.raises(ValueError):
        GroupSpec("Sp", 3, 3)
    with pytest.raises(ValueError):
        GroupSpec("O", 4, 3)


@pytest.mark.parametrize("q", [3, 5, 9])
@pytest.mark.parametrize("m", range(1, 8))
def test_orthogonal_sign_sum_closed(q, m):
    assert orthogonal_sign_sum(m, q) == orthogonal_sign_sum_closed(m, q)


def test_qscaled():
    x = QScaled(1, F(2))
    assert not x.integral
    assert (x * x).resolve(3) == 12
    assert x.reciprocal().reciprocal() == x
    with pytest.raises(ArithmeticError):
        x.resolve(3)


def test_a_factors_validate():
    assert a_sp(1, 2, None, 3).resolve(3) == order_sp(2, 3)
    assert a_sp(2, 2, "+", 3).resolve(3) == 3 * order_o(2, 3, "+")
    assert a_o(2, 2, None, 3).resolve(3) == order_sp(2, 3) / 3
    with pytest.raises(ValueError):
        a_sp(1, 1, None, 3)
    with pytest.raises(ValueError):
        a_sp(2, 1, None, 3)
    with pytest.raises(ValueError):
        a_o(2, 1, None, 3)


def test_inv_a_lumped_sums_signs():
    q = 5
    got = inv_a_lumped("sp", 2, 3, q)
    want = a_sp(2, 3, "+", q).reciprocal() + a_sp(2, 3, "-", q).reciprocal()
    assert got == want
