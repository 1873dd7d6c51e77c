from fractions import Fraction as F

import numpy as np
import pytest

from classchain.measures import MeasureParams
from classchain.oracle.compare import (
    exact_fixed_table,
    exact_isometry_table,
    exact_shape_table,
    mixture_compare,
    oracle_fraction,
)
from classchain.oracle.fields import least_nonsquare, prime_field, quadratic_field
from classchain.oracle.groups import (
    BudgetExceeded,
    build_group,
    build_orthogonal,
    build_symplectic,
    build_unitary,
    class_statistics,
    closure,
    decode_array,
    encode_array,
    isometry_statistics,
)
from classchain.oracle.linalg import batch_jordan_columns, batch_rank, jordan_type_at_one, rank
from classchain.partitions import Partition


def test_fields():
    assert least_nonsquare(3) == 2 and least_nonsquare(7) == 3
    F9 = quadratic_field(3)
    for x in F9.nonzero():
        assert F9.mul[x][F9.inv[x]] == 1
        assert F9.conj[F9.conj[x]] == x
        assert F9.norm(x) < 3  # the norm lands in F_3
    with pytest.raises(ValueError):
        prime_field(4)


def test_scalar_and_batched_rank_agree():
    rng = np.random.default_rng(0)
    A = rng.integers(0, 3, size=(200, 4, 4))
    F3 = prime_field(3)
    want = [rank(tuple(map(tuple, a.tolist())), F3) for a in A]
    assert batch_rank(A, 3).tolist() == want


def test_jordan_type():
    F5 = prime_field(5)
    J = ((1, 1, 0), (0, 1, 0), (0, 0, 2))
    assert jordan_type_at_one(J, F5) == Partition((2,))
    assert batch_jordan_columns(np.array([J]), 5) == [(1, 1)]
    assert jordan_type_at_one(((1, 0), (0, 1)), F5) == Partition((1, 1))


def test_encoding_round_trip():
    A = np.arange(2 * 9).reshape(2, 3, 3) % 5
    assert np.array_equal(decode_array(encode_array(A, 5), 3, 5), A)


def test_closure_of_a_cyclic_group():
    g = np.array([[[0, 2], [1, 0]]])  # order 4 over F_3
    assert closure(g, 3).size == 4


@pytest.mark.parametrize(
    "n,p,order",
    [(1, 3, 24), (1, 5, 120), (2, 3, 51840)],
)
def test_symplectic_orders(n, p, order):
    assert len(build_symplectic(n, p)) == order


def test_orthogonal_orders_and_labels():
    got = {build_orthogonal(d, 3, w).label: len(build_orthogonal(d, 3, w)) for d in (2, 3, 4) for w in ("identity", "delta")}
    assert got == {"O+(2,3)": 4, "O-(2,3)": 8, "O(3,3)": 48, "O+(4,3)": 1152, "O-(4,3)": 1440}


def test_unitary_orders():
    assert len(build_unitary(1, 3)) == 4
    assert len(build_unitary(2, 3)) == 96


def test_budget(monkeypatch):
    monkeypatch.setenv("CLASSCHAIN_BUDGET", "100")
    with pytest.raises(BudgetExceeded):
        build_symplectic(2, 3)
    with pytest.raises(BudgetExceeded):
        build_group("sp", 4, 3, budget=10)


def test_class_statistics_sl23():
    st = class_statistics(build_symplectic(1, 3))
    assert st.unipotent == 9
    assert dict(st.fixed_dim) == {0: 15, 1: 8, 2: 1}
    assert st.jordan[Partition((2,))] == 8
    assert st.to_json("Sp(2,3)", 2)["fixed_dim"] == {"0": 15, "1": 8, "2": 1}


def test_unitary_isometry_histogram():
    iso = isometry_statistics(build_unitary(2, 3))
    assert iso == {(0, 0): 69, (1, 0): 18, (2, 0): 1, (0, 1): 8}


@pytest.mark.parametrize("family,n", [("Sp", 1), ("Sp", 2), ("O", 2), ("O", 3), ("O", 4)])
def test_exact_tables(family, n):
    assert all(r["ok"] for r in exact_shape_table(family, n, 3))
    assert all(r["ok"] for r in exact_fixed_table(family, n, 3))


def test_exact_isometry_table():
    assert all(r["ok"] for r in exact_isometry_table(2, 3))


def test_oracle_fraction_dimension_zero():
    assert oracle_fraction("O", Partition(()), 0, 3) == 1
    assert oracle_fraction("Sp", Partition(()), 0, 3) == 1


def test_mixture_compare():
    r = mixture_compare("sp", Partition((2,)), MeasureParams(F(1, 10), F(3)), 2)
    assert r["ok"]
    with pytest.raises(ValueError):
        mixture_compare("sp", Partition((2,)), MeasureParams(F(1, 10), F(9, 2)), 1)
