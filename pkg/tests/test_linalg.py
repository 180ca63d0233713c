from __future__ import annotations

from fractions import Fraction as F

import pytest

from uqbethe.errors import PivotError
from uqbethe.linalg import (
    Matrix,
    basis_vector,
    kron,
    kron_all,
    lincomb,
    op_matmul,
    vec_kron,
)


def _m(rows):
    return Matrix.from_dense([[F(x) for x in r] for r in rows])


def test_identity_and_product():
    a = _m([[1, 2], [3, 4]])
    assert a @ Matrix.identity(2) == a
    assert (a @ a).to_dense() == [[7, 10], [15, 22]]


def test_inverse_roundtrip():
    a = _m([[2, 1, 0], [1, 3, 1], [0, 1, 4]])
    assert a @ a.inverse() == Matrix.identity(3)


def test_inverse_singular():
    with pytest.raises(PivotError):
        _m([[1, 2], [2, 4]]).inverse()


def test_zero_entries_dropped():
    a = _m([[0, 1], [0, 0]])
    assert a.nnz() == 1
    assert (a - a).is_zero()
    assert a.with_entry(0, 1, 0).is_zero()


def test_kron_major_index():
    a = _m([[1, 2], [3, 4]])
    b = Matrix.identity(2)
    k = kron(a, b)
    assert k[0, 2] == 2 and k[2, 0] == 3 and k[1, 3] == 2
    assert kron_all([a, b, b]).shape == (8, 8)


def test_kron_matches_vector_kron():
    a = _m([[1, 2], [0, 1]])
    b = _m([[3, 0], [1, 1]])
    x, y = (F(1), F(2)), (F(-1), F(5))
    assert kron(a, b).apply(vec_kron(x, y)) == vec_kron(a.apply(x), b.apply(y))


def test_lincomb():
    a = _m([[1, 2], [3, 4]])
    b = _m([[0, 1], [1, 0]])
    assert lincomb(2, 2, [(F(2), a), (F(-1), b)]) == a.scale(2) - b
    assert lincomb(2, 2, [(F(1), a), (F(-1), a)]).is_zero()


def test_op_matmul_scalar_case():
    one = Matrix.identity(1)
    grid = [[one.scale(1), one.scale(2)], [one.scale(3), one.scale(4)]]
    out = op_matmul(grid, grid)
    assert [[x[0, 0] for x in row] for row in out] == [[7, 10], [15, 22]]


def test_basis_vector():
    assert basis_vector(3, 1) == (0, 1, 0)


def test_integer_combination_zero_test():
    from uqbethe.linalg import IntMatrix, int_combination_rows

    a = _m([[F(1, 2), F(1, 3)], [0, F(2, 5)]])
    b = _m([[F(3, 4), 0], [F(1, 6), 1]])
    ia, ib = IntMatrix.from_matrix(a), IntMatrix.from_matrix(b)
    prod = ia @ ib
    assert int_combination_rows([(F(1), prod)]) != {}
    # c * (A B) - c * (A B) vanishes
    assert int_combination_rows([(F(2, 7), prod), (F(-2, 7), prod)]) == {}
    # agrees with the exact product up to a positive scale
    exact = (a @ b).to_dense()
    rows = int_combination_rows([(F(1), prod)])
    ratio = None
    for i in range(2):
        for j in range(2):
            got = rows.get(i, {}).get(j, 0)
            if exact[i][j]:
                r = F(got) / exact[i][j]
                assert r > 0 and (ratio is None or r == ratio)
                ratio = r
            else:
                assert got == 0
