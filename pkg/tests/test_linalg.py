import numpy as np
import pytest

from core.errors import PreconditionFailed
from core.linalg import (
    AbelianInvariants,
    determinant,
    express_in_basis,
    int_matrix,
    integer_rank,
    left_kernel,
    quotient_invariants,
    right_kernel,
    smith_normal_form,
    sub_quotient_invariants,
    xgcd,
)


def _is_zero(m):
    return all(v == 0 for v in np.asarray(m).flat)


def test_xgcd():
    for a, b in [(12, 18), (7, 5), (0, 9), (-4, 6), (35, 0)]:
        x, y, g = xgcd(a, b)
        assert x * a + y * b == g
        assert g >= 0


def test_smith_diag_two_three():
    snf = smith_normal_form(int_matrix([[2, 0], [0, 3]]))
    assert snf.diagonal == [1, 6]
    assert snf.rank == 2


def test_smith_is_a_factorization():
    cases = [
        [[2, 4, 4], [-6, 6, 12], [10, -4, -16]],
        [[1, 2], [3, 4], [5, 6]],
        [[0, 0], [0, 0]],
        [[6]],
    ]
    for rows in cases:
        m = int_matrix(rows)
        snf = smith_normal_form(m)
        assert (snf.U.dot(m).dot(snf.V) == snf.D).all()
        assert abs(determinant(snf.U)) == 1
        assert abs(determinant(snf.V)) == 1
        d = snf.nonzero_diagonal
        assert all(v > 0 for v in d)
        assert all(d[i + 1] % d[i] == 0 for i in range(len(d) - 1))


def test_known_diagonals():
    assert smith_normal_form(int_matrix([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])).diagonal == [2, 6, 12]
    assert smith_normal_form(int_matrix([[1, 2], [3, 4], [5, 6]])).diagonal == [1, 2]


def test_determinant():
    assert determinant(int_matrix([[2, 0], [0, 3]])) == 6
    assert determinant(int_matrix([[0, 1], [1, 0]])) == -1
    assert determinant(int_matrix([[1, 2], [2, 4]])) == 0


def test_kernels():
    m = int_matrix([[1, 2], [2, 4], [0, 1]])
    K = left_kernel(m)
    assert K.shape[0] == 1
    assert _is_zero(K.dot(m))
    R = right_kernel(int_matrix([[1, 1, 1]]))
    assert R.shape[1] == 2
    assert _is_zero(int_matrix([[1, 1, 1]]).dot(R))
    assert integer_rank(m) == 2


def test_express_in_basis():
    basis = int_matrix([[2, 0], [0, 3]])
    coords = express_in_basis(basis, int_matrix([[4, 9]]))
    assert list(coords[0]) == [2, 3]
    with pytest.raises(PreconditionFailed):
        express_in_basis(basis, int_matrix([[1, 0]]))


def test_abelian_invariants_strings():
    cases = [
        (AbelianInvariants(), "0"),
        (AbelianInvariants(1, (6,)), "Z + C_6"),
        (AbelianInvariants(2), "Z^2"),
        (AbelianInvariants(0, (2, 2)), "C_2 + C_2"),
    ]
    for inv, text in cases:
        assert str(inv) == text
        assert AbelianInvariants.from_string(text) == inv


def test_invariant_orders():
    assert AbelianInvariants(0, (2, 6)).order == 12
    assert AbelianInvariants(1).order is None
    assert AbelianInvariants(0, (12,)).elementary_divisors() == [3, 4]
    assert AbelianInvariants().is_trivial


def test_quotients():
    assert quotient_invariants(int_matrix([[2, 0], [0, 3]]), 2) == AbelianInvariants(0, (6,))
    assert quotient_invariants(int_matrix([], 3), 3) == AbelianInvariants(3)
    kernel = int_matrix([[1, 0], [0, 1]])
    assert sub_quotient_invariants(kernel, int_matrix([[4, 0]])) == AbelianInvariants(1, (4,))
