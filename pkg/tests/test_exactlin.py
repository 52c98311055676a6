import numpy as np
import pytest

from relhom.core.exceptions import DimensionMismatchError
from relhom.linalg.exactlin import (
    FieldSpec,
    Matrix,
    annihilator,
    image_basis,
    kernel_basis,
    rank,
    right_inverse,
    rref,
    solve,
)


def test_field_must_be_prime():
    with pytest.raises(DimensionMismatchError) as exc:
        FieldSpec(4)
    assert exc.value.error_code == "FIELD_NOT_PRIME"


def test_field_inverse_and_sign():
    f = FieldSpec(5)
    assert (3 * f.inv(3)) % 5 == 1
    assert f.sign(1) == 4
    assert f.sign(2) == 1
    with pytest.raises(ZeroDivisionError):
        f.inv(10)


def test_matrix_is_reduced_and_read_only(p):
    m = Matrix(p, [[p + 1, -1]])
    assert m.tolist() == [[1, p - 1]]
    with pytest.raises(ValueError):
        m.array[0, 0] = 0


def test_matrix_requires_two_dimensions():
    with pytest.raises(DimensionMismatchError) as exc:
        Matrix(2, [1, 0, 1])
    assert exc.value.error_code == "MATRIX_NOT_2D"


def test_product_shape_mismatch():
    with pytest.raises(DimensionMismatchError):
        Matrix.identity(2, 2) @ Matrix.identity(2, 3)


def test_rank_mod_p():
    # [[1, 2], [2, 4]] est de rang 1 sur tout corps
    assert rank(Matrix(3, [[1, 2], [2, 4]])) == 1
    # [[1, 1], [1, -1]] est singulière en caractéristique 2 seulement
    assert rank(Matrix(2, [[1, 1], [1, -1]])) == 1
    assert rank(Matrix(3, [[1, 1], [1, -1]])) == 2


def test_rref_pivots(p):
    r, pivots, rk = rref(Matrix(p, [[0, 1, 1], [0, 2, 2], [1, 0, 1]]))
    assert rk == 2
    assert pivots == [0, 1]
    assert r.tolist()[0][0] == 1


def test_solve_returns_solution(p):
    a = Matrix(p, [[1, 1], [0, 1]])
    b = Matrix(p, [[1], [1]])
    x = solve(a, b)
    assert x is not None
    assert a @ x == b


def test_solve_incompatible_system():
    a = Matrix(2, [[1], [1]])
    b = Matrix(2, [[0], [1]])
    assert solve(a, b) is None


def test_kernel_basis_annihilates(p):
    a = Matrix(p, [[1, 2, 3], [2, 4, 6]])
    k = kernel_basis(a)
    assert k.cols == 3 - rank(a)
    assert (a @ k).is_zero()


def test_kernel_of_empty_matrix_is_everything(p):
    k = kernel_basis(Matrix.zeros(p, 0, 3))
    assert k == Matrix.identity(p, 3)


def test_image_basis_spans_image(p):
    a = Matrix(p, [[1, 1, 0], [0, 0, 1]])
    im = image_basis(a)
    assert im.cols == rank(a) == 2


def test_annihilator_and_section(p):
    u = Matrix(p, [[1], [1], [0]])
    q = annihilator(u)
    assert q.rows == 2
    assert (q @ u).is_zero()
    s = right_inverse(q)
    assert q @ s == Matrix.identity(p, q.rows)


def test_right_inverse_requires_full_row_rank():
    with pytest.raises(DimensionMismatchError) as exc:
        right_inverse(Matrix(2, [[1, 1], [1, 1]]))
    assert exc.value.error_code == "NO_RIGHT_INVERSE"


def test_block_assembly():
    m = Matrix.block(2, [1, 2], [1, 1], [(0, 0, Matrix(2, [[1]])), (1, 1, Matrix(2, [[1], [1]]))])
    assert m.shape == (3, 2)
    assert np.array_equal(m.array, np.array([[1, 0], [0, 1], [0, 1]]))
