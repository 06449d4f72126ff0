from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from quivaut.exactfield import (
    FieldError,
    Matrix,
    ModP,
    PrimeField,
    SingularMatrixError,
    Subspace,
    field_from_spec,
    get_field,
    invert_matrix,
    kernel,
    rref,
    set_field,
    show_linear,
    subspace_intersection,
    subspace_sum,
    using_field,
)

small = st.integers(min_value=-5, max_value=5)


def matrices(rows=3, cols=3):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def test_rref_examples():
    assert rref(Matrix([[2, 4], [1, 2]])) == Matrix([[1, 2]]) or rref(Matrix([[2, 4], [1, 2]])) == Matrix([[1, 2], [0, 0]])
    assert Matrix([[2, 4], [1, 2]]).rank() == 1
    assert rref(Matrix.identity(3)) == Matrix.identity(3)
    R = rref(Matrix([[0, 1], [1, 0]]))
    assert R == Matrix.identity(2)


def test_kernel_examples():
    K = kernel(Matrix([[1, 1]]))
    assert K.dim == 1 and K.contains((1, -1))
    assert kernel(Matrix.identity(3)).dim == 0
    K = kernel(Matrix([[1, 2], [2, 4]]))
    assert K.dim == 1 and K.contains((2, -1))


def test_subspace_examples():
    e1, e2 = Subspace([(1, 0, 0)], 3), Subspace([(0, 1, 0)], 3)
    assert subspace_sum(e1, e2) == Subspace.coordinate(3, [0, 1])
    A, B = Subspace.coordinate(3, [0, 1]), Subspace.coordinate(3, [1, 2])
    assert subspace_intersection(A, B) == Subspace.coordinate(3, [1])
    assert Subspace([(1, 1)], 2).contains((1, 1))
    assert not Subspace([(1, 1)], 2).contains((1, 0))


def test_inverse_examples():
    assert invert_matrix(Matrix([[2]])) == Matrix([[Fraction(1, 2)]])
    assert invert_matrix(Matrix.identity(2)) == Matrix.identity(2)
    assert invert_matrix(Matrix([[1, 1], [0, 1]])) == Matrix([[1, -1], [0, 1]])
    with pytest.raises(SingularMatrixError):
        invert_matrix(Matrix([[1, 2], [2, 4]]))


def test_prime_field_arithmetic():
    with using_field(PrimeField(7)) as F:
        a = F(3)
        assert a * F(5) == F(1)
        assert F(1) / a == F(5)
        assert F.parse("10") == F(3)
        assert invert_matrix(Matrix([[2]])) == Matrix([[4]])
    assert get_field().order is None


def test_prime_field_rejects_composite_and_zero_division():
    with pytest.raises(FieldError):
        PrimeField(6)
    F = PrimeField(5)
    with pytest.raises(ZeroDivisionError):
        F(1) / F(0)
    assert isinstance(F(2), ModP)


def test_mixing_moduli_is_an_error():
    with pytest.raises((FieldError, ValueError, TypeError)):
        PrimeField(5)(1) + PrimeField(7)(1)


def test_field_from_spec():
    assert field_from_spec("Q").order is None
    assert field_from_spec("fp:101").order == 101
    with pytest.raises(FieldError):
        field_from_spec("R")


def test_show_linear():
    assert show_linear([("a", 1), ("b", -2), ("c", Fraction(1, 2))], str) == "a - 2*b + 1/2*c"


@given(matrices())
def test_rref_idempotent_and_rank_nullity(rows):
    M = Matrix(rows)
    R = rref(M)
    assert rref(R) == R
    assert M.rank() + kernel(M).dim == M.ncols


@given(matrices())
def test_kernel_vectors_are_annihilated(rows):
    M = Matrix(rows)
    for v in kernel(M).vectors():
        assert all(sum(r[j] * v[j] for j in range(M.ncols)) == 0 for r in M.rows)


@given(matrices())
def test_inverse_is_two_sided(rows):
    M = Matrix(rows)
    if M.rank() < 3:
        with pytest.raises(SingularMatrixError):
            invert_matrix(M)
        return
    Mi = invert_matrix(M)
    assert M @ Mi == Matrix.identity(3) and Mi @ M == Matrix.identity(3)


@given(matrices(2, 4), matrices(2, 4))
def test_dimension_formula_for_sum_and_intersection(a, b):
    A, B = Subspace(a, 4), Subspace(b, 4)
    assert subspace_sum(A, B).dim + subspace_intersection(A, B).dim == A.dim + B.dim
    assert A <= subspace_sum(A, B) and subspace_intersection(A, B) <= B


@given(matrices(), st.sampled_from([2, 3, 101]))
def test_rank_nullity_over_prime_fields(rows, p):
    set_field(PrimeField(p))
    M = Matrix(rows)
    assert M.rank() + kernel(M).dim == 3
