import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from lassodof.errors import InputError
from lassodof.linalg import (
    null_basis,
    nullity,
    numeric_rank,
    projector_onto_col,
    projector_onto_null,
    pseudoinverse,
    range_basis,
    svd,
)
from lassodof.schemas import RankTolerance


def low_rank(seed, rows, cols, rank):
    """rows x cols matrix with exactly ``rank`` singular values in [0.1, 10]."""
    rng = np.random.default_rng(seed)
    rank = min(rank, rows, cols)
    U, _ = np.linalg.qr(rng.standard_normal((rows, rows)))
    V, _ = np.linalg.qr(rng.standard_normal((cols, cols)))
    s = rng.uniform(0.1, 10.0, size=rank)
    return (U[:, :rank] * s) @ V[:, :rank].T, rank


shapes = st.tuples(
    st.integers(0, 2**32 - 1),
    st.integers(1, 7),
    st.integers(1, 7),
    st.integers(0, 7),
)


@settings(max_examples=60, deadline=None)
@given(shapes)
def test_pseudoinverse_penrose_conditions(case):
    A, _ = low_rank(*case)
    P = pseudoinverse(A)
    assert_allclose(A @ P @ A, A, atol=1e-9)
    assert_allclose(P @ A @ P, P, atol=1e-9)
    assert_allclose(A @ P, (A @ P).T, atol=1e-9)
    assert_allclose(P @ A, (P @ A).T, atol=1e-9)


@settings(max_examples=60, deadline=None)
@given(shapes)
def test_rank_and_nullity_match_construction(case):
    A, rank = low_rank(*case)
    assert numeric_rank(A) == rank
    assert nullity(A) == A.shape[1] - rank
    assert range_basis(A).shape == (A.shape[0], rank)


@settings(max_examples=60, deadline=None)
@given(shapes)
def test_projectors_are_orthogonal(case):
    A, rank = low_rank(*case)
    for P in (projector_onto_col(A), projector_onto_null(A)):
        assert_allclose(P @ P, P, atol=1e-10)
        assert_allclose(P, P.T, atol=1e-12)
    assert np.trace(projector_onto_col(A)) == pytest.approx(rank)
    assert_allclose(A @ projector_onto_null(A), 0.0, atol=1e-9)


@settings(max_examples=40, deadline=None)
@given(shapes)
def test_null_basis_is_orthonormal_kernel(case):
    A, rank = low_rank(*case)
    N = null_basis(A)
    assert N.shape == (A.shape[1], A.shape[1] - rank)
    assert_allclose(N.T @ N, np.eye(N.shape[1]), atol=1e-10)
    assert_allclose(A @ N, 0.0, atol=1e-9)


def test_empty_dimensions():
    assert svd(np.zeros((3, 0))).singular_values.size == 0
    assert numeric_rank(np.zeros((0, 4))) == 0
    assert_allclose(projector_onto_null(np.zeros((0, 4))), np.eye(4))
    assert_allclose(projector_onto_col(np.zeros((3, 0))), np.zeros((3, 3)))
    assert pseudoinverse(np.zeros((3, 0))).shape == (0, 3)
    assert null_basis(np.zeros((0, 2))).shape == (2, 2)


def test_zero_matrix_has_rank_zero():
    assert numeric_rank(np.zeros((3, 2))) == 0
    assert_allclose(pseudoinverse(np.zeros((3, 2))), np.zeros((2, 3)))


def test_duplicated_columns_lose_rank():
    rng = np.random.default_rng(3)
    X = rng.standard_normal((6, 3))
    X = np.column_stack([X, X[:, 0]])
    assert numeric_rank(X) == 3
    assert nullity(X) == 1


def test_explicit_cutoff_overrides_default():
    A = np.diag([1.0, 1e-8])
    assert numeric_rank(A) == 2
    assert numeric_rank(A, RankTolerance(relative_cutoff=1e-6)) == 1


def test_default_cutoff_scales_with_shape():
    assert RankTolerance().cutoff((10, 4)) == pytest.approx(10 * 2.0**-46)


@pytest.mark.parametrize("bad", [np.nan, np.inf, -np.inf])
def test_non_finite_input_is_rejected(bad):
    A = np.ones((2, 2))
    A[0, 1] = bad
    with pytest.raises(InputError):
        numeric_rank(A)


def test_rejects_non_matrix():
    with pytest.raises(InputError):
        pseudoinverse(np.ones(3))


@settings(max_examples=40, deadline=None)
@given(shapes)
def test_column_and_left_null_projectors_sum_to_identity(case):
    A, _ = low_rank(*case)
    assert_allclose(projector_onto_col(A) + projector_onto_null(A.T), np.eye(A.shape[0]), atol=1e-9)


@settings(max_examples=40, deadline=None)
@given(shapes)
def test_rank_survives_permutation_and_rotation(case):
    A, rank = low_rank(*case)
    rng = np.random.default_rng(case[0])
    rows, cols = A.shape
    assert numeric_rank(A[rng.permutation(rows)][:, rng.permutation(cols)]) == rank
    Q1, _ = np.linalg.qr(rng.standard_normal((rows, rows)))
    Q2, _ = np.linalg.qr(rng.standard_normal((cols, cols)))
    assert numeric_rank(Q1 @ A @ Q2) == rank
