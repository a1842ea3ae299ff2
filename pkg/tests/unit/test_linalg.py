"""Unit tests for dense linear algebra."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from succmin.core.errors import DimensionMismatch, NonSquare, NotPositiveDefinite
from succmin.core.linalg import (
    FACT_TOL,
    cholesky,
    det,
    gram,
    is_spd,
    rel_error,
    spd_inverse,
    triangularize,
    woodbury_decompose,
)

DIM = 4


def spd_from(a: np.ndarray) -> np.ndarray:
    return a @ a.T + 0.5 * np.eye(a.shape[0])


square_arrays = arrays(np.float64, (DIM, DIM), elements=st.floats(min_value=-2.0, max_value=2.0))


def test_cholesky_diagonal():
    """Test Cholesky of a diagonal matrix."""
    np.testing.assert_allclose(cholesky(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))


def test_cholesky_identity():
    """Test Cholesky of the identity."""
    np.testing.assert_array_equal(cholesky(np.eye(3)), np.eye(3))


def test_cholesky_counterexample_factor():
    """Test chol([[3,0],[0,1]]) = [[sqrt(3),0],[0,1]]."""
    r = cholesky([[3.0, 0.0], [0.0, 1.0]])
    np.testing.assert_allclose(r, [[math.sqrt(3.0), 0.0], [0.0, 1.0]])


def test_cholesky_result_is_read_only():
    """Test the factor cannot be mutated."""
    r = cholesky(np.eye(2))
    with pytest.raises(ValueError):
        r[0, 0] = 2.0


@pytest.mark.parametrize(
    "g",
    [
        [[1.0, 2.0], [2.0, 1.0]],
        [[1.0, 1.0], [1.0, 1.0]],
        [[1.0, 0.5], [0.0, 1.0]],
    ],
)
def test_cholesky_rejects_non_spd(g):
    """Test indefinite, singular and non-symmetric inputs are refused."""
    with pytest.raises(NotPositiveDefinite):
        cholesky(g)


def test_cholesky_non_square():
    """Test a rectangular input raises NonSquare."""
    with pytest.raises(NonSquare):
        cholesky(np.ones((2, 3)))


@settings(max_examples=50, deadline=None)
@given(a=square_arrays)
def test_cholesky_reconstructs(a):
    """Test R^T R = G on random SPD matrices."""
    g = spd_from(a)
    r = cholesky(g)
    assert np.all(np.tril(r, -1) == 0.0)
    assert np.all(np.diag(r) > 0.0)
    assert rel_error(r.T @ r, g) <= FACT_TOL


def test_is_spd_strict_and_psd():
    """Test a singular PSD matrix passes only the non-strict test."""
    psd = np.array([[1.0, 1.0], [1.0, 1.0]])
    assert is_spd(psd, strict=False) is True
    assert is_spd(psd, strict=True) is False
    assert is_spd(np.eye(3)) is True
    assert is_spd(-np.eye(2), strict=False) is False


def test_is_spd_non_square():
    """Test is_spd requires a square matrix."""
    with pytest.raises(NonSquare):
        is_spd(np.ones((2, 3)))


def test_spd_inverse():
    """Test the Cholesky-based inverse."""
    g = np.array([[4.0, 1.0], [1.0, 3.0]])
    assert rel_error(spd_inverse(g) @ g, np.eye(2)) <= FACT_TOL


@settings(max_examples=50, deadline=None)
@given(a=square_arrays, b=square_arrays)
def test_woodbury_reconstruction(a, b):
    """Test S + T = G1^-1 for the Woodbury split."""
    g1, g2 = spd_from(a), spd_from(b)
    s, t = woodbury_decompose(g1, g2)
    assert rel_error(s + t, spd_inverse(g1)) <= FACT_TOL
    assert is_spd(s) and is_spd(t)


def test_woodbury_dimension_mismatch():
    """Test mismatched sizes are refused."""
    with pytest.raises(DimensionMismatch):
        woodbury_decompose(np.eye(2), np.eye(3))


def test_det():
    """Test triangular and general determinants."""
    assert det(np.diag([2.0, 3.0])) == 6.0
    assert det([[1.0, 2.0], [0.0, 4.0]]) == 4.0
    assert det([[0.0, 1.0], [1.0, 0.0]]) == pytest.approx(-1.0)


def test_triangularize_preserves_gram(rng):
    """Test the R-factor spans an isometric lattice."""
    a = rng.standard_normal((4, 3))
    r = triangularize(a)
    assert r.shape == (3, 3)
    assert np.all(np.diag(r) > 0.0)
    assert rel_error(gram(r), a.T @ a) <= FACT_TOL


def test_triangularize_rank_deficient():
    """Test a rank-deficient basis is refused."""
    with pytest.raises(NotPositiveDefinite):
        triangularize([[1.0, 2.0], [2.0, 4.0]])
