import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from src.exceptions import InvalidInputError, NotSymmetricError, RankDeficientError
from src.linalg.factorizations import (
    dilation,
    is_full_rank,
    require_full_rank,
    singular_values,
    svd,
    sym_eig,
    symmetrize,
)
from src.linalg.types import as_matrix
from src.random_matrices import random_matrix, random_orthogonal

RECONSTRUCTION_TOL = 1e-10


def test_svd_of_diagonal() -> None:
    factorization = svd(np.diag([3.0, 1.0]))
    np.testing.assert_allclose(factorization.singular_values, [3.0, 1.0])
    np.testing.assert_allclose(np.abs(factorization.u), np.eye(2), atol=1e-12)
    np.testing.assert_allclose(np.abs(factorization.v), np.eye(2), atol=1e-12)


def test_svd_of_identity() -> None:
    np.testing.assert_allclose(svd(np.eye(4)).singular_values, np.ones(4))


@pytest.mark.parametrize("shape", [(3, 4), (4, 3), (3, 3), (1, 5)])
def test_svd_reconstructs_with_orthonormal_factors(shape: tuple[int, int]) -> None:
    x = np.random.default_rng(7).standard_normal(shape)
    factorization = svd(x)
    np.testing.assert_allclose(factorization.reconstruct(), x, atol=RECONSTRUCTION_TOL)
    u, v = factorization.u, factorization.v
    np.testing.assert_allclose(u.T @ u, np.eye(u.shape[0]), atol=RECONSTRUCTION_TOL)
    np.testing.assert_allclose(v.T @ v, np.eye(v.shape[0]), atol=RECONSTRUCTION_TOL)
    assert factorization.transposed == (shape[0] > shape[1])
    assert np.all(np.diff(factorization.singular_values) <= 0)


def test_svd_sign_convention_is_deterministic() -> None:
    x = np.random.default_rng(3).standard_normal((3, 3))
    u = svd(x).u
    pivots = np.argmax(np.abs(u), axis=0)
    assert np.all(u[pivots, np.arange(3)] >= 0)
    np.testing.assert_array_equal(svd(x.copy()).u, u)


def test_sym_eig_sorts_descending() -> None:
    np.testing.assert_allclose(sym_eig(np.diag([1.0, 5.0, 2.0])).eigenvalues, [5.0, 2.0, 1.0])
    np.testing.assert_allclose(sym_eig([[0.0, 1.0], [1.0, 0.0]]).eigenvalues, [1.0, -1.0])


def test_sym_eig_reconstructs() -> None:
    g = np.random.default_rng(11).standard_normal((4, 4))
    s = (g + g.T) / 2.0
    np.testing.assert_allclose(sym_eig(s).reconstruct(), s, atol=RECONSTRUCTION_TOL)


def test_symmetrize_rejects_asymmetric_input() -> None:
    with pytest.raises(NotSymmetricError, match="not symmetric"):
        symmetrize([[1.0, 2.0], [0.0, 1.0]])


def test_symmetrize_averages_roundoff_asymmetry() -> None:
    result = symmetrize([[1.0, 2.0], [2.0 + 1e-15, 1.0]])
    assert result[0, 1] == result[1, 0]


def test_as_matrix_rejects_non_finite_and_bad_shapes() -> None:
    with pytest.raises(InvalidInputError, match="NaN or infinite"):
        as_matrix([[1.0, np.nan]])
    with pytest.raises(InvalidInputError, match="2-D"):
        as_matrix([1.0, 2.0])
    with pytest.raises(InvalidInputError, match="2-D"):
        as_matrix(np.zeros((0, 3)))


def test_as_matrix_is_read_only() -> None:
    matrix = as_matrix(np.eye(2))
    with pytest.raises(ValueError, match="read-only"):
        matrix[0, 0] = 2.0


def test_dilation_of_scalar_and_row() -> None:
    np.testing.assert_allclose(dilation([[2.0]]), [[0.0, 2.0], [2.0, 0.0]])
    eigenvalues = sym_eig(dilation([[3.0, 4.0]])).eigenvalues
    np.testing.assert_allclose(eigenvalues, [5.0, 0.0, -5.0], atol=1e-12)


@pytest.mark.parametrize("shape", [(2, 3), (3, 3), (4, 7)])
def test_dilation_spectrum_is_plus_minus_sigma(shape: tuple[int, int]) -> None:
    x = np.random.default_rng(5).standard_normal(shape)
    sigma = singular_values(x)
    zeros = np.zeros(abs(shape[1] - shape[0]))
    expected = np.sort(np.concatenate([sigma, -sigma, zeros]))[::-1]
    np.testing.assert_allclose(sym_eig(dilation(x)).eigenvalues, expected, atol=1e-10)


def test_rank_checks() -> None:
    full = singular_values(np.diag([2.0, 1.0]))
    deficient = singular_values(np.array([[1.0, 1.0], [1.0, 1.0]]))
    assert is_full_rank(full, (2, 2))
    assert not is_full_rank(deficient, (2, 2))
    with pytest.raises(RankDeficientError):
        require_full_rank(deficient, (2, 2))


@seed(1)
@settings(deadline=None, max_examples=25)
@given(draw=st.integers(min_value=0, max_value=2**32 - 1))
def test_singular_values_orthogonally_invariant(draw: int) -> None:
    rng = np.random.default_rng(draw)
    x = random_matrix((4, 4), rng)
    q, p = random_orthogonal(4, rng), random_orthogonal(4, rng)
    np.testing.assert_allclose(singular_values(q @ x @ p), singular_values(x), atol=1e-10)
