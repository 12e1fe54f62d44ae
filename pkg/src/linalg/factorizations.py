"""Dense factorizations every other module builds on."""

from typing import Any

import numpy as np
import scipy.linalg

from src.exceptions import InvalidInputError, NotSymmetricError, RankDeficientError
from src.linalg.types import EigFactorization, FloatArray, SvdFactorization, as_matrix, read_only

SYMMETRY_REL_TOL = 1e-12
MACHINE_EPS = float(np.finfo(np.float64).eps)


def _canonical_signs(vectors: FloatArray) -> FloatArray:
    """Sign per column making the largest-magnitude entry non-negative."""
    pivots = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[pivots, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return signs


def svd(x: Any) -> SvdFactorization:
    """Full SVD with a deterministic sign convention.

    Each left singular vector has its largest-magnitude entry non-negative; the matching
    right singular vector is flipped with it so the product is unchanged.
    """
    matrix = as_matrix(x)
    transposed = matrix.shape[0] > matrix.shape[1]
    wide = matrix.T if transposed else matrix
    try:
        u, sigma, vt = scipy.linalg.svd(wide, full_matrices=True)
    except (np.linalg.LinAlgError, ValueError) as e:
        msg = f"SVD failed: {e}"
        raise InvalidInputError(msg) from e
    v = vt.T.copy()
    m = sigma.size
    signs = _canonical_signs(u)
    u = u * signs
    v[:, :m] *= signs
    return SvdFactorization(
        u=read_only(u),
        singular_values=read_only(np.maximum(sigma, 0.0)),
        v=read_only(v),
        transposed=transposed,
    )


def singular_values(x: Any) -> FloatArray:
    """Singular values sorted non-increasing, without the vectors."""
    matrix = as_matrix(x)
    try:
        sigma = scipy.linalg.svdvals(matrix)
    except (np.linalg.LinAlgError, ValueError) as e:
        msg = f"SVD failed: {e}"
        raise InvalidInputError(msg) from e
    return read_only(np.maximum(sigma, 0.0))


def symmetrize(s: Any, rel_tol: float = SYMMETRY_REL_TOL) -> FloatArray:
    """Return (S + S^T) / 2, rejecting matrices asymmetric beyond ``rel_tol`` of max |entry|."""
    matrix = as_matrix(s)
    if matrix.shape[0] != matrix.shape[1]:
        msg = f"expected a square matrix, got shape {matrix.shape}"
        raise InvalidInputError(msg)
    scale = float(np.max(np.abs(matrix)))
    asymmetry = float(np.max(np.abs(matrix - matrix.T)))
    tolerance = rel_tol * scale
    if asymmetry > tolerance:
        raise NotSymmetricError(asymmetry, tolerance)
    return read_only((matrix + matrix.T) / 2.0)


def sym_eig(s: Any, rel_tol: float = SYMMETRY_REL_TOL) -> EigFactorization:
    """Symmetric eigendecomposition with eigenvalues sorted non-increasing."""
    symmetric = symmetrize(s, rel_tol)
    try:
        eigenvalues, q = scipy.linalg.eigh(symmetric)
    except (np.linalg.LinAlgError, ValueError) as e:
        msg = f"eigendecomposition failed: {e}"
        raise InvalidInputError(msg) from e
    eigenvalues = eigenvalues[::-1].copy()
    q = q[:, ::-1]
    q = q * _canonical_signs(q)
    return EigFactorization(q=read_only(q), eigenvalues=read_only(eigenvalues))


def dilation(x: Any) -> FloatArray:
    """Symmetric embedding [[0, X], [X^T, 0]] of an m x n matrix."""
    matrix = as_matrix(x)
    m, n = matrix.shape
    block = np.block([[np.zeros((m, m)), matrix], [matrix.T, np.zeros((n, n))]])
    return read_only(block)


def rank_tolerance(sigma: FloatArray, shape: tuple[int, int]) -> float:
    """Full-rank threshold max(m, n) * eps * sigma_max."""
    sigma_max = float(sigma[0]) if sigma.size else 0.0
    return max(shape) * MACHINE_EPS * sigma_max


def is_full_rank(sigma: FloatArray, shape: tuple[int, int]) -> bool:
    if sigma.size == 0 or sigma[0] == 0.0:
        return False
    return bool(sigma[-1] > rank_tolerance(sigma, shape))


def require_full_rank(sigma: FloatArray, shape: tuple[int, int]) -> None:
    if not is_full_rank(sigma, shape):
        smallest = float(sigma[-1]) if sigma.size else 0.0
        raise RankDeficientError(smallest, rank_tolerance(sigma, shape))
