from typing import Any

import numpy as np

from src.exceptions import DomainError
from src.linalg.factorizations import (
    is_full_rank,
    rank_tolerance,
    require_full_rank,
    singular_values,
    svd,
)
from src.linalg.types import FloatArray, as_matrix, read_only
from src.spectral.functions import ScalarFunction

FINITE_DIFFERENCE_STEP = 1e-5


def check_singular_domain(sigma: FloatArray, shape: tuple[int, int], fn: ScalarFunction) -> None:
    """Reject numerically zero singular values for functions undefined at zero."""
    if fn.domain_includes_zero or is_full_rank(sigma, shape):
        return
    index = int(sigma.size - 1)
    raise DomainError(
        fn.label,
        index,
        float(sigma[index]),
        f"singular value below rank tolerance {rank_tolerance(sigma, shape):.3e}",
    )


def s_f(x: Any, fn: ScalarFunction) -> float:
    """Spectral sum S_f(X) = sum_i f(sigma_i(X))."""
    matrix = as_matrix(x)
    sigma = singular_values(matrix)
    check_singular_domain(sigma, (matrix.shape[0], matrix.shape[1]), fn)
    return fn.total(sigma)


def subdifferential_element(x: Any, fn: ScalarFunction) -> FloatArray:
    """Canonical element U Diag(f'(sigma)) V1^T of the subdifferential of S_f at a full-rank X.

    Unique (and independent of the SVD sign choice) when the singular values are distinct.
    """
    matrix = as_matrix(x)
    factorization = svd(matrix)
    wide_shape = (factorization.u.shape[0], factorization.v.shape[0])
    require_full_rank(factorization.singular_values, wide_shape)
    weights = fn.derivative(factorization.singular_values)
    delta = (factorization.u * weights) @ factorization.v1.T
    return read_only(delta.T if factorization.transposed else delta)


def finite_difference_gradient(
    x: Any, fn: ScalarFunction, step: float = FINITE_DIFFERENCE_STEP
) -> FloatArray:
    """Entrywise central-difference gradient of S_f, the oracle for the subdifferential."""
    matrix = as_matrix(x)
    gradient = np.zeros(matrix.shape)
    for i, j in np.ndindex(*matrix.shape):
        bump = np.zeros(matrix.shape)
        bump[i, j] = step
        gradient[i, j] = (s_f(matrix + bump, fn) - s_f(matrix - bump, fn)) / (2.0 * step)
    return read_only(gradient)
