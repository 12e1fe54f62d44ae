"""Rearrangement bounds on sums of f over products, for vectors and for singular values."""

import logging
from typing import Any

import numpy as np

from src.exceptions import DimensionMismatchError, DomainError, UnsupportedFunctionError
from src.inequalities.report import INEQUALITY_REL_TOL, BoundsReport, Orientation, bounds_report
from src.linalg.factorizations import is_full_rank, singular_values
from src.linalg.types import FloatArray, as_matrix, as_vector
from src.spectral.functions import ScalarFunction, SFPrimeClass
from src.spectral.sums import s_f

logger = logging.getLogger(__name__)


def _require_monotone_class(fn: ScalarFunction) -> Orientation:
    if fn.sfprime_class is SFPrimeClass.NEITHER:
        raise UnsupportedFunctionError(fn.label, "s f'(s) must be monotone on (0, inf)")
    return Orientation.for_class(fn.sfprime_class)


def _same_length(u: FloatArray, v: FloatArray) -> None:
    if u.shape != v.shape:
        raise DimensionMismatchError(u.shape, v.shape, "vectors must have equal length")


def _require_entries(values: FloatArray, fn: ScalarFunction, name: str, strict: bool) -> None:
    bad = values <= 0 if strict else values < 0
    if np.any(bad):
        index = int(np.flatnonzero(bad)[0])
        kind = "positive" if strict else "non-negative"
        reason = f"entries of {name} must be {kind}"
        raise DomainError(fn.label, index, float(values[index]), reason)


def _descending(values: FloatArray) -> FloatArray:
    return np.sort(values)[::-1]


def _paired_sums(left: FloatArray, right: FloatArray, fn: ScalarFunction) -> tuple[float, float]:
    """(anti-aligned, aligned) sums of f over products of two sorted-descending vectors."""
    anti_aligned = fn.total(left * right[::-1])
    aligned = fn.total(left * right)
    return anti_aligned, aligned


def vector_rearrangement_bounds(
    u: Any, v: Any, fn: ScalarFunction, rel_tol: float = INEQUALITY_REL_TOL
) -> BoundsReport:
    """Bound sum_i f(u_i v_i) by the oppositely sorted and the similarly sorted pairings.

    Holds for positive vectors whenever s f'(s) is monotone; the chain reverses when it is
    decreasing.
    """
    orientation = _require_monotone_class(fn)
    left, right = as_vector(u, "u"), as_vector(v, "v")
    _same_length(left, right)
    _require_entries(left, fn, "u", strict=True)
    _require_entries(right, fn, "v", strict=True)
    exact = fn.total(left * right)
    lower, upper = _paired_sums(_descending(left), _descending(right), fn)
    return bounds_report(lower, exact, upper, orientation, rel_tol)


def london_bounds(
    u: Any, v: Any, fn: ScalarFunction, rel_tol: float = INEQUALITY_REL_TOL
) -> BoundsReport:
    """London's rearrangement bounds for a convex f with f(s) >= f(0).

    ``u`` must be positive and ``v`` non-negative. Convexity is the caller's promise and is
    not checked.
    """
    if not fn.domain_includes_zero:
        raise DomainError(fn.label, None, 0.0, "London's bounds need f defined at 0")
    left, right = as_vector(u, "u"), as_vector(v, "v")
    _same_length(left, right)
    _require_entries(left, fn, "u", strict=True)
    _require_entries(right, fn, "v", strict=False)
    exact = fn.total(left * right)
    lower, upper = _paired_sums(_descending(left), _descending(right), fn)
    return bounds_report(lower, exact, upper, Orientation.SANDWICH, rel_tol)


def product_spectrum_bounds(
    a: Any, b: Any, fn: ScalarFunction, rel_tol: float = INEQUALITY_REL_TOL
) -> BoundsReport:
    """Eigenvalue-free bounds on S_f(AB) for square A, B from their singular values alone.

    sum_i f(sigma_i(A) sigma_{n-i+1}(B)) <= S_f(AB) <= sum_i f(sigma_i(A) sigma_i(B)) when
    s f'(s) is increasing, reversed when it is decreasing. Singular factors are accepted
    only for functions defined at 0.
    """
    orientation = _require_monotone_class(fn)
    left, right = as_matrix(a, "A"), as_matrix(b, "B")
    n = left.shape[0]
    if left.shape != (n, n) or right.shape != (n, n):
        raise DimensionMismatchError(left.shape, right.shape, "A and B must be square, same size")
    sigma_a = singular_values(left)
    sigma_b = singular_values(right)
    for name, sigma in (("A", sigma_a), ("B", sigma_b)):
        if not fn.domain_includes_zero and not is_full_rank(sigma, (n, n)):
            raise DomainError(
                fn.label, n - 1, float(sigma[-1]), f"{name} is singular and f is undefined at 0"
            )
    exact = s_f(left @ right, fn)
    lower, upper = _paired_sums(sigma_a, sigma_b, fn)
    logger.debug("S_f(AB) for %s: %.6g in [%.6g, %.6g]", fn.label, exact, lower, upper)
    return bounds_report(lower, exact, upper, orientation, rel_tol)


def rectangular_product_bound(
    a: Any, b: Any, fn: ScalarFunction, rel_tol: float = INEQUALITY_REL_TOL
) -> BoundsReport:
    """One-sided bound on S_f(A B^T) for m x n factors with m <= n.

    S_f(A B^T) <= sum_i f(sigma_i(A) sigma_i(B)) for increasing s f'(s) (``upper`` is set and
    ``lower`` is -inf); for decreasing s f'(s) the same sum is a lower bound, reported in
    ``upper`` with ``Orientation.REVERSED`` and ``lower`` = +inf.
    """
    orientation = _require_monotone_class(fn)
    if not fn.domain_includes_zero:
        raise DomainError(fn.label, None, 0.0, "the rectangular bound needs f defined at 0")
    left, right = as_matrix(a, "A"), as_matrix(b, "B")
    if left.shape != right.shape:
        raise DimensionMismatchError(left.shape, right.shape, "A and B must have the same shape")
    m, n = left.shape
    if m > n:
        raise DimensionMismatchError(left.shape, right.shape, "rows must not exceed columns")
    exact = s_f(left @ right.T, fn)
    aligned = fn.total(singular_values(left) * singular_values(right))
    missing = -np.inf if orientation is Orientation.SANDWICH else np.inf
    return bounds_report(float(missing), exact, aligned, orientation, rel_tol)
