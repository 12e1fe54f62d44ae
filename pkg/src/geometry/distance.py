"""Affine-invariant distances on the SPD cone and their eigenvalue-only bounds."""

from typing import Any

import numpy as np

from src.exceptions import DimensionMismatchError, InvalidParameterError
from src.inequalities.report import INEQUALITY_REL_TOL, BoundsReport, Orientation, bounds_report
from src.linalg.spd import SpdMatrix, as_spd, spd_power
from src.linalg.types import FloatArray, read_only


def _require_q(q: float) -> None:
    if q < 1:
        raise InvalidParameterError("q", q, "q >= 1 for the affine-invariant distance")


def spd_pair(a: Any, b: Any) -> tuple[SpdMatrix, SpdMatrix]:
    left, right = as_spd(a), as_spd(b)
    if left.n != right.n:
        raise DimensionMismatchError(left.matrix.shape, right.matrix.shape, "same size")
    return left, right


def relative_spectrum(a: Any, b: Any) -> FloatArray:
    """Eigenvalues of B^-1/2 A B^-1/2 (the spectrum of A B^-1), sorted non-increasing."""
    left, right = spd_pair(a, b)
    inverse_root = spd_power(right, -0.5).matrix
    congruence = inverse_root @ left.matrix @ inverse_root
    return SpdMatrix.from_array((congruence + congruence.T) / 2.0).eigenvalues


def affine_invariant_distance_power(a: Any, b: Any, q: float = 2.0) -> float:
    """d_q(A, B)^q = sum_i |log mu_i|^q."""
    _require_q(q)
    logs = np.log(relative_spectrum(a, b))
    return float(np.sum(np.abs(logs) ** q))


def affine_invariant_distance(a: Any, b: Any, q: float = 2.0) -> float:
    """Schatten-q norm of Log(B^-1/2 A B^-1/2); q = 2 is the Riemannian geodesic distance."""
    return float(affine_invariant_distance_power(a, b, q) ** (1.0 / q))


def sorted_log_spectrum(p: Any) -> FloatArray:
    return read_only(as_spd(p).log_eigenvalues().copy())


def distance_bounds(
    a: Any, b: Any, q: float = 2.0, rel_tol: float = INEQUALITY_REL_TOL
) -> BoundsReport:
    """Bracket d_q(A, B)^q by the individual spectra.

    lower = sum_i |log lam_i(A) - log lam_i(B)|^q and
    upper = sum_i |log lam_i(A) - log lam_{n-i+1}(B)|^q, eigenvalues sorted non-increasing.
    """
    _require_q(q)
    left, right = spd_pair(a, b)
    exact = affine_invariant_distance_power(left, right, q)
    log_a, log_b = left.log_eigenvalues(), right.log_eigenvalues()
    lower = float(np.sum(np.abs(log_a - log_b) ** q))
    upper = float(np.sum(np.abs(log_a - log_b[::-1]) ** q))
    return bounds_report(lower, exact, upper, Orientation.SANDWICH, rel_tol)
