from typing import Any

import numpy as np

from src.exceptions import DimensionMismatchError, InvalidParameterError
from src.inequalities.rearrangement import product_spectrum_bounds, rectangular_product_bound
from src.inequalities.report import INEQUALITY_REL_TOL, BoundsReport, Orientation, bounds_report
from src.linalg.factorizations import sym_eig
from src.linalg.spd import SpdMatrix, spd_power
from src.linalg.types import as_matrix
from src.spectral.functions import power
from src.spectral.sums import s_f


def schatten_q(x: Any, q: float) -> float:
    """Power sum sum_i sigma_i(X)^q; q <= 0 requires X to have full rank."""
    return s_f(x, power(q))


def schatten_norm(x: Any, q: float) -> float:
    """(sum_i sigma_i(X)^q)^(1/q): a norm for q >= 1, a quasi-norm for 0 < q < 1."""
    if q == 0:
        raise InvalidParameterError("q", q, "q != 0 for the Schatten norm")
    return float(schatten_q(x, q) ** (1.0 / q))


def schatten_product_bounds(
    a: Any, b: Any, q: float, rel_tol: float = INEQUALITY_REL_TOL
) -> BoundsReport:
    """Bounds on the Schatten power sum of a product.

    Square inputs bound ||AB||_q^q on both sides; rectangular m x n inputs (m < n) bound
    ||A B^T||_q^q from above only, and need q > 0.
    """
    left, right = as_matrix(a, "A"), as_matrix(b, "B")
    if left.shape != right.shape:
        raise DimensionMismatchError(left.shape, right.shape, "A and B must have the same shape")
    if left.shape[0] == left.shape[1]:
        return product_spectrum_bounds(left, right, power(q), rel_tol)
    if q <= 0:
        raise InvalidParameterError("q", q, "q > 0 for rectangular inputs")
    return rectangular_product_bound(left, right, power(q), rel_tol)


def _as_psd(x: Any) -> SpdMatrix:
    return x if isinstance(x, SpdMatrix) else SpdMatrix.from_psd(x)


def carlen_lieb_check(
    a: Any, b: Any, q: float, rel_tol: float = INEQUALITY_REL_TOL
) -> BoundsReport:
    """Tr((B^1/2 A B^1/2)^q) against the sorted eigenvalue product sums of PSD A and B."""
    if q < 1:
        raise InvalidParameterError("q", q, "q >= 1")
    left, right = _as_psd(a), _as_psd(b)
    if left.n != right.n:
        raise DimensionMismatchError(left.matrix.shape, right.matrix.shape, "same size")
    root = spd_power(right, 0.5).matrix
    inner = root @ left.matrix @ root
    # roundoff can push zero eigenvalues of a singular product slightly negative
    spectrum = np.maximum(sym_eig((inner + inner.T) / 2.0).eigenvalues, 0.0)
    exact = float(np.sum(spectrum**q))
    lam_a, lam_b = left.eigenvalues, right.eigenvalues
    lower = float(np.sum(lam_a**q * lam_b[::-1] ** q))
    upper = float(np.sum((lam_a * lam_b) ** q))
    return bounds_report(lower, exact, upper, Orientation.SANDWICH, rel_tol)
