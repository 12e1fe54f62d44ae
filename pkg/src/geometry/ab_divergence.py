"""Alpha-Beta log-det divergences D_{alpha,beta}(A || B) between SPD matrices.

Every regime is evaluated as sum_i g(mu_i) over the relative spectrum mu = lam(A B^-1),
with g the regime's scalar function including its prefactor. The matrix-form definitions
in :func:`ab_logdet_matrix_form` are an independent route used as a cross-check.
"""

import logging
from enum import Enum
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict

from src.exceptions import DomainError, InvalidParameterError, PropertyViolationError
from src.geometry.distance import relative_spectrum, spd_pair
from src.inequalities.report import INEQUALITY_REL_TOL, BoundsReport, Orientation, bounds_report
from src.linalg.spd import SpdMatrix, spd_log, spd_power
from src.linalg.types import FloatArray
from src.spectral.functions import (
    ScalarFunction,
    ab_alpha0,
    ab_beta0,
    ab_general,
    ab_neg,
    abs_log_pow,
)

logger = logging.getLogger(__name__)

CROSS_CHECK_REL_TOL = 1e-8


class AbRegime(str, Enum):
    GENERAL = "general"
    BETA_ZERO = "beta_zero"
    ALPHA_ZERO = "alpha_zero"
    OPPOSITE = "opposite"
    ZERO = "zero"


class AbParams(BaseModel):
    """The (alpha, beta) pair; the regime is decided by exact comparisons with zero."""

    alpha: float
    beta: float

    model_config = ConfigDict(frozen=True)

    @property
    def regime(self) -> AbRegime:
        if self.alpha == 0 and self.beta == 0:
            return AbRegime.ZERO
        if self.beta == 0:
            return AbRegime.BETA_ZERO
        if self.alpha == 0:
            return AbRegime.ALPHA_ZERO
        if self.alpha + self.beta == 0:
            return AbRegime.OPPOSITE
        return AbRegime.GENERAL

    @property
    def label(self) -> str:
        return f"ab_divergence({self.alpha:g},{self.beta:g})"


def ab_divergence_function(params: AbParams) -> ScalarFunction:
    """Scalar g with D_{alpha,beta}(A || B) = sum_i g(mu_i).

    s g'(s) is increasing in every regime: the 1/(alpha beta) prefactor of the general
    regime flips the decreasing class of its log term when alpha beta < 0.
    """
    alpha, beta = params.alpha, params.beta
    regime = params.regime
    if regime is AbRegime.GENERAL:
        base = ab_general(alpha, beta)
        factor = 1.0 / (alpha * beta)
    elif regime is AbRegime.BETA_ZERO:
        base = ab_beta0(alpha)
        factor = 1.0 / alpha**2
    elif regime is AbRegime.ALPHA_ZERO:
        base = ab_alpha0(beta)
        factor = 1.0 / beta**2
    elif regime is AbRegime.OPPOSITE:
        base = ab_neg(alpha)
        factor = 1.0 / alpha**2
    else:
        base = abs_log_pow(2.0)
        factor = 0.5
    return base.scaled(factor, label=params.label)


def ab_logdet_divergence(
    a: Any,
    b: Any,
    params: AbParams,
    cross_check: bool = False,
    cross_check_rel_tol: float = CROSS_CHECK_REL_TOL,
) -> float:
    """D_{alpha,beta}(A || B) from the eigenvalues of A B^-1.

    With ``cross_check`` the value is compared against :func:`ab_logdet_matrix_form` and a
    mismatch raises :class:`PropertyViolationError`.
    """
    left, right = spd_pair(a, b)
    divergence = ab_divergence_function(params).total(relative_spectrum(left, right))
    if cross_check:
        matrix_value = ab_logdet_matrix_form(left, right, params)
        difference = abs(matrix_value - divergence)
        if difference > cross_check_rel_tol * (1.0 + abs(divergence)):
            raise PropertyViolationError(
                "ab_logdet_matrix_form",
                f"{params.label}: eigenvalue form {divergence!r} vs matrix form "
                f"{matrix_value!r} differ by {difference:.3e}",
            )
        logger.debug("%s cross-check agrees within %.3e", params.label, difference)
    return divergence


def _log_det(matrix: FloatArray, label: str) -> float:
    sign, value = np.linalg.slogdet((matrix + matrix.T) / 2.0)
    if sign <= 0:
        raise DomainError(label, None, float(sign), "log det of a matrix that is not PD")
    return float(value)


def ab_logdet_matrix_form(a: Any, b: Any, params: AbParams) -> float:
    """Matrix-form definition evaluated on C = A^1/2 B^-1 A^1/2.

    C is similar to A B^-1, so every power, logarithm and determinant of A B^-1 in the
    definitions is taken on the symmetric C instead.
    """
    left, right = spd_pair(a, b)
    root = spd_power(left, 0.5).matrix
    inverse = spd_power(right, -1.0).matrix
    product = root @ inverse @ root
    c = SpdMatrix.from_array((product + product.T) / 2.0)
    identity = np.eye(c.n)
    alpha, beta = params.alpha, params.beta
    regime = params.regime
    label = params.label

    if regime is AbRegime.ZERO:
        return 0.5 * float(np.sum(spd_log(c) ** 2))
    log_det_c = _log_det(c.matrix, label)
    if regime is AbRegime.BETA_ZERO:
        trace = float(np.trace(spd_power(c, -alpha).matrix - identity))
        return (trace + alpha * log_det_c) / alpha**2
    if regime is AbRegime.ALPHA_ZERO:
        trace = float(np.trace(spd_power(c, beta).matrix - identity))
        return (trace - beta * log_det_c) / beta**2
    if regime is AbRegime.OPPOSITE:
        shifted = identity + alpha * spd_log(c)
        return (alpha * log_det_c - _log_det(shifted, label)) / alpha**2
    mixture = (alpha * spd_power(c, beta).matrix + beta * spd_power(c, -alpha).matrix) / (
        alpha + beta
    )
    return _log_det(mixture, label) / (alpha * beta)


def ab_logdet_bounds(
    a: Any, b: Any, params: AbParams, rel_tol: float = INEQUALITY_REL_TOL
) -> BoundsReport:
    """Bounds on D_{alpha,beta}(A || B) from the spectra of A and B alone.

    lower = sum_i g(lam_i(A) / lam_i(B)) and upper = sum_i g(lam_i(A) / lam_{n-i+1}(B)).
    The chain holds in this orientation for every (alpha, beta).
    """
    left, right = spd_pair(a, b)
    g = ab_divergence_function(params)
    exact = g.total(relative_spectrum(left, right))
    lam_a, lam_b = left.eigenvalues, right.eigenvalues
    lower = g.total(lam_a / lam_b)
    upper = g.total(lam_a / lam_b[::-1])
    return bounds_report(lower, exact, upper, Orientation.SANDWICH, rel_tol)


def ab_spectral_sum_bounds(
    a: Any, b: Any, params: AbParams, rel_tol: float = INEQUALITY_REL_TOL
) -> BoundsReport:
    """The same bounds for the unscaled sum sum_i f(mu_i), f = ab_general(alpha, beta).

    For alpha beta < 0 the function has decreasing s f'(s) and the report is
    ``Orientation.REVERSED``.
    """
    if params.regime is not AbRegime.GENERAL:
        raise InvalidParameterError(
            "(alpha, beta)", (params.alpha, params.beta), "the general regime"
        )
    left, right = spd_pair(a, b)
    f = ab_general(params.alpha, params.beta)
    exact = f.total(relative_spectrum(left, right))
    lam_a, lam_b = left.eigenvalues, right.eigenvalues
    lower = f.total(lam_a / lam_b)
    upper = f.total(lam_a / lam_b[::-1])
    return bounds_report(lower, exact, upper, Orientation.for_class(f.sfprime_class), rel_tol)
