"""First-order perturbation of singular values and of spectral sums."""

import logging
from collections.abc import Sequence
from typing import Any

import numpy as np
import scipy.linalg
from pydantic import BaseModel, ConfigDict

from src.exceptions import DimensionMismatchError, InvalidParameterError
from src.linalg.factorizations import dilation, require_full_rank, svd
from src.linalg.types import FloatArray, as_matrix, as_vector, read_only
from src.spectral.functions import ScalarFunction
from src.spectral.sums import s_f, subdifferential_element

logger = logging.getLogger(__name__)

CLUSTER_REL_TOL = 1e-8
CLUSTER_ABS_TOL = 1e-12
RATIO_THRESHOLD = 0.2
NOISE_FLOOR = 1e-11


class SingularClusters(BaseModel):
    """Groups of (numerically) equal singular values.

    ``boundaries`` are 1-based: cluster j covers indices i_j .. i_{j+1}-1, with the first
    boundary 1 and the last m+1.
    """

    boundaries: tuple[int, ...]
    representative_values: tuple[float, ...]

    model_config = ConfigDict(frozen=True)

    def slices(self) -> list[slice]:
        return [
            slice(start - 1, stop - 1)
            for start, stop in zip(self.boundaries[:-1], self.boundaries[1:], strict=True)
        ]


class PerturbationReport(BaseModel):
    epsilons: list[float]
    s_f_values: list[float]
    linear_predictions: list[float]
    abs_errors: list[float]
    error_ratios: list[float]
    directional_derivative: float
    noise_floor: float
    superlinear: bool
    log_log_slope: float | None = None

    model_config = ConfigDict(frozen=True, ser_json_inf_nan="constants")


def cluster_threshold(
    sv: FloatArray, rel_tol: float = CLUSTER_REL_TOL, abs_tol: float = CLUSTER_ABS_TOL
) -> float:
    sigma_max = float(sv[0]) if sv.size else 0.0
    return max(rel_tol * sigma_max, abs_tol)


def cluster_singular_values(
    sv: Any, rel_tol: float = CLUSTER_REL_TOL, abs_tol: float = CLUSTER_ABS_TOL
) -> SingularClusters:
    """Split sorted singular values wherever consecutive values differ by more than the
    threshold max(rel_tol * sigma_max, abs_tol)."""
    values = as_vector(sv, "singular values")
    if np.any(np.diff(values) > 0):
        raise InvalidParameterError("sv", values.tolist(), "values sorted non-increasing")
    threshold = cluster_threshold(values, rel_tol, abs_tol)
    breaks = np.flatnonzero(-np.diff(values) > threshold) + 1
    starts = [0, *breaks.tolist()]
    stops = [*breaks.tolist(), values.size]
    boundaries = (*(start + 1 for start in starts), values.size + 1)
    representatives = tuple(
        float(np.mean(values[start:stop])) for start, stop in zip(starts, stops, strict=True)
    )
    return SingularClusters(boundaries=boundaries, representative_values=representatives)


def _same_shape(x: FloatArray, y: FloatArray) -> None:
    if x.shape != y.shape:
        raise DimensionMismatchError(x.shape, y.shape, "X and Y must have the same shape")


def predict_perturbed_singular_values(
    x: Any,
    y: Any,
    eps: float,
    rel_tol: float = CLUSTER_REL_TOL,
    abs_tol: float = CLUSTER_ABS_TOL,
) -> FloatArray:
    """First-order prediction of sigma(X + eps Y) for a full-rank X.

    For a cluster of equal singular values with left/right singular blocks U_j, V_j, the
    columns of W_j = [U_j; V_j] / sqrt(2) are eigenvectors of the dilation of X, and the
    cluster moves by eps times the sorted eigenvalues of W_j^T Dil(Y) W_j.
    """
    matrix, direction = as_matrix(x, "X"), as_matrix(y, "Y")
    _same_shape(matrix, direction)
    if eps < 0:
        raise InvalidParameterError("eps", eps, "a non-negative step")
    factorization = svd(matrix)
    sigma = factorization.singular_values
    require_full_rank(sigma, (factorization.u.shape[0], factorization.v.shape[0]))
    wide_direction = direction.T if factorization.transposed else direction
    dilated = dilation(wide_direction)
    clusters = cluster_singular_values(sigma, rel_tol, abs_tol)
    logger.debug("Singular value clusters: %s", clusters.boundaries)
    predictions = sigma.copy()
    for block in clusters.slices():
        w = np.vstack([factorization.u[:, block], factorization.v1[:, block]]) / np.sqrt(2.0)
        compressed = w.T @ dilated @ w
        shifts = scipy.linalg.eigvalsh((compressed + compressed.T) / 2.0)[::-1]
        predictions[block] = sigma[block] + eps * shifts
    return read_only(predictions)


def _validate_epsilons(epsilons: Sequence[float]) -> list[float]:
    values = [float(eps) for eps in epsilons]
    if not values:
        raise InvalidParameterError("epsilons", values, "at least one step")
    if any(eps <= 0 for eps in values):
        raise InvalidParameterError("epsilons", values, "positive steps")
    if any(later >= earlier for earlier, later in zip(values, values[1:], strict=False)):
        raise InvalidParameterError("epsilons", values, "a strictly decreasing sequence")
    return values


def _ratio(earlier: float, later: float) -> float:
    if earlier == 0:
        return 0.0 if later == 0 else float("inf")
    return later / earlier


def perturbation_check(
    x: Any,
    y: Any,
    fn: ScalarFunction,
    epsilons: Sequence[float],
    ratio_threshold: float = RATIO_THRESHOLD,
    noise_floor: float = NOISE_FLOOR,
) -> PerturbationReport:
    """Measure |S_f(X + eps Y) - S_f(X) - eps <Delta, Y>| over decreasing steps.

    The verdict ``superlinear`` holds when every consecutive error ratio is at most
    ``ratio_threshold``. Pairs whose earlier error is already below the noise floor
    ``noise_floor * (1 + |S_f(X)|)`` carry no information and are not judged.
    """
    matrix, direction = as_matrix(x, "X"), as_matrix(y, "Y")
    _same_shape(matrix, direction)
    steps = _validate_epsilons(epsilons)
    base = s_f(matrix, fn)
    delta = subdifferential_element(matrix, fn)
    directional = float(np.sum(delta * direction))
    values = [s_f(matrix + eps * direction, fn) for eps in steps]
    predictions = [base + eps * directional for eps in steps]
    errors = [
        abs(value - prediction) for value, prediction in zip(values, predictions, strict=True)
    ]
    ratios = [_ratio(earlier, later) for earlier, later in zip(errors, errors[1:], strict=False)]
    floor = noise_floor * (1.0 + abs(base))

    superlinear = True
    for k, ratio in enumerate(ratios):
        if errors[k] <= floor:
            logger.debug("Ratio at eps=%g not judged: error %.3e is noise", steps[k], errors[k])
            continue
        if ratio > ratio_threshold:
            superlinear = False

    informative = [(eps, err) for eps, err in zip(steps, errors, strict=True) if err > floor]
    slope = None
    if len(informative) >= 2:
        log_eps, log_err = np.log(np.array(informative)).T
        slope = float(np.polyfit(log_eps, log_err, 1)[0])

    return PerturbationReport(
        epsilons=steps,
        s_f_values=values,
        linear_predictions=predictions,
        abs_errors=errors,
        error_ratios=ratios,
        directional_derivative=directional,
        noise_floor=floor,
        superlinear=superlinear,
        log_log_slope=slope,
    )
