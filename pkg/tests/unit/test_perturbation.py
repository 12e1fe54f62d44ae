import numpy as np
import pytest

from src.exceptions import DimensionMismatchError, InvalidParameterError
from src.linalg.factorizations import singular_values
from src.random_matrices import random_matrix_with_singular_values
from src.spectral.functions import power
from src.spectral.perturbation import (
    cluster_singular_values,
    perturbation_check,
    predict_perturbed_singular_values,
)

EPSILONS = [1e-1, 1e-2, 1e-3]


def test_clusters_split_on_gaps() -> None:
    clusters = cluster_singular_values([5.0, 5.0, 3.0])
    assert clusters.boundaries == (1, 3, 4)
    assert clusters.representative_values == (5.0, 3.0)
    assert clusters.slices() == [slice(0, 2), slice(2, 3)]


def test_near_equal_values_merge() -> None:
    assert cluster_singular_values([5.0, 4.9999999999, 3.0]).boundaries == (1, 3, 4)
    assert cluster_singular_values([3.0, 2.0, 1.0]).boundaries == (1, 2, 3, 4)


def test_clusters_reject_unsorted_values() -> None:
    with pytest.raises(InvalidParameterError, match="sorted non-increasing"):
        cluster_singular_values([1.0, 2.0])


def test_prediction_for_distinct_values() -> None:
    predicted = predict_perturbed_singular_values(np.diag([2.0, 1.0]), np.eye(2), 0.1)
    np.testing.assert_allclose(predicted, [2.1, 1.1])


def test_prediction_splits_a_repeated_value() -> None:
    eps = 0.05
    predicted = predict_perturbed_singular_values(np.eye(2), np.diag([1.0, -1.0]), eps)
    np.testing.assert_allclose(predicted, [1.0 + eps, 1.0 - eps])


def test_prediction_is_second_order_accurate() -> None:
    x = random_matrix_with_singular_values([3.0, 2.0, 2.0, 1.0], (4, 6), seed=5)
    y = np.random.default_rng(6).standard_normal((4, 6))
    eps = 1e-5
    predicted = predict_perturbed_singular_values(x, y, eps)
    np.testing.assert_allclose(predicted, singular_values(x + eps * y), atol=1e-8)


def test_prediction_argument_errors() -> None:
    with pytest.raises(DimensionMismatchError):
        predict_perturbed_singular_values(np.eye(2), np.eye(3), 0.1)
    with pytest.raises(InvalidParameterError):
        predict_perturbed_singular_values(np.eye(2), np.eye(2), -0.1)


def test_quadratic_error_of_power_two() -> None:
    report = perturbation_check(np.diag([2.0, 1.0]), np.eye(2), power(2.0), EPSILONS)
    assert report.directional_derivative == pytest.approx(6.0)
    np.testing.assert_allclose(report.abs_errors, [2.0 * eps**2 for eps in EPSILONS], rtol=1e-6)
    np.testing.assert_allclose(report.error_ratios, [0.01, 0.01], rtol=1e-4)
    assert report.superlinear
    assert report.log_log_slope == pytest.approx(2.0, abs=1e-4)


def test_zero_direction_has_zero_errors() -> None:
    report = perturbation_check(np.diag([2.0, 1.0]), np.zeros((2, 2)), power(2.0), EPSILONS)
    assert report.abs_errors == [0.0, 0.0, 0.0]
    assert report.superlinear
    assert report.log_log_slope is None


def test_epsilons_must_decrease() -> None:
    with pytest.raises(InvalidParameterError):
        perturbation_check(np.eye(2), np.eye(2), power(2.0), [1e-2, 1e-1])
    with pytest.raises(InvalidParameterError):
        perturbation_check(np.eye(2), np.eye(2), power(2.0), [])
    with pytest.raises(InvalidParameterError):
        perturbation_check(np.eye(2), np.eye(2), power(2.0), [1e-1, 0.0])
