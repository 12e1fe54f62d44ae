import numpy as np
import pytest

from src.exceptions import DomainError, InvalidParameterError
from src.geometry.ab_divergence import (
    AbParams,
    AbRegime,
    ab_divergence_function,
    ab_logdet_bounds,
    ab_logdet_divergence,
    ab_logdet_matrix_form,
    ab_spectral_sum_bounds,
)
from src.inequalities.report import Orientation
from src.random_matrices import random_spd
from src.spectral.functions import SFPrimeClass, audit_sfprime_class

PARAMETERS = [
    (1.0, 2.0),
    (1.0, 0.0),
    (0.0, 1.0),
    (1.0, -1.0),
    (0.0, 0.0),
    (1.0, -2.0),
    (0.5, 0.5),
    (-1.0, -2.0),
]
# eigenvalues within [1/sqrt(1.5), sqrt(1.5)] keep A B^-1 inside every regime's domain
NARROW_CONDITION = 1.5


def _params(alpha: float, beta: float) -> AbParams:
    return AbParams(alpha=alpha, beta=beta)


def _narrow_pair(seed_value: int) -> tuple:
    a = random_spd(4, seed=seed_value, condition_target=NARROW_CONDITION)
    b = random_spd(4, seed=seed_value + 100, condition_target=NARROW_CONDITION)
    return a, b


@pytest.mark.parametrize(
    ("alpha", "beta", "regime"),
    [
        (1.0, 2.0, AbRegime.GENERAL),
        (1.0, 0.0, AbRegime.BETA_ZERO),
        (0.0, 1.0, AbRegime.ALPHA_ZERO),
        (2.0, -2.0, AbRegime.OPPOSITE),
        (0.0, 0.0, AbRegime.ZERO),
    ],
)
def test_regime(alpha: float, beta: float, regime: AbRegime) -> None:
    assert _params(alpha, beta).regime is regime


def test_scalar_example() -> None:
    value = ab_logdet_divergence([[4.0]], [[1.0]], _params(0.5, 0.5))
    assert value == pytest.approx(4.0 * np.log(1.25))


def test_zero_regime_is_half_squared_distance() -> None:
    assert ab_logdet_divergence(np.e * np.eye(2), np.eye(2), _params(0.0, 0.0)) == pytest.approx(
        1.0
    )


def test_beta_zero_bounds_collapse_for_commuting_diagonals() -> None:
    report = ab_logdet_bounds(np.diag([4.0, 1.0]), np.eye(2), _params(1.0, 0.0))
    expected = 0.25 + np.log(4.0) - 1.0
    assert (report.lower, report.exact, report.upper) == pytest.approx((expected,) * 3)


@pytest.mark.parametrize(("alpha", "beta"), PARAMETERS)
def test_divergence_function_has_increasing_class(alpha: float, beta: float) -> None:
    g = ab_divergence_function(_params(alpha, beta))
    assert g.sfprime_class is SFPrimeClass.INCREASING
    assert audit_sfprime_class(g)


@pytest.mark.parametrize(("alpha", "beta"), PARAMETERS)
def test_divergence_of_a_matrix_with_itself_is_zero(alpha: float, beta: float) -> None:
    a = random_spd(3, seed=8)
    assert ab_logdet_divergence(a, a, _params(alpha, beta)) == pytest.approx(0.0, abs=1e-10)


@pytest.mark.parametrize(("alpha", "beta"), PARAMETERS)
@pytest.mark.parametrize("seed_value", [0, 1, 2])
def test_matrix_form_agrees(alpha: float, beta: float, seed_value: int) -> None:
    a, b = _narrow_pair(seed_value)
    params = _params(alpha, beta)
    value = ab_logdet_divergence(a, b, params, cross_check=True)
    assert value >= -1e-12
    assert ab_logdet_matrix_form(a, b, params) == pytest.approx(value, rel=1e-8, abs=1e-12)


@pytest.mark.parametrize(("alpha", "beta"), PARAMETERS)
@pytest.mark.parametrize("seed_value", [3, 4])
def test_bounds_sandwich_in_every_regime(alpha: float, beta: float, seed_value: int) -> None:
    a, b = _narrow_pair(seed_value)
    report = ab_logdet_bounds(a, b, _params(alpha, beta))
    assert report.orientation is Orientation.SANDWICH
    assert report.satisfied


@pytest.mark.parametrize("seed_value", [5, 6, 7])
def test_unscaled_sum_reverses_for_opposite_signs(seed_value: int) -> None:
    a, b = _narrow_pair(seed_value)
    report = ab_spectral_sum_bounds(a, b, _params(1.0, -2.0))
    assert report.orientation is Orientation.REVERSED
    assert report.satisfied
    assert ab_spectral_sum_bounds(a, b, _params(1.0, 2.0)).orientation is Orientation.SANDWICH


def test_unscaled_sum_needs_the_general_regime() -> None:
    with pytest.raises(InvalidParameterError, match="general regime"):
        ab_spectral_sum_bounds(np.eye(2), np.eye(2), _params(1.0, 0.0))


def test_relative_spectrum_outside_the_domain() -> None:
    # (2s - 1) / s^2 <= 0 once s <= 1/2
    with pytest.raises(DomainError):
        ab_logdet_divergence(0.25 * np.eye(2), np.eye(2), _params(1.0, -2.0))
