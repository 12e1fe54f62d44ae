import logging
from collections.abc import Callable

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from pytest_cases import parametrize_with_cases

from src.exceptions import DimensionMismatchError, DomainError, UnsupportedFunctionError
from src.inequalities.rearrangement import (
    london_bounds,
    product_spectrum_bounds,
    rectangular_product_bound,
    vector_rearrangement_bounds,
)
from src.inequalities.report import BoundsReport, Orientation, bounds_report
from src.random_matrices import random_matrix, random_rank_deficient
from src.spectral.functions import (
    ScalarFunction,
    SFPrimeClass,
    ab_general,
    ab_neg,
    abs_log_pow,
    log_function,
    power,
)

Expected = tuple[float, float, float, Orientation]


def case_product_of_diagonals() -> tuple[Callable[[], BoundsReport], Expected]:
    a, b = np.diag([2.0, 1.0]), np.diag([3.0, 1.0])
    return (
        lambda: product_spectrum_bounds(a, b, power(2.0)),
        (13.0, 37.0, 37.0, Orientation.SANDWICH),
    )


def case_vectors() -> tuple[Callable[[], BoundsReport], Expected]:
    return (
        lambda: vector_rearrangement_bounds([2.0, 1.0], [3.0, 1.0], power(2.0)),
        (13.0, 37.0, 37.0, Orientation.SANDWICH),
    )


def case_london() -> tuple[Callable[[], BoundsReport], Expected]:
    return (
        lambda: london_bounds([3.0, 1.0], [0.0, 2.0], power(2.0)),
        (4.0, 4.0, 36.0, Orientation.SANDWICH),
    )


def case_decreasing_class_reverses() -> tuple[Callable[[], BoundsReport], Expected]:
    # f(s) = log((2s - 1) / s^2)
    fn = ab_general(1.0, -2.0)
    return (
        lambda: vector_rearrangement_bounds([1.0, 2.0], [2.0, 1.0], fn),
        (2.0 * np.log(0.75), 2.0 * np.log(0.75), np.log(7.0 / 16.0), Orientation.REVERSED),
    )


@parametrize_with_cases(("run", "expected"), cases=".")
def test_closed_form_bounds(run: Callable[[], BoundsReport], expected: Expected) -> None:
    lower, exact, upper, orientation = expected
    report = run()
    assert report.lower == pytest.approx(lower)
    assert report.exact == pytest.approx(exact)
    assert report.upper == pytest.approx(upper)
    assert report.orientation is orientation
    assert report.satisfied
    assert report.violation == pytest.approx(0.0, abs=1e-12)


def test_report_flags_a_broken_chain() -> None:
    report = bounds_report(1.0, 0.0, 2.0)
    assert not report.satisfied
    assert report.violation == pytest.approx(1.0)
    reversed_report = bounds_report(1.0, 0.0, 2.0, Orientation.REVERSED)
    assert not reversed_report.satisfied
    assert reversed_report.violation == pytest.approx(2.0)


def test_report_tolerance_scales_with_exact_value() -> None:
    report = bounds_report(1000.0 + 1e-8, 1000.0, 2000.0)
    assert report.satisfied
    assert report.tolerance == pytest.approx(1e-9 * 1001.0)


def test_round_off_in_an_equality_case_is_not_a_warning(caplog: pytest.LogCaptureFixture) -> None:
    with caplog.at_level(logging.DEBUG, logger="src.inequalities.report"):
        report = bounds_report(3.0 + 4e-16, 3.0, 3.0)
    assert report.satisfied
    assert report.violation > 0
    assert not [record for record in caplog.records if record.levelno >= logging.WARNING]
    assert "holds only within tolerance" in caplog.text


def test_function_without_monotone_class_is_unsupported() -> None:
    unclassified = ScalarFunction(
        label="cos",
        f=np.cos,
        f_prime=lambda s: -np.sin(s),
        domain_includes_zero=True,
        sfprime_class=SFPrimeClass.NEITHER,
    )
    with pytest.raises(UnsupportedFunctionError):
        vector_rearrangement_bounds([1.0], [1.0], unclassified)
    with pytest.raises(UnsupportedFunctionError):
        product_spectrum_bounds(np.eye(2), np.eye(2), unclassified)


def test_vector_argument_errors() -> None:
    with pytest.raises(DimensionMismatchError):
        vector_rearrangement_bounds([1.0, 2.0], [1.0], power(2.0))
    with pytest.raises(DomainError, match="positive"):
        vector_rearrangement_bounds([1.0, 0.0], [1.0, 1.0], power(2.0))
    with pytest.raises(DomainError, match="non-negative"):
        london_bounds([1.0, 2.0], [1.0, -1.0], power(2.0))
    with pytest.raises(DomainError, match="defined at 0"):
        london_bounds([1.0, 2.0], [1.0, 1.0], log_function())


def test_product_argument_errors() -> None:
    with pytest.raises(DimensionMismatchError):
        product_spectrum_bounds(np.eye(2), np.eye(3), power(2.0))
    with pytest.raises(DimensionMismatchError):
        product_spectrum_bounds(np.ones((2, 3)), np.ones((2, 3)), power(2.0))
    singular = random_rank_deficient(3, 2, seed=0)
    with pytest.raises(DomainError, match="singular"):
        product_spectrum_bounds(singular, np.eye(3), log_function())
    assert product_spectrum_bounds(singular, np.eye(3), power(2.0)).satisfied


def test_rectangular_bound_is_one_sided() -> None:
    a = random_matrix((2, 4), seed=1)
    b = random_matrix((2, 4), seed=2)
    report = rectangular_product_bound(a, b, power(1.0))
    assert report.lower == -np.inf
    assert report.satisfied
    assert '"lower":-Infinity' in report.model_dump_json()
    with pytest.raises(DimensionMismatchError, match="rows must not exceed columns"):
        rectangular_product_bound(a.T, b.T, power(1.0))
    with pytest.raises(DomainError):
        rectangular_product_bound(a, b, log_function())


FUNCTIONS = [power(2.0), power(0.5), power(-1.0), log_function(), abs_log_pow(2.0), ab_neg(0.5)]


@seed(3)
@settings(deadline=None, max_examples=30)
@given(
    draw=st.integers(min_value=0, max_value=2**32 - 1),
    fn_index=st.integers(min_value=0, max_value=len(FUNCTIONS) - 1),
)
def test_product_bounds_hold_for_random_factors(draw: int, fn_index: int) -> None:
    rng = np.random.default_rng(draw)
    a, b = random_matrix((4, 4), rng), random_matrix((4, 4), rng)
    report = product_spectrum_bounds(a, b, FUNCTIONS[fn_index])
    assert report.satisfied, report


@seed(4)
@settings(deadline=None, max_examples=30)
@given(draw=st.integers(min_value=0, max_value=2**32 - 1))
def test_vector_bounds_hold_for_random_vectors(draw: int) -> None:
    rng = np.random.default_rng(draw)
    u, v = rng.uniform(0.1, 5.0, size=6), rng.uniform(0.1, 5.0, size=6)
    assert vector_rearrangement_bounds(u, v, power(3.0)).satisfied
    assert london_bounds(u, np.append(v[:-1], 0.0), power(2.0)).satisfied
