"""Seeded randomized property suites behind ``specbound verify`` and the property tests.

Each suite draws ``trials`` random instances of size ``dim`` and records every check it
makes; a check fails when its bound chain breaks, when an oracle disagrees beyond its
tolerance, or when the operation raises.
"""

import logging
from collections.abc import Callable
from enum import Enum
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict

from src.exceptions import InvalidParameterError, SpecboundError
from src.geometry.ab_divergence import (
    AbParams,
    ab_logdet_bounds,
    ab_logdet_divergence,
    ab_spectral_sum_bounds,
)
from src.geometry.distance import affine_invariant_distance, distance_bounds
from src.inequalities.rearrangement import (
    product_spectrum_bounds,
    rectangular_product_bound,
    vector_rearrangement_bounds,
)
from src.inequalities.report import INEQUALITY_REL_TOL, BoundsReport, Orientation
from src.inequalities.schatten import carlen_lieb_check, schatten_product_bounds, schatten_q
from src.linalg.factorizations import dilation, singular_values, sym_eig
from src.linalg.spd import SpdMatrix, spd_power
from src.linalg.types import FloatArray
from src.random_matrices import (
    random_matrix,
    random_matrix_with_singular_values,
    random_orthogonal,
    random_rank_deficient,
    random_spd,
)
from src.spectral.functions import ScalarFunction, ab_general, abs_log_pow, log_function, power
from src.spectral.perturbation import (
    NOISE_FLOOR,
    RATIO_THRESHOLD,
    perturbation_check,
    predict_perturbed_singular_values,
)
from src.spectral.sums import finite_difference_gradient, subdifferential_element

logger = logging.getLogger(__name__)

MAX_RECORDED_FAILURES = 20
# every product of two values in this range stays above 1/2, where ab_general(1, -2) ends
NARROW_SINGULAR_RANGE = (0.8, 1.25)
NARROW_CONDITION = 1.5
WIDE_CONDITION = 100.0
EPSILONS = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6)
PREDICTION_EPSILONS = (1e-2, 1e-3, 1e-4)
PREDICTION_MIN_SLOPE = 1.9
DILATION_SHAPES = ((2, 3), (3, 3), (4, 7), (5, 2))
GRADIENT_TOL = 1e-6
EXACT_TOL = 1e-10
ORACLE_REL_TOL = 1e-8
SYMMETRY_REL_TOL = 1e-9
CONTINUITY_TOL = 1e-4
CONTINUITY_STEP = 1e-7
# at 1e-7 cancellation in the doubly degenerate limit exceeds CONTINUITY_TOL
DOUBLE_LIMIT_STEP = 1e-4

AB_PARAMETERS = (
    (1.0, 2.0),
    (1.0, 0.0),
    (0.0, 1.0),
    (1.0, -1.0),
    (0.0, 0.0),
    (1.0, -2.0),
    (0.5, 0.5),
    (-1.0, -2.0),
)


class Suite(str, Enum):
    REARRANGE = "rearrange"
    SCHATTEN = "schatten"
    DISTANCE = "distance"
    ABLOGDET = "ablogdet"
    PERTURB = "perturb"


class SuiteTolerances(BaseModel):
    inequality_rel_tol: float = INEQUALITY_REL_TOL
    perturbation_ratio_threshold: float = RATIO_THRESHOLD
    perturbation_noise_floor: float = NOISE_FLOOR

    model_config = ConfigDict(frozen=True, extra="forbid")


class CheckStatistics(BaseModel):
    checks: int = 0
    failures: int = 0
    max_violation: float = 0.0


class SuiteResult(BaseModel):
    suite: Suite
    trials: int
    dim: int
    seed: int
    checks: int
    violations: int
    max_violation: float
    statistics: dict[str, CheckStatistics]
    failures: list[str]

    model_config = ConfigDict(frozen=True, ser_json_inf_nan="constants")

    @property
    def passed(self) -> bool:
        return self.violations == 0


Verdict = tuple[bool, float, str]


class _Tally:
    def __init__(self) -> None:
        self.statistics: dict[str, CheckStatistics] = {}
        self.failures: list[str] = []

    def record(self, name: str, ok: bool, violation: float = 0.0, detail: str = "") -> None:
        stats = self.statistics.setdefault(name, CheckStatistics())
        stats.checks += 1
        stats.max_violation = max(stats.max_violation, violation)
        if not ok:
            stats.failures += 1
            logger.debug("Check '%s' failed: %s", name, detail)
            if len(self.failures) < MAX_RECORDED_FAILURES:
                self.failures.append(f"{name}: {detail}")

    def holds(self, name: str, run: Callable[..., Verdict], *args: Any) -> None:
        try:
            ok, violation, detail = run(*args)
        except SpecboundError as e:
            self.record(name, ok=False, violation=np.inf, detail=str(e))
            return
        self.record(name, ok, violation, detail)

    def bounds(self, name: str, run: Callable[..., BoundsReport], *args: Any) -> None:
        def verdict() -> Verdict:
            report = run(*args)
            detail = f"{report.lower!r} / {report.exact!r} / {report.upper!r}"
            return report.satisfied, report.violation, f"{detail} ({report.orientation.value})"

        self.holds(name, verdict)

    def close(
        self, name: str, tolerance: float, run: Callable[..., tuple[float, float]], *args: Any
    ) -> None:
        """|value - reference| <= tolerance * (1 + |reference|)."""

        def verdict() -> Verdict:
            value, reference = run(*args)
            error = abs(value - reference)
            allowed = tolerance * (1.0 + abs(reference))
            return error <= allowed, error, f"{value!r} vs {reference!r}"

        self.holds(name, verdict)


def _rearrange_suite(
    rng: np.random.Generator, n: int, tally: _Tally, tolerances: SuiteTolerances
) -> None:
    tol = tolerances.inequality_rel_tol
    increasing = [power(q) for q in (-2.0, -1.0, 0.5, 1.0, 2.0, 3.0)]
    increasing += [abs_log_pow(2.0), ab_general(1.0, 2.0)]
    a, b = random_matrix((n, n), rng), random_matrix((n, n), rng)
    for fn in increasing:
        tally.bounds(f"product {fn.label}", product_spectrum_bounds, a, b, fn, tol)

    decreasing = ab_general(1.0, -2.0)
    near_a = random_matrix((n, n), rng, NARROW_SINGULAR_RANGE)
    near_b = random_matrix((n, n), rng, NARROW_SINGULAR_RANGE)
    tally.bounds(
        f"product {decreasing.label}", product_spectrum_bounds, near_a, near_b, decreasing, tol
    )

    if n > 1:
        singular = random_rank_deficient(n, n - 1, rng)
        for q in (0.5, 1.0, 2.0):
            fn = power(q)
            name = f"singular product {fn.label}"
            tally.bounds(name, product_spectrum_bounds, singular, b, fn, tol)

    shape = (max(1, n - 1), n + 1)
    wide_a, wide_b = random_matrix(shape, rng), random_matrix(shape, rng)
    for q in (2.0, 3.0):
        fn = power(q)
        tally.bounds(f"rectangular {fn.label}", rectangular_product_bound, wide_a, wide_b, fn, tol)

    u, v = rng.uniform(0.8, 1.25, size=n), rng.uniform(0.8, 1.25, size=n)
    for fn in (power(2.0), abs_log_pow(2.0), decreasing):
        tally.bounds(f"vector {fn.label}", vector_rearrangement_bounds, u, v, fn, tol)


def _frobenius_pair(a: FloatArray) -> tuple[float, float]:
    return schatten_q(a, 2.0), float(np.sum(a**2))


def _unitary_pair(
    a: FloatArray, left: FloatArray, right: FloatArray, q: float
) -> tuple[float, float]:
    return schatten_q(left @ a @ right, q), schatten_q(a, q)


def _trace_route_pair(a: SpdMatrix, b: SpdMatrix, q: float) -> tuple[float, float]:
    """Tr((B^1/2 A B^1/2)^q) equals sum_i sigma_i(A^1/2 B^1/2)^(2q)."""
    root_product = spd_power(a, 0.5).matrix @ spd_power(b, 0.5).matrix
    return carlen_lieb_check(a, b, q).exact, schatten_q(root_product, 2.0 * q)


def _schatten_suite(
    rng: np.random.Generator, n: int, tally: _Tally, tolerances: SuiteTolerances
) -> None:
    tol = tolerances.inequality_rel_tol
    a, b = random_matrix((n, n), rng), random_matrix((n, n), rng)
    for q in (-2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 3.0):
        tally.bounds(f"schatten q={q:g}", schatten_product_bounds, a, b, q, tol)

    shape = (max(1, n - 1), n + 1)
    wide_a, wide_b = random_matrix(shape, rng), random_matrix(shape, rng)
    for q in (0.5, 2.0):
        name = f"rectangular schatten q={q:g}"
        tally.bounds(name, schatten_product_bounds, wide_a, wide_b, q, tol)

    tally.close("frobenius identity", EXACT_TOL, _frobenius_pair, a)
    left, right = random_orthogonal(n, rng), random_orthogonal(n, rng)
    tally.close("unitary invariance", SYMMETRY_REL_TOL, _unitary_pair, a, left, right, 1.5)

    spd_a = random_spd(n, rng, WIDE_CONDITION)
    spd_b = random_spd(n, rng, WIDE_CONDITION)
    for q in (1.0, 2.0, 3.0):
        tally.bounds(f"carlen-lieb q={q:g}", carlen_lieb_check, spd_a, spd_b, q, tol)
        tally.close(f"trace route q={q:g}", ORACLE_REL_TOL, _trace_route_pair, spd_a, spd_b, q)


def _congruence(m: FloatArray, p: SpdMatrix) -> FloatArray:
    moved = m @ p.matrix @ m.T
    return (moved + moved.T) / 2.0


def _symmetry_pair(a: SpdMatrix, b: SpdMatrix, q: float) -> tuple[float, float]:
    return affine_invariant_distance(a, b, q), affine_invariant_distance(b, a, q)


def _congruence_pair(
    a: SpdMatrix, b: SpdMatrix, m: FloatArray, q: float
) -> tuple[float, float]:
    moved = affine_invariant_distance(_congruence(m, a), _congruence(m, b), q)
    return moved, affine_invariant_distance(a, b, q)


def _triangle(a: SpdMatrix, b: SpdMatrix, c: SpdMatrix, q: float) -> Verdict:
    direct = affine_invariant_distance(a, c, q)
    detour = affine_invariant_distance(a, b, q) + affine_invariant_distance(b, c, q)
    return direct <= detour + ORACLE_REL_TOL, max(direct - detour, 0.0), f"{direct!r} > {detour!r}"


def _squared_distance_sums(a: SpdMatrix, b: SpdMatrix, tol: float) -> tuple[float, float]:
    """Both q = 2 bounds against a direct evaluation from numpy's eigenvalues."""
    log_a = np.log(np.linalg.eigvalsh(a.matrix))[::-1]
    log_b = np.log(np.linalg.eigvalsh(b.matrix))[::-1]
    report = distance_bounds(a, b, 2.0, tol)
    aligned = float(np.sum((log_a - log_b) ** 2))
    anti_aligned = float(np.sum((log_a - log_b[::-1]) ** 2))
    return report.lower + report.upper, aligned + anti_aligned


def _self_distance(a: SpdMatrix) -> Verdict:
    distance = affine_invariant_distance(a, a, 2.0)
    return distance <= EXACT_TOL, distance, f"d(A, A) = {distance!r}"


def _distance_suite(
    rng: np.random.Generator, n: int, tally: _Tally, tolerances: SuiteTolerances
) -> None:
    tol = tolerances.inequality_rel_tol
    a, b, c = (random_spd(n, rng, WIDE_CONDITION) for _ in range(3))
    m = random_matrix((n, n), rng)
    for q in (1.0, 2.0, 3.0):
        tally.bounds(f"distance bounds q={q:g}", distance_bounds, a, b, q, tol)
        tally.close(f"symmetry q={q:g}", SYMMETRY_REL_TOL, _symmetry_pair, a, b, q)
        tally.close(f"congruence q={q:g}", ORACLE_REL_TOL, _congruence_pair, a, b, m, q)
        tally.holds(f"triangle q={q:g}", _triangle, a, b, c, q)
    tally.close("q=2 sums", EXACT_TOL, _squared_distance_sums, a, b, tol)
    tally.holds("identity of indiscernibles", _self_distance, a)


def _needs_narrow(params: AbParams) -> bool:
    return params.alpha * params.beta < 0 or params.alpha + params.beta == 0


def _matrix_form_pair(a: SpdMatrix, b: SpdMatrix, params: AbParams) -> tuple[float, float]:
    checked = ab_logdet_divergence(a, b, params, cross_check=True)
    return checked, ab_logdet_divergence(a, b, params)


def _self_divergence(a: SpdMatrix, params: AbParams) -> Verdict:
    divergence = ab_logdet_divergence(a, a, params)
    return abs(divergence) <= EXACT_TOL, abs(divergence), f"D(A || A) = {divergence!r}"


def _reversed_chain(a: SpdMatrix, b: SpdMatrix, params: AbParams, tol: float) -> BoundsReport:
    report = ab_spectral_sum_bounds(a, b, params, tol)
    if report.orientation is not Orientation.REVERSED:
        raise InvalidParameterError("orientation", report.orientation.value, "a reversed chain")
    return report


def _continuity(a: SpdMatrix, b: SpdMatrix, near: AbParams, limit: AbParams) -> Verdict:
    gap = abs(ab_logdet_divergence(a, b, near) - ab_logdet_divergence(a, b, limit))
    return gap <= CONTINUITY_TOL, gap, f"gap {gap:.3e}"


def _ablogdet_suite(
    rng: np.random.Generator, n: int, tally: _Tally, tolerances: SuiteTolerances
) -> None:
    tol = tolerances.inequality_rel_tol
    wide = (random_spd(n, rng, WIDE_CONDITION), random_spd(n, rng, WIDE_CONDITION))
    narrow = (random_spd(n, rng, NARROW_CONDITION), random_spd(n, rng, NARROW_CONDITION))
    for alpha, beta in AB_PARAMETERS:
        params = AbParams(alpha=alpha, beta=beta)
        a, b = narrow if _needs_narrow(params) else wide
        tally.bounds(f"bounds {params.label}", ab_logdet_bounds, a, b, params, tol)
        tally.close(f"matrix form {params.label}", ORACLE_REL_TOL, _matrix_form_pair, a, b, params)
        tally.holds(f"self divergence {params.label}", _self_divergence, a, params)

    reversed_params = AbParams(alpha=1.0, beta=-2.0)
    tally.bounds(
        f"reversed spectral sum {reversed_params.label}",
        _reversed_chain,
        *narrow,
        reversed_params,
        tol,
    )

    # continuity gaps are first order in the step and grow with the spread of mu
    step = CONTINUITY_STEP
    limits = (
        ("beta -> 0", (1.0, step), (1.0, 0.0)),
        ("alpha -> 0", (step, 1.0), (0.0, 1.0)),
        ("alpha -> -beta", (1.0, -1.0 + step), (1.0, -1.0)),
        ("alpha, beta -> 0", (DOUBLE_LIMIT_STEP, DOUBLE_LIMIT_STEP), (0.0, 0.0)),
    )
    for name, near, limit in limits:
        near_params = AbParams(alpha=near[0], beta=near[1])
        limit_params = AbParams(alpha=limit[0], beta=limit[1])
        tally.holds(f"continuity {name}", _continuity, *narrow, near_params, limit_params)


def _separated_singular_values(rng: np.random.Generator, count: int) -> FloatArray:
    return 1.0 + 0.5 * np.arange(count)[::-1] + rng.uniform(0.0, 0.1, size=count)


def _first_order(
    x: FloatArray, y: FloatArray, fn: ScalarFunction, tolerances: SuiteTolerances
) -> Verdict:
    report = perturbation_check(
        x,
        y,
        fn,
        EPSILONS,
        tolerances.perturbation_ratio_threshold,
        tolerances.perturbation_noise_floor,
    )
    worst = max(report.error_ratios, default=0.0)
    return report.superlinear, 0.0 if report.superlinear else worst, f"worst ratio {worst:.3g}"


def _gradient_pair(x: FloatArray, fn: ScalarFunction) -> tuple[float, float]:
    difference = subdifferential_element(x, fn) - finite_difference_gradient(x, fn)
    return float(np.max(np.abs(difference))), 0.0


def _dilation_pair(matrix: FloatArray) -> tuple[float, float]:
    sigma = singular_values(matrix)
    zeros = np.zeros(abs(matrix.shape[1] - matrix.shape[0]))
    expected = np.sort(np.concatenate([sigma, -sigma, zeros]))[::-1]
    observed = sym_eig(dilation(matrix)).eigenvalues
    return float(np.max(np.abs(observed - expected))), 0.0


def _prediction_order(x: FloatArray, y: FloatArray) -> Verdict:
    errors = []
    for eps in PREDICTION_EPSILONS:
        predicted = predict_perturbed_singular_values(x, y, eps)
        errors.append(float(np.max(np.abs(singular_values(x + eps * y) - predicted))))
    if min(errors) == 0.0:
        return True, 0.0, "exact prediction"
    slope = float(np.polyfit(np.log(PREDICTION_EPSILONS), np.log(errors), 1)[0])
    return slope >= PREDICTION_MIN_SLOPE, max(PREDICTION_MIN_SLOPE - slope, 0.0), f"{slope=:.3f}"


def _perturb_suite(
    rng: np.random.Generator, n: int, tally: _Tally, tolerances: SuiteTolerances
) -> None:
    x = random_matrix_with_singular_values(_separated_singular_values(rng, n), (n, n), rng)
    y = rng.standard_normal((n, n)) / np.sqrt(n)
    for fn in (power(2.0), power(0.5), abs_log_pow(2.0)):
        tally.holds(f"first order {fn.label}", _first_order, x, y, fn, tolerances)
    for fn in (power(3.0), abs_log_pow(2.0), log_function()):
        tally.close(f"gradient {fn.label}", GRADIENT_TOL, _gradient_pair, x, fn)
    for shape in DILATION_SHAPES:
        matrix = random_matrix(shape, rng)
        tally.close(f"dilation spectrum {shape[0]}x{shape[1]}", EXACT_TOL, _dilation_pair, matrix)

    clustered = _separated_singular_values(rng, n)
    if n > 2:
        clustered[2] = clustered[1]
    x_clustered = random_matrix_with_singular_values(clustered, (n, n), rng)
    tally.holds("clustered prediction order", _prediction_order, x_clustered, y)


SuiteRunner = Callable[[np.random.Generator, int, _Tally, SuiteTolerances], None]

SUITES: dict[Suite, SuiteRunner] = {
    Suite.REARRANGE: _rearrange_suite,
    Suite.SCHATTEN: _schatten_suite,
    Suite.DISTANCE: _distance_suite,
    Suite.ABLOGDET: _ablogdet_suite,
    Suite.PERTURB: _perturb_suite,
}


def run_suite(
    suite: Suite | str,
    trials: int = 100,
    dim: int = 4,
    seed: int = 0,
    tolerances: SuiteTolerances | None = None,
) -> SuiteResult:
    chosen = Suite(suite)
    if trials < 1:
        raise InvalidParameterError("trials", trials, "a positive integer")
    if dim < 1:
        raise InvalidParameterError("dim", dim, "a positive integer")
    tolerances = tolerances or SuiteTolerances()
    rng = np.random.default_rng(seed)
    tally = _Tally()
    logger.info("Running suite '%s': %d trials, dim %d, seed %d", chosen.value, trials, dim, seed)
    for _ in range(trials):
        SUITES[chosen](rng, dim, tally, tolerances)
    stats = list(tally.statistics.values())
    result = SuiteResult(
        suite=chosen,
        trials=trials,
        dim=dim,
        seed=seed,
        checks=sum(s.checks for s in stats),
        violations=sum(s.failures for s in stats),
        max_violation=max((s.max_violation for s in stats), default=0.0),
        statistics=tally.statistics,
        failures=tally.failures,
    )
    logger.info(
        "Suite '%s' finished: %d checks, %d violations",
        chosen.value,
        result.checks,
        result.violations,
    )
    return result
