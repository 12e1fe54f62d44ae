from __future__ import annotations

import logging
import sys
from collections.abc import Callable
from functools import wraps
from pathlib import Path
from typing import Any, TypeVar

import numpy as np
import typer
from pydantic import BaseModel

from src.console_utils import (
    format_error_with_cross,
    format_success_with_checkmark,
    get_status,
    print_error,
    print_error_inline,
    print_label_value,
    print_report,
    print_table,
    print_warning,
)
from src.exceptions import (
    EXIT_USAGE,
    EXIT_VIOLATION,
    InvalidParameterError,
    SpecboundError,
)
from src.formats.matrix_text import (
    load_dataset,
    load_matrices,
    load_matrix,
    serialize_dataset,
    serialize_matrix,
    write_text,
)
from src.geometry.ab_divergence import AbParams, ab_logdet_bounds, ab_logdet_divergence
from src.geometry.distance import distance_bounds
from src.inequalities.rearrangement import product_spectrum_bounds, rectangular_product_bound
from src.inequalities.schatten import carlen_lieb_check, schatten_product_bounds
from src.linalg.factorizations import singular_values
from src.linalg.types import FloatArray
from src.logging_setup import SetupLoggerParams, setup_logger
from src.random_matrices import random_matrix, random_spd, random_spd_clusters
from src.reporting import build_report, matrix_digest, text_digest, timed
from src.search.dataset import SpdDataset, build_cache
from src.search.nearest import bench_pruning, brute_force_neighbor, nearest_neighbor
from src.settings import CONFIG_FILE_NAME, DEFAULT_CONFIG_DIR, AppSettings
from src.spectral.functions import FUNCTION_NAMES, make_function
from src.spectral.perturbation import (
    cluster_singular_values,
    perturbation_check,
    predict_perturbed_singular_values,
)
from src.spectral.sums import s_f
from src.verification import Suite, SuiteResult, SuiteTolerances, run_suite

logger = logging.getLogger(__name__)

F = TypeVar("F", bound=Callable[..., Any])

FN_HELP = f"Scalar function, one of: {', '.join(FUNCTION_NAMES)}"

app = typer.Typer(
    name="specbound",
    help="Spectral rearrangement bounds for matrix functions, SPD distances and divergences",
    add_completion=False,
    rich_markup_mode="rich",
    context_settings={"help_option_names": ["-h", "--help"]},
)
compute_app = typer.Typer(help="Evaluate spectral functions of a matrix.")
bounds_app = typer.Typer(help="Eigenvalue and singular-value bounds against exact values.")
generate_app = typer.Typer(help="Write seeded random matrices and datasets.")
app.add_typer(compute_app, name="compute")
app.add_typer(bounds_app, name="bounds")
app.add_typer(generate_app, name="generate")


def _load_settings() -> AppSettings:
    from dotenv import load_dotenv

    load_dotenv()
    try:
        return AppSettings()
    except Exception as e:
        print_error_inline(f"loading settings: {e}")
        sys.exit(EXIT_USAGE)


def _settings(ctx: typer.Context) -> AppSettings:
    settings = ctx.find_root().obj
    if not isinstance(settings, AppSettings):
        settings = _load_settings()
        ctx.find_root().obj = settings
    return settings


def handle_errors(command: F) -> F:
    """Turn library errors into a red panel on stderr and the error's exit code."""

    @wraps(command)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return command(*args, **kwargs)
        except SpecboundError as e:
            logger.debug("Command failed", exc_info=True)
            print_error(str(e), title=type(e).__name__)
            raise typer.Exit(code=e.exit_code) from e

    return wrapper  # type: ignore[return-value]


def _emit(
    command: str,
    result: BaseModel | dict[str, Any],
    elapsed: float,
    output: Path | None,
    input_digests: dict[str, str] | None = None,
    parameters: dict[str, Any] | None = None,
) -> None:
    report = build_report(command, result, elapsed, input_digests, parameters)
    text = report.to_json()
    print_report(text)
    if output is not None:
        write_text(output, text + "\n")


def _digests(**matrices: FloatArray) -> dict[str, str]:
    return {name: matrix_digest(matrix) for name, matrix in matrices.items()}


def _entries_digest(entries: list[tuple[int, FloatArray]]) -> str:
    return text_digest("".join(serialize_matrix(matrix) for _, matrix in entries))


def _dataset_digest(ds: SpdDataset) -> str:
    return _entries_digest([(i, item.matrix) for i, item in zip(ds.ids, ds.items, strict=True)])


def _function_parameters(
    fn: str, q: float | None, alpha: float | None, beta: float | None
) -> dict[str, Any]:
    parameters: dict[str, Any] = {"fn": fn}
    for name, value in (("q", q), ("alpha", alpha), ("beta", beta)):
        if value is not None:
            parameters[name] = value
    return parameters


@compute_app.command("sf")
@handle_errors
def compute_sf(
    matrix_path: Path = typer.Option(..., "--matrix", "-m", help="Matrix text file"),  # noqa: B008
    fn: str = typer.Option(..., "--fn", help=FN_HELP),
    q: float | None = typer.Option(None, "--q", help="Exponent for power / abs_log_pow"),
    alpha: float | None = typer.Option(None, "--alpha", help="Alpha for the AB functions"),
    beta: float | None = typer.Option(None, "--beta", help="Beta for the AB functions"),
    output: Path | None = typer.Option(  # noqa: B008
        None, "--output", "-o", help="Also write the JSON report to this file"
    ),
) -> None:
    """S_f(X) = sum_i f(sigma_i(X)) and the singular values of X."""
    with timed() as stopwatch:
        matrix = load_matrix(matrix_path)
        function = make_function(fn, q=q, alpha=alpha, beta=beta)
        result = {
            "function": function.label,
            "s_f": s_f(matrix, function),
            "singular_values": singular_values(matrix).tolist(),
        }
    _emit(
        "compute sf",
        result,
        stopwatch.elapsed,
        output,
        _digests(matrix=matrix),
        _function_parameters(fn, q, alpha, beta),
    )


@compute_app.command("predict")
@handle_errors
def compute_predict(
    ctx: typer.Context,
    x_path: Path = typer.Option(..., "--x", help="Full-rank matrix X text file"),  # noqa: B008
    y_path: Path = typer.Option(..., "--y", help="Direction Y text file"),  # noqa: B008
    eps: float = typer.Option(..., "--eps", min=0.0, help="Step along Y"),
    output: Path | None = typer.Option(  # noqa: B008
        None, "--output", "-o", help="Also write the JSON report to this file"
    ),
) -> None:
    """First-order prediction of sigma(X + eps Y) next to the exact singular values."""
    core = _settings(ctx).core
    with timed() as stopwatch:
        x, y = load_matrix(x_path), load_matrix(y_path)
        sigma = singular_values(x)
        clusters = cluster_singular_values(sigma, core.cluster_rel_tol, core.cluster_abs_tol)
        predicted = predict_perturbed_singular_values(
            x, y, eps, core.cluster_rel_tol, core.cluster_abs_tol
        )
        exact = singular_values(x + eps * y)
        result = {
            "singular_values": sigma.tolist(),
            "clusters": clusters.model_dump(mode="python"),
            "predicted": predicted.tolist(),
            "exact": exact.tolist(),
            "max_abs_error": float(np.max(np.abs(predicted - exact))),
        }
    _emit("compute predict", result, stopwatch.elapsed, output, _digests(x=x, y=y), {"eps": eps})


@bounds_app.command("product")
@handle_errors
def bounds_product(
    ctx: typer.Context,
    a_path: Path = typer.Option(..., "--a", help="Matrix A text file"),  # noqa: B008
    b_path: Path = typer.Option(..., "--b", help="Matrix B text file"),  # noqa: B008
    fn: str = typer.Option(..., "--fn", help=FN_HELP),
    q: float | None = typer.Option(None, "--q", help="Exponent for power / abs_log_pow"),
    alpha: float | None = typer.Option(None, "--alpha", help="Alpha for the AB functions"),
    beta: float | None = typer.Option(None, "--beta", help="Beta for the AB functions"),
    output: Path | None = typer.Option(  # noqa: B008
        None, "--output", "-o", help="Also write the JSON report to this file"
    ),
) -> None:
    """Bounds on S_f(AB); rectangular inputs bound S_f(A B^T) instead."""
    rel_tol = _settings(ctx).core.inequality_rel_tol
    with timed() as stopwatch:
        a, b = load_matrix(a_path), load_matrix(b_path)
        function = make_function(fn, q=q, alpha=alpha, beta=beta)
        square = a.shape[0] == a.shape[1] and a.shape == b.shape
        if square:
            report = product_spectrum_bounds(a, b, function, rel_tol)
        else:
            report = rectangular_product_bound(a, b, function, rel_tol)
    parameters = _function_parameters(fn, q, alpha, beta)
    parameters["product"] = "A B" if square else "A B^T"
    _emit("bounds product", report, stopwatch.elapsed, output, _digests(a=a, b=b), parameters)


@bounds_app.command("schatten")
@handle_errors
def bounds_schatten(
    ctx: typer.Context,
    a_path: Path = typer.Option(..., "--a", help="Matrix A text file"),  # noqa: B008
    b_path: Path = typer.Option(..., "--b", help="Matrix B text file"),  # noqa: B008
    q: float = typer.Option(..., "--q", help="Schatten exponent, nonzero"),
    output: Path | None = typer.Option(  # noqa: B008
        None, "--output", "-o", help="Also write the JSON report to this file"
    ),
) -> None:
    """Bounds on ||AB||_q^q from the singular values of A and B."""
    rel_tol = _settings(ctx).core.inequality_rel_tol
    with timed() as stopwatch:
        a, b = load_matrix(a_path), load_matrix(b_path)
        report = schatten_product_bounds(a, b, q, rel_tol)
    _emit("bounds schatten", report, stopwatch.elapsed, output, _digests(a=a, b=b), {"q": q})


@bounds_app.command("trace")
@handle_errors
def bounds_trace(
    ctx: typer.Context,
    a_path: Path = typer.Option(..., "--a", help="SPD matrix A text file"),  # noqa: B008
    b_path: Path = typer.Option(..., "--b", help="SPD matrix B text file"),  # noqa: B008
    q: float = typer.Option(1.0, "--q", help="Exponent, at least 1"),
    output: Path | None = typer.Option(  # noqa: B008
        None, "--output", "-o", help="Also write the JSON report to this file"
    ),
) -> None:
    """Bounds on Tr((B^1/2 A B^1/2)^q) for PSD A and B."""
    rel_tol = _settings(ctx).core.inequality_rel_tol
    with timed() as stopwatch:
        a, b = load_matrix(a_path), load_matrix(b_path)
        report = carlen_lieb_check(a, b, q, rel_tol)
    _emit("bounds trace", report, stopwatch.elapsed, output, _digests(a=a, b=b), {"q": q})


@bounds_app.command("distance")
@handle_errors
def bounds_distance(
    ctx: typer.Context,
    a_path: Path = typer.Option(..., "--a", help="SPD matrix A text file"),  # noqa: B008
    b_path: Path = typer.Option(..., "--b", help="SPD matrix B text file"),  # noqa: B008
    q: float = typer.Option(2.0, "--q", help="Schatten exponent of the distance, at least 1"),
    output: Path | None = typer.Option(  # noqa: B008
        None, "--output", "-o", help="Also write the JSON report to this file"
    ),
) -> None:
    """Bounds on d_q(A, B)^q from the eigenvalues of A and B."""
    rel_tol = _settings(ctx).core.inequality_rel_tol
    with timed() as stopwatch:
        a, b = load_matrix(a_path), load_matrix(b_path)
        report = distance_bounds(a, b, q, rel_tol)
    _emit("bounds distance", report, stopwatch.elapsed, output, _digests(a=a, b=b), {"q": q})


@bounds_app.command("ablogdet")
@handle_errors
def bounds_ablogdet(
    ctx: typer.Context,
    a_path: Path = typer.Option(..., "--a", help="SPD matrix A text file"),  # noqa: B008
    b_path: Path = typer.Option(..., "--b", help="SPD matrix B text file"),  # noqa: B008
    alpha: float = typer.Option(..., "--alpha", help="Alpha"),
    beta: float = typer.Option(..., "--beta", help="Beta"),
    cross_check: bool = typer.Option(
        False, "--cross-check", help="Compare against the matrix-form definition"
    ),
    output: Path | None = typer.Option(  # noqa: B008
        None, "--output", "-o", help="Also write the JSON report to this file"
    ),
) -> None:
    """Bounds on the Alpha-Beta log-det divergence D(A || B)."""
    core = _settings(ctx).core
    params = AbParams(alpha=alpha, beta=beta)
    with timed() as stopwatch:
        a, b = load_matrix(a_path), load_matrix(b_path)
        if cross_check or core.cross_check_matrix_forms:
            ab_logdet_divergence(
                a, b, params, cross_check=True, cross_check_rel_tol=core.cross_check_rel_tol
            )
        report = ab_logdet_bounds(a, b, params, core.inequality_rel_tol)
    parameters = {"alpha": alpha, "beta": beta, "regime": params.regime.value}
    _emit("bounds ablogdet", report, stopwatch.elapsed, output, _digests(a=a, b=b), parameters)


def _show_suite_table(results: list[SuiteResult]) -> None:
    rows = [
        (
            result.suite.value,
            result.checks,
            result.violations,
            f"{result.max_violation:.3e}",
            format_success_with_checkmark("pass")
            if result.passed
            else format_error_with_cross("fail"),
        )
        for result in results
    ]
    print_table("Verification suites", ["suite", "checks", "violations", "max gap", ""], rows)


@app.command()
@handle_errors
def verify(
    ctx: typer.Context,
    suites: list[Suite] | None = typer.Option(  # noqa: B008
        None, "--suite", "-s", help="Suite to run, repeatable (default: every suite)"
    ),
    trials: int | None = typer.Option(None, "--trials", "-n", min=1, help="Random instances"),
    dim: int | None = typer.Option(None, "--dim", "-d", min=1, help="Matrix dimension"),
    seed: int | None = typer.Option(None, "--seed", help="Random seed"),
    output: Path | None = typer.Option(  # noqa: B008
        None, "--output", "-o", help="Also write the JSON report to this file"
    ),
) -> None:
    """Run the seeded property suites; exit 4 when any check fails."""
    settings = _settings(ctx)
    trials = trials if trials is not None else settings.verify.trials
    dim = dim if dim is not None else settings.verify.dim
    seed = seed if seed is not None else settings.verify.seed
    tolerances = SuiteTolerances(
        inequality_rel_tol=settings.core.inequality_rel_tol,
        perturbation_ratio_threshold=settings.core.perturbation_ratio_threshold,
        perturbation_noise_floor=settings.core.perturbation_noise_floor,
    )
    chosen = suites or list(Suite)
    results = []
    with timed() as stopwatch:
        for suite in chosen:
            with get_status(f"Running '{suite.value}' suite..."):
                results.append(run_suite(suite, trials, dim, seed, tolerances))
    _show_suite_table(results)
    passed = all(result.passed for result in results)
    result = {"passed": passed, "suites": [r.model_dump(mode="python") for r in results]}
    parameters = {"suites": [s.value for s in chosen], "trials": trials, "dim": dim, "seed": seed}
    _emit("verify", result, stopwatch.elapsed, output, parameters=parameters)
    if not passed:
        for failed in results:
            for failure in failed.failures:
                print_warning(f"{failed.suite.value}: {failure}")
        raise typer.Exit(code=EXIT_VIOLATION)


@app.command()
@handle_errors
def perturb(
    ctx: typer.Context,
    x_path: Path = typer.Option(..., "--x", help="Full-rank matrix X text file"),  # noqa: B008
    y_path: Path = typer.Option(..., "--y", help="Direction Y text file"),  # noqa: B008
    fn: str = typer.Option(..., "--fn", help=FN_HELP),
    q: float | None = typer.Option(None, "--q", help="Exponent for power / abs_log_pow"),
    alpha: float | None = typer.Option(None, "--alpha", help="Alpha for the AB functions"),
    beta: float | None = typer.Option(None, "--beta", help="Beta for the AB functions"),
    eps_decades: int = typer.Option(5, "--eps-decades", "-k", min=2, help="Number of steps"),
    eps_start: float = typer.Option(1e-2, "--eps-start", help="Largest step"),
    output: Path | None = typer.Option(  # noqa: B008
        None, "--output", "-o", help="Also write the JSON report to this file"
    ),
) -> None:
    """First-order accuracy of S_f(X + eps Y) along eps = E, E/10, E/100, ..."""
    core = _settings(ctx).core
    if eps_start <= 0:
        raise InvalidParameterError("eps-start", eps_start, "a positive step")
    epsilons = [eps_start * 10.0**-k for k in range(eps_decades)]
    with timed() as stopwatch:
        x, y = load_matrix(x_path), load_matrix(y_path)
        function = make_function(fn, q=q, alpha=alpha, beta=beta)
        report = perturbation_check(
            x,
            y,
            function,
            epsilons,
            core.perturbation_ratio_threshold,
            core.perturbation_noise_floor,
        )
    parameters = _function_parameters(fn, q, alpha, beta)
    parameters["epsilons"] = epsilons
    _emit("perturb", report, stopwatch.elapsed, output, _digests(x=x, y=y), parameters)


@app.command()
@handle_errors
def knn(
    ctx: typer.Context,
    dataset_path: Path = typer.Option(..., "--dataset", help="SPD dataset file"),  # noqa: B008
    queries_path: Path = typer.Option(..., "--queries", help="Query dataset file"),  # noqa: B008
    q: float = typer.Option(2.0, "--q", help="Schatten exponent of the distance, at least 1"),
    brute_force: bool = typer.Option(
        False, "--brute-force", help="Scan every item instead of pruning by spectral bounds"
    ),
    output: Path | None = typer.Option(  # noqa: B008
        None, "--output", "-o", help="Also write the JSON report to this file"
    ),
) -> None:
    """Nearest dataset item to every query under the affine-invariant distance."""
    slack = _settings(ctx).core.knn_prune_slack
    with timed() as stopwatch:
        ds = load_dataset(dataset_path)
        queries = load_matrices(queries_path)
        cache = build_cache(ds)
        results = []
        for query_id, query in queries:
            if brute_force:
                neighbor = brute_force_neighbor(query, ds, q)
            else:
                neighbor = nearest_neighbor(query, ds, cache, q, slack)
            results.append({"query_id": query_id, **neighbor.model_dump(mode="python")})
    digests = {"dataset": _dataset_digest(ds), "queries": _entries_digest(queries)}
    parameters = {"q": q, "brute_force": brute_force}
    _emit("knn", {"results": results}, stopwatch.elapsed, output, digests, parameters)


@app.command()
@handle_errors
def bench(
    dataset_path: Path = typer.Option(..., "--dataset", help="SPD dataset file"),  # noqa: B008
    queries_path: Path = typer.Option(..., "--queries", help="Query dataset file"),  # noqa: B008
    q: float = typer.Option(2.0, "--q", help="Schatten exponent of the distance, at least 1"),
    seed: int = typer.Option(0, "--seed", help="Seed for the strategy order"),
    output: Path | None = typer.Option(  # noqa: B008
        None, "--output", "-o", help="Also write the JSON report to this file"
    ),
) -> None:
    """Compare pruned search against brute force: pruning fraction, timings and bound gaps."""
    with timed() as stopwatch:
        ds = load_dataset(dataset_path)
        queries = load_matrices(queries_path)
        with get_status("Benchmarking pruned search..."):
            report = bench_pruning(ds, [query for _, query in queries], q, seed)
    print_label_value("Mean pruning fraction", f"{report.mean_pruning_fraction:.3f}")
    digests = {"dataset": _dataset_digest(ds), "queries": _entries_digest(queries)}
    _emit("bench", report, stopwatch.elapsed, output, digests, {"q": q, "seed": seed})


@generate_app.command("spd")
@handle_errors
def generate_spd(
    output: Path = typer.Option(..., "--output", "-o", help="Dataset file to write"),  # noqa: B008
    n: int = typer.Option(4, "--n", min=1, help="Matrix dimension"),
    count: int = typer.Option(1, "--count", "-c", min=1, help="Number of matrices"),
    condition: float = typer.Option(10.0, "--condition", help="Condition number target"),
    seed: int = typer.Option(0, "--seed", help="Random seed"),
) -> None:
    """Random SPD matrices Q Diag(lam) Q^T written as a dataset."""
    with timed() as stopwatch:
        rng = np.random.default_rng(seed)
        items = [random_spd(n, rng, condition) for _ in range(count)]
        text = serialize_dataset(SpdDataset.from_matrices(items))
        write_text(output, text)
    parameters = {"n": n, "count": count, "condition": condition, "seed": seed}
    digests = {"output": text_digest(text)}
    _emit("generate spd", {"path": str(output)}, stopwatch.elapsed, None, digests, parameters)


@generate_app.command("matrix")
@handle_errors
def generate_matrix(
    output: Path = typer.Option(..., "--output", "-o", help="Matrix file to write"),  # noqa: B008
    rows: int = typer.Option(..., "--rows", "-r", min=1, help="Number of rows"),
    cols: int = typer.Option(..., "--cols", "-c", min=1, help="Number of columns"),
    low: float = typer.Option(0.8, "--low", help="Smallest singular value"),
    high: float = typer.Option(3.0, "--high", help="Largest singular value"),
    seed: int = typer.Option(0, "--seed", help="Random seed"),
) -> None:
    """Random matrix with singular values uniform in [low, high]."""
    if not 0 <= low <= high:
        raise InvalidParameterError("low/high", (low, high), "0 <= low <= high")
    with timed() as stopwatch:
        matrix = random_matrix((rows, cols), seed, (low, high))
        text = serialize_matrix(matrix)
        write_text(output, text)
    parameters = {"rows": rows, "cols": cols, "low": low, "high": high, "seed": seed}
    digests = {"output": text_digest(text)}
    _emit("generate matrix", {"path": str(output)}, stopwatch.elapsed, None, digests, parameters)


@generate_app.command("clusters")
@handle_errors
def generate_clusters(
    output: Path = typer.Option(..., "--output", "-o", help="Dataset file to write"),  # noqa: B008
    n: int = typer.Option(4, "--n", min=1, help="Matrix dimension"),
    count: int = typer.Option(100, "--count", "-c", min=1, help="Number of matrices"),
    spread: float = typer.Option(0.05, "--spread", min=0.0, help="Spread around each centre"),
    seed: int = typer.Option(0, "--seed", help="Random seed"),
) -> None:
    """Two well-separated clusters of SPD matrices, around I and e^5 I."""
    with timed() as stopwatch:
        items = random_spd_clusters(n, count, seed, spread)
        text = serialize_dataset(SpdDataset.from_matrices(items))
        write_text(output, text)
    parameters = {"n": n, "count": count, "spread": spread, "seed": seed}
    digests = {"output": text_digest(text)}
    _emit("generate clusters", {"path": str(output)}, stopwatch.elapsed, None, digests, parameters)


@app.command()
def init() -> None:
    """Interactively write ~/.specbound/config.toml."""
    from src.settings_init import initialize_settings

    initialize_settings(DEFAULT_CONFIG_DIR / CONFIG_FILE_NAME)


@app.command(name="help")
def help_command(ctx: typer.Context) -> None:
    """Show help information."""
    typer.echo(ctx.find_root().get_help())


@app.callback(invoke_without_command=True)
def main(
    ctx: typer.Context,
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log at DEBUG level"),
) -> None:
    settings = _load_settings()
    ctx.obj = settings
    setup_logger(
        SetupLoggerParams.for_cli(
            settings.logging.min_log_level, settings.logging.log_file_path, verbose
        )
    )
    if ctx.invoked_subcommand is None:
        typer.echo(ctx.get_help())


def cli_main() -> None:
    """Entry point for the CLI."""
    app()


if __name__ == "__main__":
    cli_main()
