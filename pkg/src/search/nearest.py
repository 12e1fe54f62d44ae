"""Exact 1-nearest-neighbor search under d_q, pruned by the sorted-spectrum lower bound.

The bound (sum_i |log lam_i(Q) - log lam_i(X)|^q)^(1/q) never exceeds d_q(Q, X), so every
candidate whose bound is above the best distance found so far can be skipped without
changing the answer.
"""

import logging
import time
from collections.abc import Sequence
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict

from src.exceptions import (
    DimensionMismatchError,
    EmptyDatasetError,
    InvalidParameterError,
    PropertyViolationError,
)
from src.geometry.distance import affine_invariant_distance, sorted_log_spectrum
from src.linalg.spd import SpdMatrix, as_spd
from src.linalg.types import FloatArray, as_vector
from src.search.dataset import SpdDataset, SpectraCache, build_cache

logger = logging.getLogger(__name__)

PRUNE_SLACK = 1e-9


class QueryStats(BaseModel):
    exact_evaluations: int
    pruned: int
    best_id: int
    best_distance: float

    model_config = ConfigDict(frozen=True)


class NeighborResult(BaseModel):
    neighbor_id: int
    distance: float
    stats: QueryStats

    model_config = ConfigDict(frozen=True)


class GapSummary(BaseModel):
    """Distribution of exact distance minus lower bound over all (query, item) pairs."""

    minimum: float
    median: float
    mean: float
    maximum: float

    model_config = ConfigDict(frozen=True)


class PruningReport(BaseModel):
    queries: int
    dataset_size: int
    q: float
    seed: int
    mean_pruning_fraction: float
    pruning_fractions: list[float]
    pruned_seconds: float
    brute_force_seconds: float
    bound_gaps: GapSummary
    results: list[NeighborResult]

    model_config = ConfigDict(frozen=True)


def _require_q(q: float) -> None:
    if q < 1:
        raise InvalidParameterError("q", q, "q >= 1")


def lower_bound_distance(query_spectrum: Any, item_spectrum: Any, q: float = 2.0) -> float:
    """Lower bound on d_q from two log-spectra sorted non-increasing."""
    query, item = as_vector(query_spectrum, "query spectrum"), as_vector(item_spectrum, "item")
    if query.shape != item.shape:
        raise DimensionMismatchError(query.shape, item.shape, "spectra of equal length")
    return float(np.sum(np.abs(query - item) ** q) ** (1.0 / q))


def lower_bounds(query_spectrum: Any, cache: SpectraCache, q: float = 2.0) -> FloatArray:
    """:func:`lower_bound_distance` against every cached item at once."""
    query = as_vector(query_spectrum, "query spectrum")
    if cache.log_spectra.shape[1:] != query.shape:
        raise DimensionMismatchError(
            query.shape, cache.log_spectra.shape[1:], "query and dataset spectra of equal length"
        )
    sums = np.sum(np.abs(cache.log_spectra - query) ** q, axis=1)
    return np.asarray(sums ** (1.0 / q), dtype=np.float64)


def _check_query(query: SpdMatrix, ds: SpdDataset) -> None:
    if not len(ds):
        raise EmptyDatasetError
    if query.n != ds.dimension:
        raise DimensionMismatchError(
            query.matrix.shape, ds.items[0].matrix.shape, "query and dataset matrices"
        )


def _improves(distance: float, item_id: int, best: float, best_id: int | None) -> bool:
    if best_id is None or distance < best:
        return True
    return distance == best and item_id < best_id


def nearest_neighbor(
    query: Any,
    ds: SpdDataset,
    cache: SpectraCache,
    q: float = 2.0,
    prune_slack: float = PRUNE_SLACK,
) -> NeighborResult:
    """Exact argmin of d_q(query, .) over the dataset, ties going to the smallest id.

    Candidates are scanned by ascending lower bound. Once a bound exceeds the best distance
    by more than ``prune_slack * (1 + best)`` every remaining candidate is pruned.
    """
    _require_q(q)
    target = as_spd(query)
    _check_query(target, ds)
    if len(cache) != len(ds):
        msg = f"cache of {len(cache)} spectra does not match dataset of {len(ds)}"
        raise PropertyViolationError("spectra cache", msg)
    bounds = lower_bounds(sorted_log_spectrum(target), cache, q)
    ids = np.asarray(ds.ids)
    order = np.lexsort((ids, bounds))

    best, best_id = np.inf, None
    evaluated = 0
    for position, index in enumerate(order):
        if bounds[index] > best + prune_slack * (1.0 + best):
            logger.debug(
                "Pruning %d candidates: bound %.6g exceeds best %.6g",
                len(order) - position,
                bounds[index],
                best,
            )
            break
        distance = affine_invariant_distance(target, ds.items[index], q)
        evaluated += 1
        item_id = int(ids[index])
        if _improves(distance, item_id, best, best_id):
            best, best_id = distance, item_id

    if best_id is None:
        raise EmptyDatasetError
    stats = QueryStats(
        exact_evaluations=evaluated,
        pruned=len(ds) - evaluated,
        best_id=best_id,
        best_distance=float(best),
    )
    return NeighborResult(neighbor_id=best_id, distance=float(best), stats=stats)


def brute_force_neighbor(query: Any, ds: SpdDataset, q: float = 2.0) -> NeighborResult:
    """Exhaustive search; the oracle the pruned search must match."""
    _require_q(q)
    target = as_spd(query)
    _check_query(target, ds)
    best, best_id = np.inf, None
    for item_id, item in zip(ds.ids, ds.items, strict=True):
        distance = affine_invariant_distance(target, item, q)
        if _improves(distance, item_id, best, best_id):
            best, best_id = distance, item_id
    if best_id is None:
        raise EmptyDatasetError
    stats = QueryStats(
        exact_evaluations=len(ds), pruned=0, best_id=best_id, best_distance=float(best)
    )
    return NeighborResult(neighbor_id=best_id, distance=float(best), stats=stats)


def _all_distances(query: SpdMatrix, ds: SpdDataset, q: float) -> FloatArray:
    return np.array([affine_invariant_distance(query, item, q) for item in ds.items])


def bench_pruning(
    ds: SpdDataset, queries: Sequence[Any], q: float = 2.0, seed: int = 0
) -> PruningReport:
    """Run pruned and brute-force search for every query and compare them.

    ``seed`` shuffles which of the two strategies runs first for each query so neither one
    is always timed on a warm cache. Any disagreement raises
    :class:`PropertyViolationError`.
    """
    _require_q(q)
    if not queries:
        raise InvalidParameterError("queries", len(queries), "at least one query")
    rng = np.random.default_rng(seed)
    cache = build_cache(ds)
    targets = [as_spd(query) for query in queries]
    pruned_seconds = brute_seconds = 0.0
    fractions: list[float] = []
    gaps: list[FloatArray] = []
    results: list[NeighborResult] = []

    for number, target in enumerate(targets):
        pruned_first = bool(rng.integers(2))
        timings: dict[str, float] = {}
        outcomes: dict[str, NeighborResult] = {}
        for strategy in ("pruned", "brute") if pruned_first else ("brute", "pruned"):
            start = time.perf_counter()
            if strategy == "pruned":
                outcomes[strategy] = nearest_neighbor(target, ds, cache, q)
            else:
                outcomes[strategy] = brute_force_neighbor(target, ds, q)
            timings[strategy] = time.perf_counter() - start
        pruned_seconds += timings["pruned"]
        brute_seconds += timings["brute"]

        pruned, brute = outcomes["pruned"], outcomes["brute"]
        if (pruned.neighbor_id, pruned.distance) != (brute.neighbor_id, brute.distance):
            raise PropertyViolationError(
                "knn exactness",
                f"query {number}: pruned search found id {pruned.neighbor_id} at "
                f"{pruned.distance!r}, brute force id {brute.neighbor_id} at {brute.distance!r}",
            )
        fractions.append(pruned.stats.pruned / len(ds))
        bounds = lower_bounds(sorted_log_spectrum(target), cache, q)
        gaps.append(_all_distances(target, ds, q) - bounds)
        results.append(pruned)

    all_gaps = np.concatenate(gaps)
    summary = GapSummary(
        minimum=float(np.min(all_gaps)),
        median=float(np.median(all_gaps)),
        mean=float(np.mean(all_gaps)),
        maximum=float(np.max(all_gaps)),
    )
    mean_fraction = float(np.mean(fractions))
    logger.info(
        "Pruned %.1f%% of exact evaluations over %d queries (%.3fs vs %.3fs brute force)",
        100.0 * mean_fraction,
        len(targets),
        pruned_seconds,
        brute_seconds,
    )
    return PruningReport(
        queries=len(targets),
        dataset_size=len(ds),
        q=q,
        seed=seed,
        mean_pruning_fraction=mean_fraction,
        pruning_fractions=fractions,
        pruned_seconds=pruned_seconds,
        brute_force_seconds=brute_seconds,
        bound_gaps=summary,
        results=results,
    )
