import numpy as np
import pytest

from src.exceptions import (
    DimensionMismatchError,
    EmptyDatasetError,
    InvalidInputError,
    InvalidParameterError,
    NotPositiveDefiniteError,
)
from src.geometry.distance import affine_invariant_distance, sorted_log_spectrum
from src.random_matrices import random_spd, random_spd_clusters
from src.search.dataset import SpdDataset, build_cache
from src.search.nearest import (
    bench_pruning,
    brute_force_neighbor,
    lower_bound_distance,
    lower_bounds,
    nearest_neighbor,
)


def _random_dataset(size: int, n: int = 3, seed_value: int = 0) -> SpdDataset:
    rng = np.random.default_rng(seed_value)
    return SpdDataset.from_matrices(
        [random_spd(n, rng, condition_target=50.0) for _ in range(size)]
    )


def test_dataset_validation() -> None:
    with pytest.raises(InvalidInputError, match="ids"):
        SpdDataset.from_matrices([np.eye(2)], ids=[0, 1])
    with pytest.raises(InvalidInputError, match="unique"):
        SpdDataset.from_matrices([np.eye(2), np.eye(2)], ids=[3, 3])
    with pytest.raises(DimensionMismatchError):
        SpdDataset.from_matrices([np.eye(2), np.eye(3)])
    with pytest.raises(NotPositiveDefiniteError):
        SpdDataset.from_matrices([np.diag([1.0, -1.0])])


def test_cache_rows_are_sorted_log_spectra() -> None:
    ds = SpdDataset.from_matrices([np.diag([1.0, np.e**2]), np.eye(2)], ids=[7, 9])
    cache = build_cache(ds)
    np.testing.assert_allclose(cache.log_spectra, [[2.0, 0.0], [0.0, 0.0]], atol=1e-15)
    assert cache.ids == (7, 9)
    assert len(build_cache(SpdDataset.from_matrices([]))) == 0


def test_cache_rows_match_the_query_log_spectrum() -> None:
    ds = _random_dataset(5, seed_value=6)
    cache = build_cache(ds)
    for row, item in zip(cache.log_spectra, ds.items, strict=True):
        np.testing.assert_array_equal(row, sorted_log_spectrum(item))


def test_lower_bound_never_exceeds_distance() -> None:
    ds = _random_dataset(20, seed_value=1)
    query = random_spd(3, seed=99, condition_target=50.0)
    bounds = lower_bounds(query.log_eigenvalues(), build_cache(ds))
    exact = np.array([affine_invariant_distance(query, item) for item in ds.items])
    assert np.all(bounds <= exact + 1e-12)
    assert lower_bound_distance([2.0, 0.0], [0.0, 0.0], q=1.0) == pytest.approx(2.0)
    with pytest.raises(DimensionMismatchError):
        lower_bound_distance([1.0], [1.0, 2.0])


def test_isotropic_scaling_of_the_query_loses() -> None:
    query = random_spd(3, seed=4)
    ds = SpdDataset.from_matrices([np.exp(4.0) * query.matrix, query.matrix])
    result = nearest_neighbor(query, ds, build_cache(ds))
    assert result.neighbor_id == 1
    assert result.distance == pytest.approx(0.0, abs=1e-12)
    assert result.stats.exact_evaluations == 1
    assert result.stats.pruned == 1


def test_ties_go_to_the_smallest_id() -> None:
    item = random_spd(2, seed=5)
    ds = SpdDataset.from_matrices([item, item, 3.0 * item.matrix], ids=[5, 2, 0])
    assert nearest_neighbor(item, ds, build_cache(ds)).neighbor_id == 2
    assert brute_force_neighbor(item, ds).neighbor_id == 2


@pytest.mark.parametrize("q", [1.0, 2.0, 3.0])
def test_pruned_search_matches_brute_force(q: float) -> None:
    ds = _random_dataset(60, seed_value=2)
    cache = build_cache(ds)
    rng = np.random.default_rng(3)
    for _ in range(10):
        query = random_spd(3, rng, condition_target=50.0)
        pruned = nearest_neighbor(query, ds, cache, q)
        brute = brute_force_neighbor(query, ds, q)
        assert (pruned.neighbor_id, pruned.distance) == (brute.neighbor_id, brute.distance)
        assert pruned.stats.exact_evaluations + pruned.stats.pruned == len(ds)


def test_pruned_search_is_exact_on_200_items_and_50_queries() -> None:
    ds = _random_dataset(200, n=4, seed_value=11)
    cache = build_cache(ds)
    rng = np.random.default_rng(12)
    for _ in range(50):
        query = random_spd(4, rng, condition_target=50.0)
        pruned = nearest_neighbor(query, ds, cache, q=2.0)
        brute = brute_force_neighbor(query, ds, q=2.0)
        assert pruned.neighbor_id == brute.neighbor_id
        assert pruned.distance == brute.distance


def test_search_argument_errors() -> None:
    empty = SpdDataset.from_matrices([])
    with pytest.raises(EmptyDatasetError):
        brute_force_neighbor(np.eye(2), empty)
    ds = _random_dataset(3)
    with pytest.raises(DimensionMismatchError):
        nearest_neighbor(np.eye(2), ds, build_cache(ds))
    with pytest.raises(InvalidParameterError):
        nearest_neighbor(np.eye(3), ds, build_cache(ds), q=0.5)


def test_isotropic_dataset_prunes_all_but_one() -> None:
    ds = SpdDataset.from_matrices([np.exp(k) * np.eye(2) for k in range(10)])
    report = bench_pruning(ds, [np.exp(3.2) * np.eye(2)])
    assert report.results[0].neighbor_id == 3
    assert report.mean_pruning_fraction == pytest.approx(0.9)
    assert report.bound_gaps.maximum == pytest.approx(0.0, abs=1e-10)


def test_clustered_dataset_prunes_at_least_half() -> None:
    ds = SpdDataset.from_matrices(random_spd_clusters(4, 80, seed=0))
    queries = random_spd_clusters(4, 10, seed=1)
    report = bench_pruning(ds, queries, q=2.0, seed=0)
    assert report.queries == 10
    assert report.dataset_size == 80
    assert report.mean_pruning_fraction >= 0.5
    assert report.bound_gaps.minimum >= -1e-10


def test_bench_needs_queries() -> None:
    with pytest.raises(InvalidParameterError):
        bench_pruning(_random_dataset(3), [])
