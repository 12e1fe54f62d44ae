"""Seeded generators for test matrices, SPD datasets and clustered datasets."""

from collections.abc import Sequence

import numpy as np

from src.exceptions import InvalidParameterError
from src.linalg.spd import SpdMatrix, spd_exp, spd_power
from src.linalg.types import FloatArray, read_only

Seed = int | np.random.Generator

DEFAULT_SINGULAR_RANGE = (0.8, 3.0)
DEFAULT_CLUSTER_CENTERS = (0.0, 5.0)


def _rng(seed: Seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def _require_size(name: str, value: int) -> None:
    if value < 1:
        raise InvalidParameterError(name, value, "a positive integer")


def random_orthogonal(n: int, seed: Seed = 0) -> FloatArray:
    """Haar-distributed orthogonal matrix from the QR factorization of a Gaussian matrix."""
    _require_size("n", n)
    q, r = np.linalg.qr(_rng(seed).standard_normal((n, n)))
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return read_only(q * signs)


def random_spd(n: int, seed: Seed = 0, condition_target: float = 10.0) -> SpdMatrix:
    """Q Diag(lam) Q^T with log lam uniform in [-log sqrt(kappa), log sqrt(kappa)]."""
    _require_size("n", n)
    if condition_target < 1:
        raise InvalidParameterError("condition_target", condition_target, "a value >= 1")
    rng = _rng(seed)
    half_width = 0.5 * np.log(condition_target)
    eigenvalues = np.exp(rng.uniform(-half_width, half_width, size=n))
    return SpdMatrix.from_eig(random_orthogonal(n, rng), eigenvalues)


def random_matrix_with_singular_values(
    singular_values: Sequence[float], shape: tuple[int, int], seed: Seed = 0
) -> FloatArray:
    m, n = shape
    _require_size("rows", m)
    _require_size("cols", n)
    sigma = np.asarray(singular_values, dtype=np.float64)
    if sigma.shape != (min(m, n),):
        raise InvalidParameterError(
            "singular_values", sigma.tolist(), f"{min(m, n)} values for shape {shape}"
        )
    rng = _rng(seed)
    u = random_orthogonal(m, rng)
    v = random_orthogonal(n, rng)
    middle = np.zeros(shape)
    middle[np.arange(sigma.size), np.arange(sigma.size)] = sigma
    return read_only(u @ middle @ v.T)


def random_matrix(
    shape: tuple[int, int],
    seed: Seed = 0,
    singular_range: tuple[float, float] = DEFAULT_SINGULAR_RANGE,
) -> FloatArray:
    """Full-rank matrix with singular values uniform in ``singular_range``."""
    rng = _rng(seed)
    low, high = singular_range
    sigma = np.sort(rng.uniform(low, high, size=min(shape)))[::-1]
    return random_matrix_with_singular_values(sigma, shape, rng)


def random_rank_deficient(n: int, rank: int, seed: Seed = 0) -> FloatArray:
    """n x n matrix of exactly ``rank`` nonzero singular values."""
    _require_size("n", n)
    if not 0 <= rank < n:
        raise InvalidParameterError("rank", rank, f"0 <= rank < {n}")
    rng = _rng(seed)
    low, high = DEFAULT_SINGULAR_RANGE
    sigma = np.zeros(n)
    sigma[:rank] = np.sort(rng.uniform(low, high, size=rank))[::-1]
    return random_matrix_with_singular_values(sigma, (n, n), rng)


def random_spd_near(center: SpdMatrix, spread: float, seed: Seed = 0) -> SpdMatrix:
    """C^1/2 Exp(spread * S) C^1/2 for a random symmetric S with unit-variance entries."""
    rng = _rng(seed)
    gaussian = rng.standard_normal((center.n, center.n))
    tangent = spread * (gaussian + gaussian.T) / np.sqrt(2.0)
    root = spd_power(center, 0.5).matrix
    moved = root @ spd_exp(tangent).matrix @ root
    return SpdMatrix.from_array((moved + moved.T) / 2.0)


def random_spd_clusters(
    n: int,
    size: int,
    seed: Seed = 0,
    spread: float = 0.05,
    log_scales: Sequence[float] = DEFAULT_CLUSTER_CENTERS,
) -> list[SpdMatrix]:
    """``size`` matrices split evenly over clusters centred at exp(c) I for c in ``log_scales``.

    Items alternate between clusters, so any prefix is balanced.
    """
    _require_size("n", n)
    _require_size("size", size)
    rng = _rng(seed)
    centers = [SpdMatrix.from_eig(np.eye(n), np.full(n, np.exp(c))) for c in log_scales]
    return [random_spd_near(centers[k % len(centers)], spread, rng) for k in range(size)]
