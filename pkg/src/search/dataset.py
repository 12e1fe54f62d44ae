"""SPD datasets and the log-spectra cache the pruned search reads its bounds from."""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

from src.exceptions import DimensionMismatchError, InvalidInputError
from src.geometry.distance import sorted_log_spectrum
from src.linalg.spd import SpdMatrix, as_spd
from src.linalg.types import FloatArray, read_only

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpdDataset:
    items: tuple[SpdMatrix, ...]
    ids: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.items) != len(self.ids):
            msg = f"{len(self.items)} matrices but {len(self.ids)} ids"
            raise InvalidInputError(msg)
        if len(set(self.ids)) != len(self.ids):
            msg = "dataset ids must be unique"
            raise InvalidInputError(msg)
        dimensions = {item.n for item in self.items}
        if len(dimensions) > 1:
            first = self.items[0].matrix.shape
            other = next(item.matrix.shape for item in self.items if item.matrix.shape != first)
            raise DimensionMismatchError(first, other, "all dataset matrices must be n x n")

    @classmethod
    def from_matrices(
        cls, matrices: Iterable[Any], ids: Sequence[int] | None = None
    ) -> "SpdDataset":
        """Validate every matrix as SPD; ids default to 0, 1, 2, ..."""
        items = tuple(as_spd(matrix) for matrix in matrices)
        chosen = tuple(range(len(items))) if ids is None else tuple(int(i) for i in ids)
        return cls(items=items, ids=chosen)

    @property
    def dimension(self) -> int:
        return self.items[0].n if self.items else 0

    def __len__(self) -> int:
        return len(self.items)


@dataclass(frozen=True)
class SpectraCache:
    """Row k holds the log-eigenvalues of item k, sorted non-increasing."""

    log_spectra: FloatArray
    ids: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.ids)


def build_cache(ds: SpdDataset) -> SpectraCache:
    if not len(ds):
        return SpectraCache(log_spectra=read_only(np.zeros((0, 0))), ids=())
    rows = np.vstack([sorted_log_spectrum(item) for item in ds.items])
    logger.info("Built spectra cache for %d matrices of size %d", len(ds), ds.dimension)
    return SpectraCache(log_spectra=read_only(rows), ids=ds.ids)
