from dataclasses import dataclass
from typing import Any

import numpy as np
import numpy.typing as npt

from src.exceptions import InvalidInputError

FloatArray = npt.NDArray[np.float64]


def read_only(array: FloatArray) -> FloatArray:
    array.setflags(write=False)
    return array


def as_matrix(x: Any, name: str = "matrix") -> FloatArray:
    """Validate ``x`` as a finite, non-empty 2-D float matrix and return a read-only copy."""
    try:
        array = np.array(x, dtype=np.float64)
    except (TypeError, ValueError) as e:
        msg = f"{name} is not a real matrix: {e}"
        raise InvalidInputError(msg) from e
    if array.ndim != 2 or 0 in array.shape:
        msg = f"{name} must be a non-empty 2-D matrix, got shape {array.shape}"
        raise InvalidInputError(msg)
    if not np.all(np.isfinite(array)):
        msg = f"{name} contains NaN or infinite entries"
        raise InvalidInputError(msg)
    return read_only(array)


def as_vector(x: Any, name: str = "vector") -> FloatArray:
    try:
        array = np.array(x, dtype=np.float64)
    except (TypeError, ValueError) as e:
        msg = f"{name} is not a real vector: {e}"
        raise InvalidInputError(msg) from e
    if array.ndim != 1 or array.size == 0:
        msg = f"{name} must be a non-empty 1-D vector, got shape {array.shape}"
        raise InvalidInputError(msg)
    if not np.all(np.isfinite(array)):
        msg = f"{name} contains NaN or infinite entries"
        raise InvalidInputError(msg)
    return read_only(array)


@dataclass(frozen=True)
class EigFactorization:
    """``S = Q Diag(eigenvalues) Q^T`` with eigenvalues sorted non-increasing."""

    q: FloatArray
    eigenvalues: FloatArray

    def reconstruct(self) -> FloatArray:
        return (self.q * self.eigenvalues) @ self.q.T


@dataclass(frozen=True)
class SvdFactorization:
    """Full SVD in wide orientation (rows <= cols).

    ``u`` is m x m, ``v`` is n x n and ``singular_values`` has length m, sorted
    non-increasing. When the input had more rows than columns it was transposed first and
    ``transposed`` is set; :meth:`reconstruct` undoes that.
    """

    u: FloatArray
    singular_values: FloatArray
    v: FloatArray
    transposed: bool = False

    @property
    def m(self) -> int:
        return int(self.singular_values.size)

    @property
    def v1(self) -> FloatArray:
        return self.v[:, : self.m]

    @property
    def v2(self) -> FloatArray:
        return self.v[:, self.m :]

    def reconstruct(self) -> FloatArray:
        wide = (self.u * self.singular_values) @ self.v1.T
        return wide.T if self.transposed else wide
