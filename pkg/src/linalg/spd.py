"""SPD matrices and the matrix functions defined through their eigendecomposition."""

from dataclasses import dataclass
from typing import Any

import numpy as np
from typing_extensions import Self

from src.exceptions import NotPositiveDefiniteError
from src.linalg.factorizations import MACHINE_EPS, sym_eig, symmetrize
from src.linalg.types import EigFactorization, FloatArray, read_only


def _definiteness_threshold(eigenvalues: FloatArray) -> float:
    return eigenvalues.size * MACHINE_EPS * max(float(eigenvalues[0]), 0.0)


@dataclass(frozen=True)
class SpdMatrix:
    """A symmetric positive (semi)definite matrix with its cached eigendecomposition.

    Build it with :meth:`from_array` (strictly positive definite) or :meth:`from_psd`
    (eigenvalues floored at zero). ``definite`` records which one was used; routes that
    need inverses or logarithms reject semidefinite values.
    """

    matrix: FloatArray
    eig: EigFactorization
    definite: bool = True

    @classmethod
    def from_array(cls, x: Any) -> Self:
        symmetric = symmetrize(x)
        eig = sym_eig(symmetric)
        threshold = _definiteness_threshold(eig.eigenvalues)
        smallest = float(eig.eigenvalues[-1])
        if not smallest > threshold:
            raise NotPositiveDefiniteError(smallest, threshold)
        return cls(matrix=symmetric, eig=eig, definite=True)

    @classmethod
    def from_psd(cls, x: Any) -> Self:
        symmetric = symmetrize(x)
        eig = sym_eig(symmetric)
        eigenvalues = eig.eigenvalues
        # negative eigenvalues within roundoff of zero are floored, larger ones rejected
        threshold = _definiteness_threshold(np.abs(eigenvalues))
        smallest = float(eigenvalues[-1])
        if smallest < -threshold:
            raise NotPositiveDefiniteError(smallest, -threshold)
        if smallest >= 0:
            floored = eig
            matrix = symmetric
        else:
            floored = EigFactorization(q=eig.q, eigenvalues=read_only(np.maximum(eigenvalues, 0.0)))
            matrix = read_only(floored.reconstruct())
        definite = bool(floored.eigenvalues[-1] > _definiteness_threshold(floored.eigenvalues))
        return cls(matrix=matrix, eig=floored, definite=definite)

    @classmethod
    def from_eig(cls, q: FloatArray, eigenvalues: FloatArray) -> Self:
        """Assemble from an orthonormal basis and positive eigenvalues in any order."""
        order = np.argsort(eigenvalues)[::-1]
        sorted_values = np.asarray(eigenvalues, dtype=np.float64)[order]
        threshold = _definiteness_threshold(sorted_values)
        smallest = float(sorted_values[-1])
        if not smallest > threshold:
            raise NotPositiveDefiniteError(smallest, threshold)
        basis = read_only(np.asarray(q, dtype=np.float64)[:, order].copy())
        eig = EigFactorization(q=basis, eigenvalues=read_only(sorted_values))
        matrix = eig.reconstruct()
        return cls(matrix=read_only((matrix + matrix.T) / 2.0), eig=eig, definite=True)

    @property
    def n(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def eigenvalues(self) -> FloatArray:
        return self.eig.eigenvalues

    def log_eigenvalues(self) -> FloatArray:
        self._require_definite()
        return read_only(np.log(self.eig.eigenvalues))

    def _require_definite(self) -> None:
        if not self.definite:
            smallest = float(self.eig.eigenvalues[-1])
            raise NotPositiveDefiniteError(smallest, _definiteness_threshold(self.eigenvalues))


def spd_power(p: SpdMatrix, t: float) -> SpdMatrix:
    """``P^t = Q Diag(lambda^t) Q^T``; semidefinite inputs only accept t > 0."""
    if t == 0:
        n = p.n
        return SpdMatrix.from_eig(np.eye(n), np.ones(n))
    if t == 1:
        return p
    if not p.definite:
        if t < 0:
            p._require_definite()
        powered = p.eig.eigenvalues**t
        matrix = (p.eig.q * powered) @ p.eig.q.T
        eig = EigFactorization(q=p.eig.q, eigenvalues=read_only(powered))
        return SpdMatrix(matrix=read_only((matrix + matrix.T) / 2.0), eig=eig, definite=False)
    return SpdMatrix.from_eig(p.eig.q, p.eig.eigenvalues**t)


def spd_log(p: SpdMatrix) -> FloatArray:
    """Principal matrix logarithm, a symmetric matrix."""
    logs = p.log_eigenvalues()
    matrix = (p.eig.q * logs) @ p.eig.q.T
    return read_only((matrix + matrix.T) / 2.0)


def spd_exp(s: Any) -> SpdMatrix:
    """Matrix exponential of a symmetric matrix; the inverse of :func:`spd_log`."""
    eig = sym_eig(s)
    return SpdMatrix.from_eig(eig.q, np.exp(eig.eigenvalues))


def as_spd(x: Any) -> SpdMatrix:
    """Pass an :class:`SpdMatrix` through, validate anything else with :meth:`from_array`."""
    if isinstance(x, SpdMatrix):
        return x
    return SpdMatrix.from_array(x)
