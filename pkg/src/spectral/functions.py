"""Scalar functions f that spectral sums and rearrangement bounds are parameterized by.

Every instance declares how s -> s f'(s) behaves on the positive reals; the rearrangement
bounds pick their orientation from that declaration, so :func:`audit_sfprime_class` samples
it before anything relies on it.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass
from enum import Enum
from typing import Any

import numpy as np
import numpy.typing as npt

from src.exceptions import DomainError, InvalidParameterError, UnsupportedFunctionError
from src.linalg.types import FloatArray

logger = logging.getLogger(__name__)

BoolArray = npt.NDArray[np.bool_]
ArrayFunction = Callable[[FloatArray], FloatArray]

AUDIT_RANGE = (1e-4, 1e4)
AUDIT_PAIRS = 1000
AUDIT_TIE_TOL = 1e-12


class SFPrimeClass(str, Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"
    NEITHER = "neither"

    def flipped(self) -> "SFPrimeClass":
        if self is SFPrimeClass.INCREASING:
            return SFPrimeClass.DECREASING
        if self is SFPrimeClass.DECREASING:
            return SFPrimeClass.INCREASING
        return self


@dataclass(frozen=True)
class ScalarFunction:
    """A scalar function with its derivative, domain and declared class of s f'(s).

    ``domain`` optionally narrows the positive reals further (for example the log argument
    of ``ab_general`` must stay positive); zero is admitted only when
    ``domain_includes_zero`` is set.
    """

    label: str
    f: ArrayFunction
    f_prime: ArrayFunction
    domain_includes_zero: bool
    sfprime_class: SFPrimeClass
    domain: Callable[[FloatArray], BoolArray] | None = None

    def in_domain(self, s: Any) -> BoolArray:
        values = np.atleast_1d(np.asarray(s, dtype=np.float64))
        inside = values >= 0 if self.domain_includes_zero else values > 0
        if self.domain is not None:
            positive = np.where(values > 0, values, 1.0)
            with np.errstate(all="ignore"):
                extra = self.domain(positive)
            inside &= (values == 0) | extra
        return inside

    def check_domain(self, s: Any) -> FloatArray:
        values = np.atleast_1d(np.asarray(s, dtype=np.float64))
        inside = self.in_domain(values)
        if not np.all(inside):
            index = int(np.flatnonzero(~inside)[0])
            raise DomainError(self.label, index, float(values[index]))
        return values

    def __call__(self, s: Any) -> FloatArray:
        values = self.check_domain(s)
        with np.errstate(divide="ignore"):
            return self.f(values)

    def derivative(self, s: Any) -> FloatArray:
        values = self.check_domain(s)
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.f_prime(values)

    def sfprime(self, s: Any) -> FloatArray:
        values = self.check_domain(s)
        return values * self.derivative(values)

    def total(self, s: Any) -> float:
        return float(np.sum(self(s)))

    def scaled(self, factor: float, label: str | None = None) -> "ScalarFunction":
        """``factor * f``; a negative factor flips the declared class."""
        if factor == 0:
            raise InvalidParameterError("factor", factor, "a non-zero scale")
        base_f, base_prime = self.f, self.f_prime
        return ScalarFunction(
            label=label or f"{factor:g}*{self.label}",
            f=lambda s: factor * base_f(s),
            f_prime=lambda s: factor * base_prime(s),
            domain_includes_zero=self.domain_includes_zero,
            sfprime_class=self.sfprime_class if factor > 0 else self.sfprime_class.flipped(),
            domain=self.domain,
        )


def power(q: float) -> ScalarFunction:
    """f(s) = s^q; s f'(s) = q s^q is increasing for every q != 0 (constant for q = 0)."""
    if q == 0:
        return ScalarFunction(
            label="power(0)",
            f=np.ones_like,
            f_prime=np.zeros_like,
            domain_includes_zero=False,
            sfprime_class=SFPrimeClass.INCREASING,
        )
    return ScalarFunction(
        label=f"power({q:g})",
        f=lambda s: s**q,
        f_prime=lambda s: q * s ** (q - 1),
        domain_includes_zero=q > 0,
        sfprime_class=SFPrimeClass.INCREASING,
    )


def log_function() -> ScalarFunction:
    # s f'(s) == 1 is constant: both orientations hold, classified increasing
    return ScalarFunction(
        label="log",
        f=np.log,
        f_prime=lambda s: 1.0 / s,
        domain_includes_zero=False,
        sfprime_class=SFPrimeClass.INCREASING,
    )


def abs_log_pow(q: float) -> ScalarFunction:
    """f(s) = |log s|^q for q >= 1; s f'(s) = sgn(log s) q |log s|^(q-1)."""
    if q < 1:
        raise InvalidParameterError("q", q, "q >= 1 for abs_log_pow")

    def f_prime(s: FloatArray) -> FloatArray:
        logs = np.log(s)
        return q * np.sign(logs) * np.abs(logs) ** (q - 1) / s

    return ScalarFunction(
        label=f"abs_log_pow({q:g})",
        f=lambda s: np.abs(np.log(s)) ** q,
        f_prime=f_prime,
        domain_includes_zero=False,
        sfprime_class=SFPrimeClass.INCREASING,
    )


def ab_general(alpha: float, beta: float) -> ScalarFunction:
    """f(s) = log((alpha s^beta + beta s^-alpha) / (alpha + beta)).

    s f'(s) is increasing when alpha*beta > 0 and decreasing when alpha*beta < 0; for
    alpha*beta < 0 the log argument is positive only on part of the half line.
    """
    if alpha * beta == 0 or alpha + beta == 0:
        raise InvalidParameterError(
            "(alpha, beta)", (alpha, beta), "alpha*beta != 0 and alpha+beta != 0"
        )

    def argument(s: FloatArray) -> FloatArray:
        return (alpha * s**beta + beta * s ** (-alpha)) / (alpha + beta)

    def f_prime(s: FloatArray) -> FloatArray:
        numerator = alpha * beta * (s**beta - s ** (-alpha))
        return numerator / (alpha * s**beta + beta * s ** (-alpha)) / s

    return ScalarFunction(
        label=f"ab_general({alpha:g},{beta:g})",
        f=lambda s: np.log(argument(s)),
        f_prime=f_prime,
        domain_includes_zero=False,
        sfprime_class=SFPrimeClass.INCREASING if alpha * beta > 0 else SFPrimeClass.DECREASING,
        domain=lambda s: argument(s) > 0,
    )


def ab_beta0(alpha: float) -> ScalarFunction:
    """f(s) = s^-alpha + alpha log s - 1; s f'(s) = alpha (1 - s^-alpha)."""
    if alpha == 0:
        raise InvalidParameterError("alpha", alpha, "a non-zero value for ab_beta0")
    return ScalarFunction(
        label=f"ab_beta0({alpha:g})",
        f=lambda s: s ** (-alpha) + alpha * np.log(s) - 1.0,
        f_prime=lambda s: alpha * (1.0 - s ** (-alpha)) / s,
        domain_includes_zero=False,
        sfprime_class=SFPrimeClass.INCREASING,
    )


def ab_alpha0(beta: float) -> ScalarFunction:
    """f(s) = s^beta - beta log s - 1; s f'(s) = beta (s^beta - 1)."""
    if beta == 0:
        raise InvalidParameterError("beta", beta, "a non-zero value for ab_alpha0")
    return ScalarFunction(
        label=f"ab_alpha0({beta:g})",
        f=lambda s: s**beta - beta * np.log(s) - 1.0,
        f_prime=lambda s: beta * (s**beta - 1.0) / s,
        domain_includes_zero=False,
        sfprime_class=SFPrimeClass.INCREASING,
    )


def ab_neg(alpha: float) -> ScalarFunction:
    """f(s) = log(s^alpha / (1 + alpha log s)) on {s : 1 + alpha log s > 0}."""
    if alpha == 0:
        raise InvalidParameterError("alpha", alpha, "a non-zero value for ab_neg")

    def f_prime(s: FloatArray) -> FloatArray:
        logs = np.log(s)
        return alpha**2 * logs / (s * (1.0 + alpha * logs))

    return ScalarFunction(
        label=f"ab_neg({alpha:g})",
        f=lambda s: alpha * np.log(s) - np.log(1.0 + alpha * np.log(s)),
        f_prime=f_prime,
        domain_includes_zero=False,
        sfprime_class=SFPrimeClass.INCREASING,
        domain=lambda s: 1.0 + alpha * np.log(s) > 0,
    )


FUNCTION_NAMES = ("power", "log", "abs_log_pow", "ab_general", "ab_beta0", "ab_alpha0", "ab_neg")


def _require(name: str, value: float | None, fn_name: str) -> float:
    if value is None:
        raise InvalidParameterError(name, value, f"a value for function '{fn_name}'")
    return value


def make_function(
    name: str, q: float | None = None, alpha: float | None = None, beta: float | None = None
) -> ScalarFunction:
    """Build a built-in function from its name and parameters (the CLI's ``--fn``)."""
    if name == "power":
        return power(_require("q", q, name))
    if name == "log":
        return log_function()
    if name == "abs_log_pow":
        return abs_log_pow(_require("q", q, name))
    if name == "ab_general":
        return ab_general(_require("alpha", alpha, name), _require("beta", beta, name))
    if name == "ab_beta0":
        return ab_beta0(_require("alpha", alpha, name))
    if name == "ab_alpha0":
        return ab_alpha0(_require("beta", beta, name))
    if name == "ab_neg":
        return ab_neg(_require("alpha", alpha, name))
    raise UnsupportedFunctionError(name, f"unknown function name, expected one of {FUNCTION_NAMES}")


def audit_sfprime_class(
    fn: ScalarFunction,
    pairs: int = AUDIT_PAIRS,
    seed: int = 0,
    tie_tol: float = AUDIT_TIE_TOL,
) -> bool:
    """Check the declared class of s f'(s) on random pairs s2 > s1 > 0.

    Pairs are log-uniform in [1e-4, 1e4] and restricted to the function's domain. Ties
    within ``tie_tol`` (relative) are accepted for either monotone class.
    """
    if fn.sfprime_class is SFPrimeClass.NEITHER:
        return True
    rng = np.random.default_rng(seed)
    low, high = np.log(AUDIT_RANGE[0]), np.log(AUDIT_RANGE[1])
    draws = np.exp(rng.uniform(low, high, size=(20 * pairs, 2)))
    draws.sort(axis=1)
    valid = fn.in_domain(draws[:, 0]) & fn.in_domain(draws[:, 1]) & (draws[:, 1] > draws[:, 0])
    sample = draws[valid][:pairs]
    if sample.shape[0] == 0:
        logger.warning("No audit pairs fall in the domain of %s", fn.label)
        return False
    first = fn.sfprime(sample[:, 0])
    second = fn.sfprime(sample[:, 1])
    difference = second - first
    scale = tie_tol * np.maximum(1.0, np.maximum(np.abs(first), np.abs(second)))
    if fn.sfprime_class is SFPrimeClass.INCREASING:
        violations = difference < -scale
    else:
        violations = difference > scale
    count = int(np.count_nonzero(violations))
    if count:
        logger.warning(
            "%s violates its declared %s class on %d of %d pairs",
            fn.label,
            fn.sfprime_class.value,
            count,
            sample.shape[0],
        )
    return count == 0
