"""The report every bound check returns, and the verdict rule behind ``satisfied``."""

import logging
import math
from enum import Enum

from pydantic import BaseModel, ConfigDict

from src.spectral.functions import SFPrimeClass

logger = logging.getLogger(__name__)

INEQUALITY_REL_TOL = 1e-9


class Orientation(str, Enum):
    """``SANDWICH``: lower <= exact <= upper. ``REVERSED``: upper <= exact <= lower."""

    SANDWICH = "sandwich"
    REVERSED = "reversed"

    @classmethod
    def for_class(cls, sfprime_class: SFPrimeClass) -> "Orientation":
        return cls.REVERSED if sfprime_class is SFPrimeClass.DECREASING else cls.SANDWICH


class BoundsReport(BaseModel):
    """Lower bound, exact value and upper bound of one inequality instance.

    ``lower`` always holds the anti-aligned pairing and ``upper`` the aligned one, so under
    ``Orientation.REVERSED`` both gaps are expected to be non-positive. A bound that does
    not exist for the instance is reported as an infinity that satisfies the chain.
    """

    lower: float
    exact: float
    upper: float
    lower_gap: float
    upper_gap: float
    orientation: Orientation
    satisfied: bool
    tolerance: float

    model_config = ConfigDict(frozen=True, ser_json_inf_nan="constants")

    @property
    def violation(self) -> float:
        """How far the chain is broken (0 when it holds exactly)."""
        if self.orientation is Orientation.SANDWICH:
            worst = max(-self.lower_gap, -self.upper_gap)
        else:
            worst = max(self.lower_gap, self.upper_gap)
        return max(worst, 0.0)


def inequality_tolerance(exact: float, rel_tol: float = INEQUALITY_REL_TOL) -> float:
    return rel_tol * (1.0 + abs(exact))


def bounds_report(
    lower: float,
    exact: float,
    upper: float,
    orientation: Orientation = Orientation.SANDWICH,
    rel_tol: float = INEQUALITY_REL_TOL,
) -> BoundsReport:
    if not math.isfinite(exact):
        logger.warning("Exact value %r is not finite", exact)
    tolerance = inequality_tolerance(exact, rel_tol)
    lower_gap = exact - lower
    upper_gap = upper - exact
    if orientation is Orientation.SANDWICH:
        satisfied = lower_gap >= -tolerance and upper_gap >= -tolerance
    else:
        satisfied = lower_gap <= tolerance and upper_gap <= tolerance
    report = BoundsReport(
        lower=lower,
        exact=exact,
        upper=upper,
        lower_gap=lower_gap,
        upper_gap=upper_gap,
        orientation=orientation,
        satisfied=satisfied,
        tolerance=tolerance,
    )
    if satisfied and report.violation > 0:
        logger.debug(
            "Bound chain holds only within tolerance: violation %.3e <= %.3e",
            report.violation,
            tolerance,
        )
    elif not satisfied:
        logger.debug("Bound chain violated by %.3e (%s)", report.violation, orientation.value)
    return report
