"""Standard normal quantiles used for critical values."""

from __future__ import annotations

import enum
from statistics import NormalDist

_STANDARD_NORMAL = NormalDist()


class QuantileMode(str, enum.Enum):
    """How critical values are obtained.

    ``PRECISE`` inverts the normal CDF (Wichura's AS241 rational
    approximation, relative error around 1e-16).  ``PAPER_ROUNDED``
    reproduces the printed table values: the significance quantile is
    rounded to three decimals (1.645) and the power quantile to two (1.28).
    """

    PRECISE = "precise"
    PAPER_ROUNDED = "paper-rounded"

    @classmethod
    def parse(cls, value: str | QuantileMode) -> QuantileMode:
        if isinstance(value, cls):
            return value
        normalized = str(value).strip().lower().replace("_", "-")
        for mode in cls:
            if mode.value == normalized:
                return mode
        raise ValueError(f"unknown quantile mode {value!r}; expected 'precise' or 'paper-rounded'")


def normal_quantile(prob: float) -> float:
    """Inverse of the standard normal CDF at ``prob``."""
    if not 0.0 < prob < 1.0:
        raise ValueError(f"quantile probability must lie in (0, 1), got {prob!r}")
    return _STANDARD_NORMAL.inv_cdf(prob)


def significance_quantile(alpha: float, mode: QuantileMode | str = QuantileMode.PRECISE) -> float:
    """Upper-tail critical value z_{1-alpha}."""
    z = normal_quantile(1.0 - alpha)
    if QuantileMode.parse(mode) is QuantileMode.PAPER_ROUNDED:
        return round(z, 3)
    return z


def power_quantile(power: float, mode: QuantileMode | str = QuantileMode.PRECISE) -> float:
    """Quantile z_{power} used when sizing against a true defect rate."""
    z = normal_quantile(power)
    if QuantileMode.parse(mode) is QuantileMode.PAPER_ROUNDED:
        return round(z, 2)
    return z
