"""Defect-rate estimators, the one-sided lot test and minimum sample sizes.

Sampling is simple random sampling without replacement from a lot of
``N`` units holding ``M`` defectives.  The defect count in a sample of ``n``
is hypergeometric; for large lots it is treated as binomial and, for large
``n``, the sample defect rate as normal with mean ``P`` and variance
``P(1-P)/n``.  Every test and sample-size formula here relies on that
normal approximation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import DomainError, UnboundedSampleSizeError
from .quantiles import QuantileMode, power_quantile, significance_quantile

# Sample sizes within this relative distance above an integer snap down to it,
# so float noise in the ratio never adds a unit (e.g. 0.25 * (1.645/0.8225)**2).
CEILING_REL_TOL = 1e-9

# Rule-of-thumb minimum expected count in each class for the normal law.
NORMAL_APPROX_MIN_COUNT = 5.0


def _check_probability(name: str, value: float, *, closed: bool = False) -> None:
    if not isinstance(value, (int, float)) or isinstance(value, bool) or math.isnan(value):
        raise DomainError(f"{name} must be a real number, got {value!r}")
    if closed:
        if not 0.0 <= value <= 1.0:
            raise DomainError(f"{name} must lie in [0, 1], got {value!r}")
    elif not 0.0 < value < 1.0:
        raise DomainError(f"{name} must lie in (0, 1), got {value!r}")


@dataclass(frozen=True)
class PopulationModel:
    """A finite lot of ``total_units`` with ``defective_units`` nonconforming."""

    total_units: int
    defective_units: int

    def __post_init__(self) -> None:
        if self.total_units < 1:
            raise DomainError(f"total_units must be >= 1, got {self.total_units}")
        if not 0 <= self.defective_units <= self.total_units:
            raise DomainError(
                f"defective_units must lie in [0, {self.total_units}], got {self.defective_units}"
            )

    @property
    def defect_rate(self) -> float:
        return self.defective_units / self.total_units


@dataclass(frozen=True)
class SampleObservation:
    sample_size: int
    defect_count: int

    def __post_init__(self) -> None:
        if self.sample_size < 1:
            raise DomainError(f"sample_size must be >= 1, got {self.sample_size}")
        if not 0 <= self.defect_count <= self.sample_size:
            raise DomainError(
                f"defect_count must lie in [0, {self.sample_size}], got {self.defect_count}"
            )


@dataclass(frozen=True)
class TestConfig:
    """Nominal defect rate plus the error budget for a lot test."""

    __test__ = False  # not a pytest class

    nominal_defect_rate: float
    significance_level: float = 0.05
    power: float = 0.90
    quantile_mode: QuantileMode = QuantileMode.PRECISE

    def __post_init__(self) -> None:
        _check_probability("nominal_defect_rate", self.nominal_defect_rate)
        _check_probability("significance_level", self.significance_level)
        _check_probability("power", self.power)
        object.__setattr__(self, "quantile_mode", QuantileMode.parse(self.quantile_mode))


class ErrorType(str, enum.Enum):
    TYPE1 = "type1"
    TYPE2 = "type2"


class Verdict(str, enum.Enum):
    REJECT_LOT = "reject_lot"
    FAIL_TO_REJECT = "fail_to_reject"


@dataclass(frozen=True)
class SamplePlan:
    """A minimum inspection sample size and the inputs that produced it.

    ``input_echo`` is the error limit ``d`` for a Type I plan and the true
    defect rate ``p1`` for a Type II plan.  ``raw_size`` keeps the
    pre-ceiling value of the formula.
    """

    sample_size: int
    error_type_controlled: ErrorType
    quantile_used: float
    input_echo: float
    nominal_defect_rate: float
    raw_size: float

    @property
    def advisory(self) -> str | None:
        return normal_approximation_advisory(self.nominal_defect_rate, self.sample_size)


@dataclass(frozen=True)
class SweepRow:
    swept_value: float
    sample_size: int | None
    error: str | None = None


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...] = field(default_factory=tuple)

    @property
    def failures(self) -> tuple[SweepRow, ...]:
        return tuple(row for row in self.rows if row.error is not None)

    @property
    def sizes(self) -> list[int | None]:
        return [row.sample_size for row in self.rows]


# -- estimators ---------------------------------------------------------------


def sample_defect_rate(obs: SampleObservation) -> float:
    return obs.defect_count / obs.sample_size


def sample_variance(obs: SampleObservation) -> float:
    """Unbiased variance of the 0/1 indicators, ``n/(n-1) * p * (1-p)``."""
    n = obs.sample_size
    if n < 2:
        raise DomainError("sample variance needs sample_size >= 2")
    p = sample_defect_rate(obs)
    return n / (n - 1) * p * (1.0 - p)


def defect_rate_variance(obs: SampleObservation, pop: PopulationModel) -> float:
    """Estimated variance of the sample defect rate under sampling without replacement."""
    n, big_n = obs.sample_size, pop.total_units
    if n > big_n:
        raise DomainError(f"sample_size {n} exceeds lot size {big_n}")
    if n < 2:
        raise DomainError("defect-rate variance needs sample_size >= 2")
    if n == big_n:
        return 0.0
    f = n / big_n
    p = sample_defect_rate(obs)
    return (1.0 - f) / (n - 1) * p * (1.0 - p)


def hypergeometric_moments(pop: PopulationModel, n: int) -> tuple[float, float]:
    """Mean and variance of the defect count in a sample of ``n`` drawn without replacement."""
    big_n = pop.total_units
    if not 1 <= n <= big_n:
        raise DomainError(f"sample size must lie in [1, {big_n}], got {n}")
    rate = pop.defect_rate
    mean = n * rate
    if big_n == 1:
        return mean, 0.0
    correction = (big_n - n) / (big_n - 1)
    variance = n * rate * (1.0 - rate) * correction
    return mean, variance


def binomial_moments(rate: float, n: int) -> tuple[float, float]:
    """Mean and variance of the with-replacement (binomial) defect count."""
    _check_probability("rate", rate, closed=True)
    return n * rate, n * rate * (1.0 - rate)


def normal_approx_params(p: float, n: int) -> tuple[float, float]:
    """Mean and variance of the normal law approximating the sample defect rate."""
    _check_probability("p", p)
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return p, p * (1.0 - p) / n


def normal_approximation_advisory(p0: float, n: int) -> str | None:
    """Warn when fewer than five defectives or conformers are expected in the sample."""
    if n * p0 < NORMAL_APPROX_MIN_COUNT or n * (1.0 - p0) < NORMAL_APPROX_MIN_COUNT:
        return (
            f"normal approximation is doubtful: n*p0={n * p0:.3g}, n*(1-p0)={n * (1.0 - p0):.3g} "
            f"(want both >= {NORMAL_APPROX_MIN_COUNT:g})"
        )
    return None


# -- the one-sided test -------------------------------------------------------


def z_statistic(observed_rate: float, p0: float, n: int) -> float:
    """Standardized sample defect rate under the null ``P = p0``."""
    _check_probability("p0", p0)
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return (observed_rate - p0) / math.sqrt(p0 * (1.0 - p0) / n)


def decide_rejection(
    z: float,
    significance_level: float,
    mode: QuantileMode | str = QuantileMode.PRECISE,
) -> Verdict:
    """Upper-tail verdict: reject only when ``z`` strictly exceeds z_{1-alpha}."""
    _check_probability("significance_level", significance_level)
    critical = significance_quantile(significance_level, mode)
    return Verdict.REJECT_LOT if z > critical else Verdict.FAIL_TO_REJECT


def test_lot(obs: SampleObservation, config: TestConfig) -> tuple[float, float, Verdict]:
    """Run the lot test; returns ``(z, critical_value, verdict)``."""
    rate = sample_defect_rate(obs)
    z = z_statistic(rate, config.nominal_defect_rate, obs.sample_size)
    critical = significance_quantile(config.significance_level, config.quantile_mode)
    verdict = decide_rejection(z, config.significance_level, config.quantile_mode)
    return z, critical, verdict


test_lot.__test__ = False  # type: ignore[attr-defined]


# -- minimum sample sizes -----------------------------------------------------


def _ceil_size(raw: float) -> int:
    return max(1, math.ceil(raw * (1.0 - CEILING_REL_TOL)))


def type1_margin(p0: float, n: int, z: float) -> float:
    """Half-width ``z * sqrt(p0(1-p0)/n)`` that a sample of ``n`` guarantees."""
    return z * math.sqrt(p0 * (1.0 - p0) / n)


def type2_detectable_shift(p1: float, n: int, z: float) -> float:
    """Smallest ``|p1 - p0|`` detectable with a sample of ``n`` at quantile ``z``."""
    return z * math.sqrt(p1 * (1.0 - p1) / n)


def min_sample_size_type1(
    p0: float,
    error_limit_d: float,
    significance_level: float = 0.05,
    mode: QuantileMode | str = QuantileMode.PRECISE,
) -> SamplePlan:
    """Smallest ``n`` with ``z_{1-alpha} * sqrt(p0(1-p0)/n) <= d``."""
    _check_probability("p0", p0)
    _check_probability("significance_level", significance_level)
    if not error_limit_d > 0.0:
        raise DomainError(f"error limit d must be positive, got {error_limit_d!r}")
    z = significance_quantile(significance_level, mode)
    raw = p0 * (1.0 - p0) / (error_limit_d / z) ** 2
    return SamplePlan(
        sample_size=_ceil_size(raw),
        error_type_controlled=ErrorType.TYPE1,
        quantile_used=z,
        input_echo=error_limit_d,
        nominal_defect_rate=p0,
        raw_size=raw,
    )


def min_sample_size_type2(
    p0: float,
    p1: float,
    power: float = 0.90,
    mode: QuantileMode | str = QuantileMode.PRECISE,
) -> SamplePlan:
    """Smallest ``n`` with ``|p1 - p0| >= z_{power} * sqrt(p1(1-p1)/n)``.

    The spread is taken at the true rate ``p1``.  As ``p1`` approaches
    ``p0`` the size grows without bound; equality raises
    :class:`UnboundedSampleSizeError`.
    """
    _check_probability("p0", p0)
    _check_probability("p1", p1)
    _check_probability("power", power)
    if p1 == p0:
        raise UnboundedSampleSizeError(f"sample size unbounded: p1 equals p0 ({p0!r})")
    z = power_quantile(power, mode)
    raw = p1 * (1.0 - p1) / ((p1 - p0) / z) ** 2
    return SamplePlan(
        sample_size=_ceil_size(raw),
        error_type_controlled=ErrorType.TYPE2,
        quantile_used=z,
        input_echo=p1,
        nominal_defect_rate=p0,
        raw_size=raw,
    )


# -- sweeps -------------------------------------------------------------------


def grid(start: float, stop: float, step: float) -> list[float]:
    """Inclusive arithmetic grid; the end point is kept if within half a step."""
    if not step > 0.0:
        raise DomainError(f"step must be positive, got {step!r}")
    if start > stop:
        raise DomainError(f"empty range: start {start!r} exceeds stop {stop!r}")
    count = math.floor((stop - start) / step + 0.5) + 1
    return [round(start + i * step, 12) for i in range(count)]


def sweep_type1(
    p0: float,
    d_from: float,
    d_to: float,
    d_step: float,
    significance_level: float = 0.05,
    mode: QuantileMode | str = QuantileMode.PRECISE,
) -> SweepResult:
    if not d_from > 0.0:
        raise DomainError(f"d_from must be positive, got {d_from!r}")
    rows = [
        SweepRow(d, min_sample_size_type1(p0, d, significance_level, mode).sample_size)
        for d in grid(d_from, d_to, d_step)
    ]
    return SweepResult(tuple(rows))


def sweep_type2(
    p0: float,
    p1_from: float,
    p1_to: float,
    p1_step: float,
    power: float = 0.90,
    mode: QuantileMode | str = QuantileMode.PRECISE,
) -> SweepResult:
    """Type II sizes over a grid of true rates.

    A grid point equal to ``p0`` does not abort the sweep; its row carries
    ``sample_size=None`` and the error message.
    """
    rows = []
    for p1 in grid(p1_from, p1_to, p1_step):
        try:
            n = min_sample_size_type2(p0, p1, power, mode).sample_size
        except UnboundedSampleSizeError as exc:
            rows.append(SweepRow(p1, None, str(exc)))
        else:
            rows.append(SweepRow(p1, n))
    return SweepResult(tuple(rows))
