"""Exception types shared by the sampling and decision engines."""

from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the domain where a formula is defined."""


class UnboundedSampleSizeError(DomainError):
    """The true and nominal defect rates coincide, so no finite sample detects the gap."""


class InvalidScenarioError(ValueError):
    """A scenario parameter fails validation.

    ``field`` names the offending parameter; ``scenario`` is the scenario
    name when known.
    """

    def __init__(self, message: str, field: str | None = None, scenario: str | None = None):
        super().__init__(message)
        self.field = field
        self.scenario = scenario


class BatchValidationError(InvalidScenarioError):
    """Raised by ``batch_solve`` for the first invalid scenario in a batch."""

    def __init__(self, index: int, cause: InvalidScenarioError):
        super().__init__(f"scenario at index {index}: {cause}", field=cause.field, scenario=cause.scenario)
        self.index = index
