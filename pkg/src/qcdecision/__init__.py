"""Acceptance-sampling plans and multi-stage inspection decisions."""

from .decision import (
    DecisionVector,
    ScenarioParams,
    SolveResult,
    StageState,
    all_decisions,
    batch_solve,
    solve_backward,
    solve_enumeration,
    total_value,
)
from .errors import (
    BatchValidationError,
    DomainError,
    InvalidScenarioError,
    UnboundedSampleSizeError,
)
from .quantiles import QuantileMode, normal_quantile
from .sampling import (
    ErrorType,
    PopulationModel,
    SampleObservation,
    SamplePlan,
    SweepResult,
    SweepRow,
    TestConfig,
    Verdict,
    min_sample_size_type1,
    min_sample_size_type2,
    sweep_type1,
    sweep_type2,
)

__version__ = "0.1.0"
