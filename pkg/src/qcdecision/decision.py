"""Three-stage inspection/dismantling decision model.

Stage 1 buys ``n11`` units of part 1 and ``n12`` of part 2 and optionally
tests each (``s1``, ``s2``).  Stage 2 assembles the surviving pairs and
optionally tests the finished product (``s3``).  Stage 3 optionally
dismantles the nonconforming products (``s4``).

Unit counts between stages are expected flows (reals), never rounded, so
every stage value is linear in ``(n11, n12)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from itertools import product
from typing import Iterable, Sequence

from .errors import BatchValidationError, InvalidScenarioError

RATE_FIELDS = ("r1", "r2", "r3")
MONEY_FIELDS = ("c1", "c2", "c3", "t1", "t2", "t3", "h1", "m", "w")
COUNT_FIELDS = ("n11", "n12")
PARAM_FIELDS = RATE_FIELDS + MONEY_FIELDS + COUNT_FIELDS


@dataclass(frozen=True)
class ScenarioParams:
    """Defect rates, unit economics and initial part counts for one scenario."""

    r1: float
    r2: float
    r3: float
    c1: float
    c2: float
    c3: float
    t1: float
    t2: float
    t3: float
    h1: float
    m: float
    w: float
    n11: float = 100.0
    n12: float = 100.0

    def validate(self, scenario: str | None = None) -> ScenarioParams:
        for name in PARAM_FIELDS:
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise InvalidScenarioError(f"{name} must be a number, got {value!r}", name, scenario)
            if not math.isfinite(value):
                raise InvalidScenarioError(f"{name} must be finite, got {value!r}", name, scenario)
            if name in RATE_FIELDS and not 0.0 <= value < 1.0:
                raise InvalidScenarioError(f"{name} must lie in [0, 1), got {value!r}", name, scenario)
            if name in MONEY_FIELDS and value < 0.0:
                raise InvalidScenarioError(f"{name} must be >= 0, got {value!r}", name, scenario)
            if name in COUNT_FIELDS and not value > 0.0:
                raise InvalidScenarioError(f"{name} must be > 0, got {value!r}", name, scenario)
        return self

    def scaled(self, factor: float) -> ScenarioParams:
        """Copy with both initial part counts multiplied by ``factor``."""
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        values["n11"] *= factor
        values["n12"] *= factor
        return ScenarioParams(**values)


@dataclass(frozen=True, order=True)
class DecisionVector:
    """Test part 1, test part 2, test finished product, dismantle rejects.

    Ordering is lexicographic over ``(s1, s2, s3, s4)``.
    """

    s1: int
    s2: int
    s3: int
    s4: int

    def __post_init__(self) -> None:
        for name in ("s1", "s2", "s3", "s4"):
            value = getattr(self, name)
            if value not in (0, 1) or isinstance(value, float):
                raise ValueError(f"{name} must be 0 or 1, got {value!r}")

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.s1, self.s2, self.s3, self.s4)

    def __str__(self) -> str:
        return "({},{},{},{})".format(*self.as_tuple())


def all_decisions() -> list[DecisionVector]:
    """The 16 decision vectors in lexicographic order."""
    return [DecisionVector(*bits) for bits in product((0, 1), repeat=4)]


@dataclass(frozen=True)
class StageState:
    n2: float
    n3: float


@dataclass(frozen=True)
class SolveResult:
    best_decision: DecisionVector
    best_value: float
    value_table: tuple[tuple[DecisionVector, float], ...]

    def value_of(self, decision: DecisionVector) -> float:
        for d, value in self.value_table:
            if d == decision:
                return value
        raise KeyError(decision)


# -- transitions --------------------------------------------------------------


def transition_stage1(params: ScenarioParams, s1: int, s2: int) -> float:
    """Assemblies entering stage 2: pairs of parts left after optional part tests."""
    return min(params.n11 * (1.0 - params.r1) ** s1, params.n12 * (1.0 - params.r2) ** s2)


def transition_stage2(params: ScenarioParams, n2: float, s1: int, s2: int) -> float:
    """Conforming products among ``n2`` assemblies; untested parts carry their defect rate."""
    return n2 * (1.0 - params.r1) ** (1 - s1) * (1.0 - params.r2) ** (1 - s2) * (1.0 - params.r3)


def stage_state(params: ScenarioParams, d: DecisionVector) -> StageState:
    n2 = transition_stage1(params, d.s1, d.s2)
    return StageState(n2, transition_stage2(params, n2, d.s1, d.s2))


# -- stage values -------------------------------------------------------------


def stage3_value(params: ScenarioParams, n2: float, n3: float, d: DecisionVector) -> float:
    """Net salvage from dismantling the ``n2 - n3`` nonconforming products."""
    if d.s4 == 0:
        return 0.0
    p = params
    unit = -p.h1 + (p.c1 + p.c2) - (d.s1 * p.t1 + d.s2 * p.t2 + d.s3 * (p.t3 + p.c3))
    return (n2 - n3) * unit * min((1.0 - p.r1) ** d.s1, (1.0 - p.r2) ** d.s2)


def stage2_value(params: ScenarioParams, n2: float, d: DecisionVector, v3: float) -> float:
    """Assembly, optional product test and sales, plus the stage-3 value ``v3``."""
    p = params
    if d.s3 == 0:
        return -p.c3 * n2 - p.r3 * p.m * n2 + p.w * n2 + v3
    return -p.c3 * n2 - p.t3 * n2 + (1.0 - p.r3) * p.w * n2 + v3


def stage1_value(params: ScenarioParams, d: DecisionVector, v2: float) -> float:
    """Part purchase, part tests and replacement losses, plus the stage-2 value ``v2``.

    Losses from untested parts only count when the finished product is not
    tested (``s3 = 0``).
    """
    p = params
    purchase = p.c1 * p.n11 + p.c2 * p.n12
    untested_product = 1 - d.s3
    if d.s1 == 1 and d.s2 == 1:
        cost = purchase + p.t1 * p.n11 + p.t2 * p.n12
    elif d.s1 == 1:
        cost = purchase + p.t1 * p.n11 + p.r2 * p.n12 * p.m * untested_product
    elif d.s2 == 1:
        cost = purchase + p.t2 * p.n12 + p.r1 * p.n11 * p.m * untested_product
    else:
        cost = purchase + (p.n11 * p.r1 + p.n12 * p.r2) * p.m * untested_product
    return -cost + v2


def total_value(params: ScenarioParams, d: DecisionVector) -> float:
    state = stage_state(params, d)
    v3 = stage3_value(params, state.n2, state.n3, d)
    v2 = stage2_value(params, state.n2, d, v3)
    return stage1_value(params, d, v2)


# -- solvers ------------------------------------------------------------------


def _pick_best(table: Iterable[tuple[DecisionVector, float]]) -> tuple[DecisionVector, float]:
    best: tuple[DecisionVector, float] | None = None
    for d, value in sorted(table, key=lambda item: item[0]):
        if best is None or value > best[1]:
            best = (d, value)
    assert best is not None
    return best


def solve_enumeration(params: ScenarioParams) -> SolveResult:
    """Evaluate all 16 decision vectors; ties go to the lexicographically smallest."""
    params.validate()
    table = tuple((d, total_value(params, d)) for d in all_decisions())
    best_decision, best_value = _pick_best(table)
    return SolveResult(best_decision, best_value, table)


def solve_backward(params: ScenarioParams) -> SolveResult:
    """Backward recursion ``f_k = max over s_k of [v_k + f_{k+1}]``.

    The stage values are not separable: stage 1 depends on ``s3`` through
    the replacement-loss terms, and stage 3 depends on ``s1, s2, s3``.  The
    recursion state is therefore the decision prefix.  Stage transitions and
    stage-3 values are computed once per prefix and shared; each stage picks
    its decision by comparing complete downstream values, preferring 0 on
    exact ties, which yields the lexicographically smallest maximizer.
    """
    params.validate()

    states: dict[tuple[int, int], StageState] = {}
    for s1, s2 in product((0, 1), repeat=2):
        n2 = transition_stage1(params, s1, s2)
        states[s1, s2] = StageState(n2, transition_stage2(params, n2, s1, s2))

    table: dict[DecisionVector, float] = {}

    def leaf(prefix: tuple[int, ...]) -> float:
        d = DecisionVector(*prefix)
        state = states[d.s1, d.s2]
        v3 = stage3_value(params, state.n2, state.n3, d)
        v2 = stage2_value(params, state.n2, d, v3)
        value = stage1_value(params, d, v2)
        table[d] = value
        return value

    memo: dict[tuple[int, ...], tuple[float, tuple[int, ...]]] = {}

    def f(prefix: tuple[int, ...]) -> tuple[float, tuple[int, ...]]:
        if prefix in memo:
            return memo[prefix]
        if len(prefix) == 4:
            result = (leaf(prefix), prefix)
        else:
            # stage 1 decides (s1, s2) jointly; stages 2 and 3 decide one bit each
            width = 2 if not prefix else 1
            best: tuple[float, tuple[int, ...]] | None = None
            for bits in product((0, 1), repeat=width):
                candidate = f(prefix + bits)
                if best is None or candidate[0] > best[0]:
                    best = candidate
            assert best is not None
            result = best
        memo[prefix] = result
        return result

    best_value, best_bits = f(())
    value_table = tuple(sorted(table.items(), key=lambda item: item[0]))
    return SolveResult(DecisionVector(*best_bits), best_value, value_table)


def batch_solve(scenarios: Sequence[ScenarioParams]) -> list[SolveResult]:
    """Solve each scenario in order; the first invalid one aborts with its index."""
    for index, params in enumerate(scenarios):
        try:
            params.validate()
        except InvalidScenarioError as exc:
            raise BatchValidationError(index, exc) from exc
    return [solve_backward(params) for params in scenarios]
