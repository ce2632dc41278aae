"""Search on a line and on m rays with turn costs."""

from .core import (
    CostModel,
    DegenerateStrategy,
    InfeasibleStep,
    SearchError,
    SearchProblem,
    StepSequence,
    StrategySpec,
    Target,
    TargetNotFound,
    VacuousRegime,
    WrongRegime,
    tolerances,
)
from .evaluator import cr_step, is_feasible, prev_index, simulate, worst_case_cr
from .strategies import AffineTotal, CompetitiveRatio, StrategyHandle, from_spec

__all__ = [
    "AffineTotal",
    "CompetitiveRatio",
    "CostModel",
    "DegenerateStrategy",
    "InfeasibleStep",
    "SearchError",
    "SearchProblem",
    "StepSequence",
    "StrategyHandle",
    "StrategySpec",
    "Target",
    "TargetNotFound",
    "VacuousRegime",
    "WrongRegime",
    "cr_step",
    "from_spec",
    "is_feasible",
    "prev_index",
    "simulate",
    "tolerances",
    "worst_case_cr",
]
