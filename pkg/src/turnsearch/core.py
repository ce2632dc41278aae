"""Domain types and numeric conventions shared by the whole package.

Rays are numbered ``0 .. m-1``.  On a line (``m == 2``) ray 0 is "left" and
ray 1 is "right".  Every strategy starts on ray 0.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

REL_TOL = 1e-9
ABS_TOL = 1e-12


class SearchError(ValueError):
    """Base class for domain errors raised by this package."""


class DegenerateStrategy(SearchError):
    """The family collapses to a searcher that never leaves the origin."""


class WrongRegime(SearchError):
    """Parameters fall outside the regime in which a family is defined."""


class InfeasibleStep(SearchError):
    """The target can never be discovered on this step."""


class TargetNotFound(SearchError):
    def __init__(self, max_steps: int):
        super().__init__(f"target not reached within {max_steps} steps")
        self.max_steps = max_steps


class VacuousRegime(SearchError):
    """The admissible parameter interval is empty."""


def tolerances() -> tuple[float, float]:
    """Return ``(rel_tol, abs_tol)`` used for every approximate comparison."""
    return REL_TOL, ABS_TOL


def close(a: float, b: float, rel_tol: float = REL_TOL, abs_tol: float = ABS_TOL) -> bool:
    return math.isclose(a, b, rel_tol=rel_tol, abs_tol=abs_tol)


@dataclass(frozen=True)
class CostModel:
    """Affine leg costs: ``alpha1*x + beta1`` outbound, ``alpha2*x + beta2`` inbound."""

    alpha1: float = 1.0
    beta1: float = 0.0
    alpha2: float = 1.0
    beta2: float = 0.0

    def __post_init__(self):
        for name in ("alpha1", "beta1", "alpha2", "beta2"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise SearchError(f"{name} must be a finite non-negative number, got {v!r}")
        if self.alpha1 + self.alpha2 <= 0:
            raise SearchError("alpha1 + alpha2 must be positive")

    @classmethod
    def plain(cls) -> CostModel:
        return cls(1.0, 0.0, 1.0, 0.0)

    @classmethod
    def turn(cls, t: float) -> CostModel:
        """Distance travelled plus ``t`` per turn, charged on every return leg."""
        return cls(1.0, 0.0, 1.0, float(t))

    def outbound(self, x: float) -> float:
        return self.alpha1 * x + self.beta1

    def inbound(self, x: float) -> float:
        return self.alpha2 * x + self.beta2

    def round_trip(self, x: float) -> float:
        return (self.alpha1 + self.alpha2) * x + self.beta1 + self.beta2

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.alpha1, self.beta1, self.alpha2, self.beta2)


@dataclass(frozen=True)
class SearchProblem:
    m: int
    lam: float
    cost: CostModel = field(default_factory=CostModel.plain)

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 2:
            raise SearchError(f"number of rays must be an integer >= 2, got {self.m!r}")
        if not self.lam > 0:
            raise SearchError(f"lower bound lambda must be positive, got {self.lam!r}")


@dataclass(frozen=True)
class Target:
    ray: int
    distance: float

    def __post_init__(self):
        if self.ray < 0:
            raise SearchError("target ray must be non-negative")
        if not self.distance > 0:
            raise SearchError("target distance must be positive")

    def check(self, problem: SearchProblem) -> None:
        if self.ray >= problem.m:
            raise SearchError(f"ray {self.ray} does not exist for m={problem.m}")
        if self.distance < problem.lam:
            raise SearchError(f"target distance {self.distance} is below lambda={problem.lam}")


@dataclass(frozen=True)
class StepSequence:
    """A finite list of ``(distance, ray)`` sweeps.

    ``origin_distance`` is the value used for ``x_0`` when a ray is swept for
    the first time; it equals the lower bound on the target distance.
    """

    steps: tuple[tuple[float, int], ...]
    origin_distance: float = 1.0
    m: int = 2

    def __post_init__(self):
        steps = tuple((float(x), int(r)) for x, r in self.steps)
        object.__setattr__(self, "steps", steps)
        if self.m < 2:
            raise SearchError("m must be >= 2")
        if self.origin_distance < 0:
            raise SearchError("origin_distance must be non-negative")
        for i, (x, r) in enumerate(steps, 1):
            if not (x > 0 and math.isfinite(x)):
                raise SearchError(f"step {i}: distance must be positive and finite, got {x}")
            if not 0 <= r < self.m:
                raise SearchError(f"step {i}: ray {r} outside [0, {self.m})")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[float, int]], lam: float = 1.0, m: int | None = None) -> StepSequence:
        pairs = tuple(pairs)
        if m is None:
            m = max([2] + [int(r) + 1 for _, r in pairs])
        return cls(pairs, lam, m)

    def __len__(self) -> int:
        return len(self.steps)

    def __getitem__(self, i):
        return self.steps[i]

    @property
    def distances(self) -> list[float]:
        return [x for x, _ in self.steps]

    @property
    def rays(self) -> list[int]:
        return [r for _, r in self.steps]

    def replace_steps(self, steps: Iterable[tuple[float, int]]) -> StepSequence:
        return StepSequence(tuple(steps), self.origin_distance, self.m)

    def to_json_obj(self) -> dict[str, Any]:
        return {
            "family": "Explicit",
            "steps": [[x, r] for x, r in self.steps],
            "params": {"lambda": self.origin_distance, "m": self.m},
        }


FAMILY_PARAMS: dict[str, tuple[str, ...]] = {
    "Doubling": ("lambda",),
    "DemaineTurnCost": ("t",),
    "Theorem2": ("gamma", "t"),
    "MinTotalCost": ("D", "t"),
    "Lemma1": ("lambda", "t"),
    "Theorem4": ("lambda", "t"),
    "Theorem5": ("alpha1", "beta1", "alpha2", "beta2", "lambda"),
    "Theorem6": ("m", "lambda", "t"),
    "Explicit": ("lambda", "m"),
}

# optional keys; everything else in FAMILY_PARAMS is required
_OPTIONAL_PARAMS = {"Explicit": {"lambda", "m"}, "Theorem5": {"regime"}, "Theorem6": {"regime"}}


@dataclass(frozen=True)
class StrategySpec:
    """A named strategy family plus parameters, or an explicit step list.

    Wire format::

        {"family": "Lemma1", "params": {"lambda": 1, "t": 0}}
        {"family": "Explicit", "steps": [[6, 0], [3, 1]], "params": {"lambda": 1}}
    """

    family: str
    params: Mapping[str, float] = field(default_factory=dict)
    steps: StepSequence | None = None

    def __post_init__(self):
        if self.family not in FAMILY_PARAMS:
            raise SearchError(f"unknown strategy family {self.family!r}")
        allowed = set(FAMILY_PARAMS[self.family]) | _OPTIONAL_PARAMS.get(self.family, set())
        optional = _OPTIONAL_PARAMS.get(self.family, set())
        unknown = set(self.params) - allowed
        if unknown:
            raise SearchError(f"unknown parameter(s) for {self.family}: {sorted(unknown)}")
        missing = [p for p in FAMILY_PARAMS[self.family] if p not in self.params and p not in optional]
        if missing:
            raise SearchError(f"missing parameter(s) for {self.family}: {missing}")
        if (self.family == "Explicit") != (self.steps is not None):
            raise SearchError("steps are required for Explicit and forbidden otherwise")
        object.__setattr__(self, "params", dict(self.params))

    @classmethod
    def from_obj(cls, obj: Any) -> StrategySpec:
        if not isinstance(obj, dict):
            raise SearchError("strategy spec must be a JSON object")
        extra = set(obj) - {"family", "params", "steps"}
        if extra:
            raise SearchError(f"unknown field(s): {sorted(extra)}")
        family = obj.get("family")
        if not isinstance(family, str):
            raise SearchError("'family' must be a string")
        params = obj.get("params", {})
        if not isinstance(params, dict):
            raise SearchError("'params' must be an object")
        for k, v in params.items():
            if k == "regime":
                if v not in ("first", "second"):
                    raise SearchError("regime must be 'first' or 'second'")
            elif isinstance(v, bool) or not isinstance(v, (int, float)):
                raise SearchError(f"parameter {k!r} must be a number")
        steps = None
        if "steps" in obj:
            raw = obj["steps"]
            if not isinstance(raw, list) or not all(
                isinstance(s, list) and len(s) == 2 and not isinstance(s[1], bool) for s in raw
            ):
                raise SearchError("'steps' must be a list of [distance, ray] pairs")
            try:
                pairs = [(float(x), int(r)) for x, r in raw]
            except (TypeError, ValueError) as exc:
                raise SearchError(f"bad step entry: {exc}") from None
            if any(float(r) != r for _, r in raw):
                raise SearchError("rays must be integers")
            lam = float(params.get("lambda", 1.0))
            m = params.get("m")
            steps = StepSequence.from_pairs(pairs, lam, int(m) if m is not None else None)
        elif family == "Explicit":
            raise SearchError("Explicit strategies need 'steps'")
        return cls(family, params, steps)

    @classmethod
    def from_json(cls, text: str) -> StrategySpec:
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SearchError(f"malformed JSON: {exc}") from None
        return cls.from_obj(obj)

    def to_obj(self) -> dict[str, Any]:
        if self.steps is not None:
            return self.steps.to_json_obj()
        return {"family": self.family, "params": dict(self.params)}
