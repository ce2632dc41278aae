"""Closed-form search strategies.

Every constructor returns a :class:`StrategyHandle`: a lazily evaluated step
oracle ``i -> (x_i, ray_i)`` together with the cost the family is claimed to
achieve.  All families here visit the rays cyclically, ``ray(i) = (i-1) % m``.

Two kinds of claims appear:

* :class:`CompetitiveRatio` -- worst-case cost divided by the target distance,
  for problems with a lower bound ``lam`` on that distance;
* :class:`AffineTotal` -- a worst-case total cost envelope ``gamma*D + phi``
  for the setting with no lower bound (``lam == 0`` on the handle).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .core import (
    CostModel,
    DegenerateStrategy,
    SearchError,
    SearchProblem,
    StepSequence,
    StrategySpec,
    WrongRegime,
    close,
)


@dataclass(frozen=True)
class CompetitiveRatio:
    value: float
    # "optimal" when the family is proven optimal, "achieved" otherwise
    status: str = "optimal"

    def __post_init__(self):
        if not self.value > 0:
            raise SearchError("competitive ratio must be positive")


@dataclass(frozen=True)
class AffineTotal:
    gamma: float
    phi: float

    def total(self, distance: float) -> float:
        return self.gamma * distance + self.phi


ClaimedCost = CompetitiveRatio | AffineTotal


@dataclass(frozen=True)
class StrategyHandle:
    spec: StrategySpec
    distance_fn: Callable[[int], float] = field(repr=False)
    claimed: ClaimedCost | None
    lam: float
    m: int = 2
    cost: CostModel = field(default_factory=CostModel.plain)
    regime: str | None = None
    length: int | None = None  # finite for explicit strategies
    # explicit ray schedule; closed-form families are cyclic
    ray_list: tuple[int, ...] | None = field(default=None, repr=False)

    def distance(self, i: int) -> float:
        if i < 1 or (self.length is not None and i > self.length):
            raise IndexError(f"step {i} out of range")
        return self.distance_fn(i)

    def ray(self, i: int) -> int:
        if self.ray_list is not None:
            return self.ray_list[i - 1]
        return (i - 1) % self.m

    def step(self, i: int) -> tuple[float, int]:
        return self.distance(i), self.ray(i)

    def steps(self, n: int) -> StepSequence:
        if self.length is not None:
            n = min(n, self.length)
        return StepSequence(tuple(self.step(i) for i in range(1, n + 1)), self.lam, self.m)


def _cyclic(spec, fn, claimed, lam, m=2, cost=None, regime=None) -> StrategyHandle:
    return StrategyHandle(spec, fn, claimed, float(lam), m, cost or CostModel.plain(), regime)


def _positive(name: str, value: float) -> float:
    if not (value > 0 and math.isfinite(value)):
        raise SearchError(f"{name} must be positive, got {value!r}")
    return float(value)


def _non_negative(name: str, value: float) -> float:
    if not (value >= 0 and math.isfinite(value)):
        raise SearchError(f"{name} must be non-negative, got {value!r}")
    return float(value)


# --------------------------------------------------------------------------
# settings without a lower bound: total cost gamma*D + phi
# --------------------------------------------------------------------------


def tradeoff_phi(gamma: float, t: float = 1.0) -> float:
    """Smallest additive constant ``phi`` achievable with multiplicative constant ``gamma``."""
    if gamma < 9:
        raise SearchError(f"gamma must be >= 9, got {gamma}")
    return 0.25 * (gamma - 1 - math.sqrt((gamma - 1) * (gamma - 9))) * t


def doubling(lam: float) -> StrategyHandle:
    """``x_i = 2**i * lam`` on alternating rays."""
    lam = _positive("lambda", lam)
    spec = StrategySpec("Doubling", {"lambda": lam})
    return _cyclic(spec, lambda i: 2.0**i * lam, CompetitiveRatio(9.0), lam)


def turn_cost_doubling(t: float) -> StrategyHandle:
    """``x_i = (2**i - 1) * t / 2``; worst-case total ``9D + 2t``.  Undefined for ``t <= 0``."""
    if not t > 0:
        raise DegenerateStrategy("with t <= 0 every sweep has length 0 and the searcher never leaves the origin")
    t = float(t)
    spec = StrategySpec("DemaineTurnCost", {"t": t})
    return _cyclic(spec, lambda i: 0.5 * (2.0**i - 1) * t, AffineTotal(9.0, 2 * t), 0.0, cost=CostModel.turn(t))


def gamma_tradeoff(gamma: float, t: float) -> StrategyHandle:
    """Optimal strategy for a fixed multiplicative constant ``gamma >= 9``.

    ``x_i = ((r**i) - 1) * t / 2`` with ``r`` the smaller root of
    ``x**2 - (gamma-1)/2 * x + (gamma-1)/2``; the worst case total cost is
    ``gamma*D + r*t``.
    """
    if not gamma >= 9:
        raise SearchError(f"gamma must be >= 9, got {gamma}")
    if not t > 0:
        raise DegenerateStrategy("t must be positive")
    gamma, t = float(gamma), float(t)
    r = (gamma - 1 - math.sqrt((gamma - 1) * (gamma - 9))) / 4
    spec = StrategySpec("Theorem2", {"gamma": gamma, "t": t})
    claim = AffineTotal(gamma, tradeoff_phi(gamma, t))
    return _cyclic(spec, lambda i: 0.5 * (r**i - 1) * t, claim, 0.0, cost=CostModel.turn(t))


def min_total_gamma(D: float, t: float) -> float:
    """Multiplicative constant minimising ``gamma*D + phi(gamma)`` for a known ``D``."""
    return 5 + 2 * (4 * D + t) / math.sqrt(2 * D * (2 * D + t))


def min_total_value(D: float, t: float) -> float:
    return 5 * D + t + 2 * math.sqrt(2 * D * (2 * D + t))


def min_total_cost(D: float, t: float) -> StrategyHandle:
    """Strategy of the ``gamma`` tradeoff family that minimises the total cost at distance ``D``."""
    D = _positive("D", D)
    t = _non_negative("t", t)
    if t == 0:
        raise DegenerateStrategy("the cost-minimising strategy is not defined for t = 0")
    base = 1 + 2 * D / math.sqrt(2 * D * (2 * D + t))
    spec = StrategySpec("MinTotalCost", {"D": D, "t": t})
    claim = AffineTotal(min_total_gamma(D, t), base * t)
    return _cyclic(spec, lambda i: 0.5 * (base**i - 1) * t, claim, 0.0, cost=CostModel.turn(t))


# --------------------------------------------------------------------------
# line search with a lower bound and turn cost t
# --------------------------------------------------------------------------


def line_low_turn_cost(lam: float, t: float) -> StrategyHandle:
    """Competitive ratio 9 whenever ``t / (2*lam) <= 1``.

    ``x_i = (((1-rho)*i + (1+rho)) * 2**i - rho) * lam`` with ``rho = t/(2*lam)``.
    """
    lam = _positive("lambda", lam)
    t = _non_negative("t", t)
    rho = t / (2 * lam)
    if rho > 1:
        raise WrongRegime(f"t/(2*lambda) = {rho} > 1")
    spec = StrategySpec("Lemma1", {"lambda": lam, "t": t})

    def x(i):
        return (((1 - rho) * i + (1 + rho)) * 2.0**i - rho) * lam

    return _cyclic(spec, x, CompetitiveRatio(9.0), lam, cost=CostModel.turn(t), regime="first")


def high_turn_cost_ratio(rho: float) -> float:
    return 2 * (rho + 2) * (rho + 0.5) / rho


def line_high_turn_cost(lam: float, t: float) -> StrategyHandle:
    """Optimal strategy once ``rho = t/(2*lam) >= 1``.

    ``x_i = ((1+rho) * (1 + 1/rho)**i - rho) * lam`` with competitive ratio
    ``2*(rho+2)*(rho+1/2)/rho``.
    """
    lam = _positive("lambda", lam)
    t = _non_negative("t", t)
    rho = t / (2 * lam)
    if rho < 1:
        raise WrongRegime(f"t/(2*lambda) = {rho} < 1")
    base = 1 + 1 / rho
    spec = StrategySpec("Theorem4", {"lambda": lam, "t": t})
    return _cyclic(
        spec,
        lambda i: ((1 + rho) * base**i - rho) * lam,
        CompetitiveRatio(high_turn_cost_ratio(rho)),
        lam,
        cost=CostModel.turn(t),
        regime="second",
    )


def line_turn_cost(lam: float, t: float) -> StrategyHandle:
    """Optimal line strategy for any ``t >= 0``, picking the regime from ``t/(2*lam)``."""
    if t / (2 * lam) <= 1:
        return line_low_turn_cost(lam, t)
    return line_high_turn_cost(lam, t)


def optimal_line_ratio(rho: float) -> float:
    """Optimal competitive ratio on a line as a function of ``rho = t/(2*lam)``."""
    if rho < 0:
        raise SearchError("rho must be non-negative")
    return 9.0 if rho <= 1 else high_turn_cost_ratio(rho)


# --------------------------------------------------------------------------
# general affine costs on a line
# --------------------------------------------------------------------------


def general_cost_threshold(cost: CostModel, lam: float) -> float:
    return (3 * cost.beta1 + 2 * cost.beta2) / (2 * (cost.alpha1 + cost.alpha2) * lam)


def general_cost_base(cost: CostModel, lam: float) -> float:
    """Growth factor of the second-regime strategy for affine leg costs."""
    a1, b1, a2, b2 = cost.as_tuple()
    s = (a1 + a2) * lam
    u = 2 * b1 + b2
    return 1 + 2 * s / (u - s + math.sqrt(u * u - b2 * b2 + (b2 + s) ** 2))


def general_cost(problem: SearchProblem, regime: str | None = None) -> StrategyHandle:
    """Optimal line strategy for outbound cost ``a1*x+b1`` and inbound cost ``a2*x+b2``.

    ``regime`` forces a branch; both are valid when the threshold equals 1.
    """
    if problem.m != 2:
        raise SearchError("the affine-cost strategy is defined for m = 2 only")
    cost, lam = problem.cost, problem.lam
    a1, b1, a2, b2 = cost.as_tuple()
    A = a1 + a2
    theta = general_cost_threshold(cost, lam)
    kappa = (b1 + b2) / (A * lam)
    if regime is None:
        regime = "first" if theta <= 1 else "second"
    if regime == "first" and not theta <= 1 or regime == "second" and not theta >= 1:
        raise WrongRegime(f"threshold {theta} incompatible with regime {regime!r}")
    params = {"alpha1": a1, "beta1": b1, "alpha2": a2, "beta2": b2, "lambda": lam}
    if regime not in ("first", "second"):
        raise SearchError(f"unknown regime {regime!r}")
    spec = StrategySpec("Theorem5", {**params, "regime": regime})

    if regime == "first":
        def x(i):
            return (((1 - theta) * i + (1 + kappa)) * 2.0**i - kappa) * lam

        claim = CompetitiveRatio(5 * a1 + 4 * a2)
    else:
        base = general_cost_base(cost, lam)

        def x(i):
            return ((1 + kappa) * base**i - kappa) * lam

        claim = CompetitiveRatio((A * x(1) + (b1 + b2) + (a1 * lam + b1)) / lam)
    return _cyclic(spec, x, claim, lam, cost=cost, regime=regime)


# --------------------------------------------------------------------------
# m rays with turn cost
# --------------------------------------------------------------------------


def m_ray_threshold(m: int) -> float:
    """Value of ``t/(2*lam)`` separating the two regimes on ``m`` rays."""
    return 1 / ((m / (m - 1)) ** (m - 1) - 1)


def m_ray_classic_ratio(m: int) -> float:
    return 1 + 2 * m**m / (m - 1) ** (m - 1)


def m_ray_high_ratio(m: int, rho: float) -> float:
    """``(q - 3 - 2/rho) / (q - 1)`` with ``q = (1 + 1/rho)**(-1/(m-1))``.

    Evaluated as ``1 + (2 + 2/rho) / (1 - q)`` so large ``rho`` (``q`` near 1)
    does not cancel.  Two rays give the line formula exactly.
    """
    if m == 2:
        return high_turn_cost_ratio(rho)
    one_minus_q = -math.expm1(-math.log1p(1 / rho) / (m - 1))
    return 1 + (2 + 2 / rho) / one_minus_q


def m_ray_turn_cost(m: int, lam: float, t: float, regime: str | None = None) -> StrategyHandle:
    """Cyclic strategy on ``m`` rays with turn cost ``t``.

    Below the threshold the ratio equals the classic turn-free optimum
    ``1 + 2 m^m / (m-1)^(m-1)``.  Above it the reported ratio is achieved by
    the strategy but, for ``m > 2``, not known to be optimal.
    """
    if int(m) != m or m < 2:
        raise SearchError(f"m must be an integer >= 2, got {m!r}")
    m = int(m)
    lam = _positive("lambda", lam)
    t = _non_negative("t", t)
    rho = t / (2 * lam)
    tau = m_ray_threshold(m)
    if regime is None:
        regime = "first" if rho <= tau else "second"
    if regime == "first" and not rho <= tau or regime == "second" and not rho >= tau:
        raise WrongRegime(f"t/(2*lambda) = {rho} incompatible with regime {regime!r} (threshold {tau})")
    if regime not in ("first", "second"):
        raise SearchError(f"unknown regime {regime!r}")
    spec = StrategySpec("Theorem6", {"m": m, "lambda": lam, "t": t, "regime": regime})
    c = m / (m - 1)
    if regime == "first":
        slope = (1 - (c ** (m - 1) - 1) * rho) / (m - 1)

        def x(i):
            return ((slope * i + (1 + rho)) * c**i - rho) * lam

        claim = CompetitiveRatio(m_ray_classic_ratio(m))
    else:
        base = 1 + 1 / rho

        def x(i):
            # integer exponent when possible so m = 2 matches the line strategy bit for bit
            e = i // (m - 1) if i % (m - 1) == 0 else i / (m - 1)
            return ((1 + rho) * base**e - rho) * lam

        claim = CompetitiveRatio(m_ray_high_ratio(m, rho), "optimal" if m == 2 else "achieved")
    return _cyclic(spec, x, claim, lam, m=m, cost=CostModel.turn(t), regime=regime)


# --------------------------------------------------------------------------


def explicit(steps: StepSequence) -> StrategyHandle:
    spec = StrategySpec("Explicit", {"lambda": steps.origin_distance, "m": steps.m}, steps)
    return StrategyHandle(
        spec,
        lambda i: steps.steps[i - 1][0],
        None,
        steps.origin_distance,
        steps.m,
        CostModel.plain(),
        None,
        len(steps),
        tuple(steps.rays),
    )


def from_spec(spec: StrategySpec) -> StrategyHandle:
    p = spec.params
    f = spec.family
    if f == "Doubling":
        return doubling(p["lambda"])
    if f == "DemaineTurnCost":
        return turn_cost_doubling(p["t"])
    if f == "Theorem2":
        return gamma_tradeoff(p["gamma"], p["t"])
    if f == "MinTotalCost":
        return min_total_cost(p["D"], p["t"])
    if f == "Lemma1":
        return line_low_turn_cost(p["lambda"], p["t"])
    if f == "Theorem4":
        return line_high_turn_cost(p["lambda"], p["t"])
    if f == "Theorem5":
        cost = CostModel(p["alpha1"], p["beta1"], p["alpha2"], p["beta2"])
        return general_cost(SearchProblem(2, p["lambda"], cost), p.get("regime"))
    if f == "Theorem6":
        return m_ray_turn_cost(p["m"], p["lambda"], p["t"], p.get("regime"))
    assert spec.steps is not None
    return explicit(spec.steps)


def regimes_agree(a: StrategyHandle, b: StrategyHandle, n: int = 20) -> bool:
    """True when two handles produce the same first ``n`` distances and claimed ratio."""
    if not all(close(a.distance(i), b.distance(i)) for i in range(1, n + 1)):
        return False
    ca, cb = a.claimed, b.claimed
    if isinstance(ca, CompetitiveRatio) and isinstance(cb, CompetitiveRatio):
        return close(ca.value, cb.value)
    return ca == cb
