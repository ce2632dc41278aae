"""Worst-case evaluation and adversarial simulation of search strategies.

A step ``j`` is *feasible* when it sweeps further than every earlier sweep of
its ray; only then can a target be discovered on it.  For a feasible step the
adversary puts the target just beyond the previous sweep of the same ray, so
the worst ratio on that step is::

    (sum_{i<j} roundtrip(x_i) + outbound(x_prev)) / x_prev

where ``x_prev`` is the deepest earlier sweep of the ray, or the lower bound
``lam`` if the ray was never visited.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

from .core import (
    CostModel,
    InfeasibleStep,
    SearchError,
    StepSequence,
    Target,
    TargetNotFound,
    tolerances,
)
from .strategies import AffineTotal, StrategyHandle

CONVERGENCE_WINDOW = 10


def as_sequence(S: StrategyHandle | StepSequence, n: int | None = None) -> StepSequence:
    if isinstance(S, StepSequence):
        return S if n is None else S.replace_steps(S.steps[:n])
    if n is None:
        if S.length is None:
            raise SearchError("a horizon is needed to materialise an infinite strategy")
        n = S.length
    return S.steps(n)


def _default_cost(S) -> CostModel:
    return S.cost if isinstance(S, StrategyHandle) else CostModel.plain()


def _check_index(seq: StepSequence, j: int) -> None:
    if not 1 <= j <= len(seq):
        raise SearchError(f"step index {j} outside 1..{len(seq)}")


def prev_index(S: StepSequence, j: int) -> int:
    """Index of the deepest sweep of ray ``r_j`` among steps ``1..j-1`` (0 if none)."""
    _check_index(S, j)
    ray = S.steps[j - 1][1]
    best, best_x = 0, -math.inf
    for i in range(1, j):
        x, r = S.steps[i - 1]
        if r == ray and x > best_x:
            best, best_x = i, x
    return best


def is_feasible(S: StepSequence, j: int) -> bool:
    _check_index(S, j)
    x, ray = S.steps[j - 1]
    return all(xi < x for xi, r in S.steps[: j - 1] if r == ray)


def _prev_distance(S: StepSequence, p: int) -> float:
    return S.origin_distance if p == 0 else S.steps[p - 1][0]


def _ratio(travel: float, x_prev: float, cost: CostModel) -> float:
    if x_prev == 0:
        return math.inf
    return (travel + cost.outbound(x_prev)) / x_prev


def cr_step(S: StepSequence, j: int, cost: CostModel | None = None) -> float:
    """Worst-case ratio of finding the target on step ``j``."""
    cost = cost or CostModel.plain()
    if not is_feasible(S, j):
        raise InfeasibleStep(f"step {j} can never discover the target")
    travel = math.fsum(cost.round_trip(x) for x, _ in S.steps[: j - 1])
    return _ratio(travel, _prev_distance(S, prev_index(S, j)), cost)


@dataclass(frozen=True)
class StepRecord:
    j: int
    feasible: bool
    prev: int
    cr: float | None


@dataclass
class EvaluationReport:
    horizon: int
    per_step: list[StepRecord]
    supremum: float
    argmax: int
    converged: bool
    convergence_note: str
    # lower bound on the ratio of *any* infinite continuation of the prefix
    completion_bound: float = math.nan
    cost: tuple[float, float, float, float] = (1.0, 0.0, 1.0, 0.0)

    @property
    def values(self) -> list[float]:
        return [s.cr for s in self.per_step if s.cr is not None]

    def to_obj(self) -> dict:
        d = asdict(self)
        d["per_step"] = [asdict(s) for s in self.per_step]
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_obj(), **kw)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["j", "feasible", "prev", "cr_j"])
        for s in self.per_step:
            w.writerow([s.j, int(s.feasible), s.prev, "" if s.cr is None else f"{s.cr:.12g}"])
        return buf.getvalue()


def scan(S: StepSequence, cost: CostModel) -> list[StepRecord]:
    """Feasibility, prev and ratio of every step in one pass."""
    deepest: dict[int, tuple[float, int]] = {}
    travel = 0.0
    comp = 0.0  # Kahan compensation
    out = []
    for j, (x, r) in enumerate(S.steps, 1):
        prev_x, p = deepest.get(r, (None, 0))
        feasible = prev_x is None or x > prev_x
        cr = None
        if feasible:
            cr = _ratio(travel, S.origin_distance if p == 0 else prev_x, cost)
            deepest[r] = (x, j)
        out.append(StepRecord(j, feasible, p, cr))
        y = cost.round_trip(x) - comp
        s = travel + y
        comp = (s - travel) - y
        travel = s
    return out


def completion_bound(S: StepSequence, cost: CostModel) -> float:
    """Lower bound on the ratio of every infinite strategy starting with ``S``.

    Every ray must eventually be swept past its current deepest point ``M_r``
    (``lam`` if unvisited).  That sweep costs at least the whole prefix plus
    an outbound leg of ``M_r`` for a target just beyond ``M_r``.
    """
    travel = math.fsum(cost.round_trip(x) for x, _ in S.steps)
    deepest = [S.origin_distance] * S.m
    for x, r in S.steps:
        deepest[r] = max(deepest[r], x)
    return max(_ratio(travel, d, cost) for d in deepest)


def evaluate_sequence(S: StepSequence, cost: CostModel | None = None, tol: float = 1e-9) -> EvaluationReport:
    """Exact worst-case ratio over all feasible steps of a finite strategy."""
    cost = cost or CostModel.plain()
    records = scan(S, cost)
    values = [(s.cr, s.j) for s in records if s.cr is not None]
    sup, arg = max(values)
    tail = [v for v, _ in values[-CONVERGENCE_WINDOW:]]
    converged = False
    if len(tail) == CONVERGENCE_WINDOW and all(math.isfinite(v) for v in tail):
        spread = max(tail) - min(tail)
        converged = spread < tol * max(abs(v) for v in tail)
    note = (
        "supremum over feasible steps 1..{n}; for an infinite strategy this is a lower bound on the "
        "true worst case. converged={c} is a heuristic: the last {w} ratios vary by less than tol={tol:g} "
        "relative.".format(n=len(S), c=converged, w=CONVERGENCE_WINDOW, tol=tol)
    )
    return EvaluationReport(len(S), records, sup, arg, converged, note, completion_bound(S, cost), cost.as_tuple())


def worst_case_cr(
    S: StrategyHandle | StepSequence,
    cost: CostModel | None = None,
    horizon: int = 60,
    tol: float = 1e-9,
) -> EvaluationReport:
    """Evaluate ``cr_step`` on every feasible step up to ``horizon``.

    ``cost`` defaults to the cost model the family was designed for.
    """
    m = S.m
    if horizon < m + 1:
        raise SearchError(f"horizon must be at least m+1 = {m + 1}, got {horizon}")
    if cost is None:
        cost = _default_cost(S)
    return evaluate_sequence(as_sequence(S, horizon), cost, tol)


def _iter_steps(S: StrategyHandle | StepSequence, max_steps: int):
    if isinstance(S, StepSequence):
        yield from S.steps[:max_steps]
        return
    n = max_steps if S.length is None else min(max_steps, S.length)
    for i in range(1, n + 1):
        yield S.step(i)


def simulate(
    S: StrategyHandle | StepSequence,
    target: Target,
    cost: CostModel | None = None,
    max_steps: int = 10_000,
) -> float:
    """Total cost paid until the searcher reaches ``target``.

    Each unsuccessful sweep costs a full round trip; the successful one costs
    only the outbound leg to the target.
    """
    if cost is None:
        cost = _default_cost(S)
    lam = S.lam if isinstance(S, StrategyHandle) else S.origin_distance
    if target.distance < lam:
        raise SearchError(f"target distance {target.distance} is below the lower bound {lam}")
    if target.ray >= S.m:
        raise SearchError(f"ray {target.ray} does not exist for m={S.m}")
    paid = []
    for x, r in _iter_steps(S, max_steps):
        if r == target.ray and x >= target.distance:
            paid.append(cost.outbound(target.distance))
            return math.fsum(paid)
        paid.append(cost.round_trip(x))
    raise TargetNotFound(max_steps)


def adversary_eps(lam: float) -> float:
    return 1e-7 * (lam if lam > 0 else 1.0)


def adversarial_targets(S: StrategyHandle | StepSequence, n: int, eps: float | None = None) -> list[Target]:
    """Targets just beyond each sweep, where the ratio is worst.

    One target per ray sits just past the lower bound, then one just past each
    of the first ``n`` sweeps, on the ray of that sweep.
    """
    lam = S.lam if isinstance(S, StrategyHandle) else S.origin_distance
    eps = adversary_eps(lam) if eps is None else eps
    out = [Target(r, lam + eps) for r in range(S.m)]
    for x, r in _iter_steps(S, n):
        out.append(Target(r, x + eps))
    return out


@dataclass
class EnvelopePoint:
    ray: int
    distance: float
    cost: float
    bound: float

    @property
    def slack(self) -> float:
        return self.bound - self.cost


@dataclass
class EnvelopeReport:
    claim: AffineTotal
    points: list[EnvelopePoint] = field(default_factory=list)
    tol: float = 0.0

    @property
    def min_slack(self) -> float:
        return min(p.slack for p in self.points)

    @property
    def max_slack(self) -> float:
        return max(p.slack for p in self.points)

    @property
    def ok(self) -> bool:
        return all(p.slack >= -self.tol_at(p) for p in self.points)

    def tol_at(self, p: EnvelopePoint) -> float:
        if self.tol:
            return self.tol
        rel, ab = tolerances()
        return ab + rel * abs(p.bound)


def affine_envelope_check(
    S: StrategyHandle | StepSequence,
    cost: CostModel | None,
    claim: AffineTotal,
    d_samples: Iterable[float] | None = None,
    targets: Sequence[Target] | None = None,
    tol: float = 0.0,
    max_steps: int = 10_000,
) -> EnvelopeReport:
    """Check ``simulate(D) <= gamma*D + phi`` for every sampled distance on every ray.

    ``targets`` adds explicit placements (e.g. from :func:`adversarial_targets`).
    With ``tol == 0`` the comparison uses the package tolerances relative to
    the bound.
    """
    if cost is None:
        cost = _default_cost(S)
    placed = [Target(r, float(d)) for d in (d_samples or []) for r in range(S.m)]
    placed += list(targets or [])
    report = EnvelopeReport(claim, tol=tol)
    for tg in placed:
        c = simulate(S, tg, cost, max_steps)
        report.points.append(EnvelopePoint(tg.ray, tg.distance, c, claim.total(tg.distance)))
    return report
