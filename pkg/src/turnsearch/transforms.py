"""Strategy normalisation.

Any strategy can be rewritten, without raising its worst-case ratio, first
into a *monotonic* one (each ray swept ever deeper) and then into a
*periodic, fully monotonic* one (all sweeps non-decreasing, rays visited
cyclically).  The second step is only guaranteed for two rays; for ``m > 2``
the cyclic reassignment is provided but its guarantee is unproven.
"""

from __future__ import annotations

from .core import SearchError, StepSequence


def make_monotonic(S: StepSequence) -> StepSequence:
    """Drop every sweep that does not go deeper than an earlier sweep of its ray.

    Equivalent to repeatedly deleting the later step ``k'`` of the first pair
    ``k < k'`` on a common ray with ``x_k >= x_k'``: a deleted step never
    raises a ray's running maximum, so one left-to-right pass suffices.
    """
    deepest: dict[int, float] = {}
    kept = []
    for x, r in S.steps:
        if r in deepest and deepest[r] >= x:
            continue
        deepest[r] = x
        kept.append((x, r))
    return S.replace_steps(kept)


def is_monotonic(S: StepSequence) -> bool:
    deepest: dict[int, float] = {}
    for x, r in S.steps:
        if r in deepest and deepest[r] >= x:
            return False
        deepest[r] = x
    return True


def is_periodic(S: StepSequence, m: int | None = None) -> bool:
    m = S.m if m is None else m
    return all(r == i % m for i, (_, r) in enumerate(S.steps))


def is_fully_monotonic(S: StepSequence) -> bool:
    xs = S.distances
    return is_monotonic(S) and all(a <= b for a, b in zip(xs, xs[1:]))


def make_periodic_fully_monotonic(S: StepSequence, m: int | None = None) -> StepSequence:
    """Sort the sweep lengths and hand them out to the rays in cyclic order."""
    if not is_monotonic(S):
        raise SearchError("input must be monotonic; apply make_monotonic first")
    m = S.m if m is None else int(m)
    if m < 2:
        raise SearchError("m must be >= 2")
    xs = sorted(S.distances)
    return StepSequence(tuple((x, i % m) for i, x in enumerate(xs)), S.origin_distance, m)


def normalize(S: StepSequence, m: int | None = None) -> StepSequence:
    return make_periodic_fully_monotonic(make_monotonic(S), m)
