"""Slow, independent reference computations used as test oracles.

None of these import the package's evaluator or transforms.
"""

import math


def walk_cost(steps, ray, distance, cost):
    """Total cost to reach ``distance`` on ``ray`` by walking the sweep list."""
    a1, b1, a2, b2 = cost
    total = 0.0
    for x, r in steps:
        if r == ray and x >= distance:
            return total + a1 * distance + b1
        total += a1 * x + b1 + a2 * x + b2
    return None


def brute_force_cr(steps, lam, m, cost, rel=1e-12):
    """Worst ratio over targets placed just past every sweep end and past ``lam``.

    Only targets some sweep actually reaches count, which matches taking the
    supremum over feasible steps.  ``lam`` itself is a legal target distance.
    """
    spots = {(r, lam) for r in range(m)} | {(r, x) for x, r in steps}
    best = -math.inf
    for r, d in spots:
        for D in (d * (1 + rel), d) if d == lam else (d * (1 + rel),):
            c = walk_cost(steps, r, D, cost)
            if c is not None:
                best = max(best, c / D)
    return best


def delete_dominated(steps):
    """Literal rule: repeatedly delete the later step of the first dominated pair."""
    steps = list(steps)
    while True:
        hit = None
        for k in range(len(steps)):
            for k2 in range(k + 1, len(steps)):
                if steps[k][1] == steps[k2][1] and steps[k][0] >= steps[k2][0]:
                    hit = k2
                    break
            if hit is not None:
                break
        if hit is None:
            return steps
        del steps[hit]


def grid_argmin(f, lo, hi, step):
    n = int(round((hi - lo) / step))
    best = min(range(n + 1), key=lambda k: f(lo + k * step))
    return lo + best * step, f(lo + best * step)


def powers_cr(c, a1=1.0, a2=1.0, m=2, n=400):
    """Worst-case ratio of ``x_i = c**i`` on ``m`` cyclic rays with zero fixed costs, truncated at ``n`` steps."""
    xs = [c**i for i in range(1, n + 1)]
    best = 0.0
    travel = 0.0
    for j in range(1, n + 1):
        prev = xs[j - 1 - m] if j > m else 1.0
        best = max(best, (travel + a1 * prev) / prev)
        travel += (a1 + a2) * xs[j - 1]
    return best


def geometric_truncated(a, terms=2000):
    """``1 + 2 * sum_{j <= 1} a**j`` with the geometric tail summed term by term."""
    return 1 + 2 * math.fsum(a ** (1 - k) for k in range(terms))
