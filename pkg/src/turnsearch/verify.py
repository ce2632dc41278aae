"""Numerical certificates for the analytic results behind the strategies.

Nothing here proves anything; each routine recomputes an identity or an
optimum along a second, independent route and reports the discrepancy.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

from .core import SearchError, VacuousRegime, WrongRegime, tolerances
from .strategies import (
    high_turn_cost_ratio,
    line_high_turn_cost,
    m_ray_turn_cost,
    min_total_gamma,
    min_total_value,
)

INV_PHI = (math.sqrt(5) - 1) / 2


def golden_section(f: Callable[[float], float], a: float, b: float, iters: int = 200) -> tuple[float, float]:
    """Minimise a unimodal ``f`` on ``[a, b]``; returns ``(argmin, min)``."""
    a, b = min(a, b), max(a, b)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if b - a <= 4 * math.ulp(max(abs(a), abs(b))):
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    x, fx = (c, fc) if fc <= fd else (d, fd)
    for y in (a, b):
        fy = f(y)
        if fy < fx:
            x, fx = y, fy
    return x, fx


def _bisect_sign_change(g: Callable[[float], float], lo: float, hi: float, iters: int = 200) -> float:
    glo = g(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        gm = g(mid)
        if (gm < 0) == (glo < 0):
            lo, glo = mid, gm
        else:
            hi = mid
    return 0.5 * (lo + hi)


# --------------------------------------------------------------------------
# roots of x^2 - (gamma-1)/2 x + (gamma-1)/2
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class RootPair:
    r1: float
    r2: float
    gamma: float

    def residuals(self) -> tuple[float, float]:
        k = (self.gamma - 1) / 2
        return tuple(r * r - k * r + k for r in (self.r1, self.r2))


def roots(gamma: float) -> RootPair:
    """Both roots; the smaller one is taken from the product to avoid cancellation."""
    if not gamma >= 9:
        raise SearchError(f"gamma must be >= 9 for real roots, got {gamma}")
    r1 = (gamma - 1 + math.sqrt((gamma - 9) * (gamma - 1))) / 4
    r2 = (gamma - 1) / (2 * r1)
    return RootPair(r1, r2, float(gamma))


# --------------------------------------------------------------------------
# the infinite LP for the additive constant phi(gamma)
# --------------------------------------------------------------------------


@dataclass
class CertificateReport:
    name: str
    primal_residuals: list[float] = field(default_factory=list)
    dual_column_sums: list[float] = field(default_factory=list)
    dual_scalar_identities: dict[str, tuple[float, float]] = field(default_factory=dict)
    tail_bound: float = 0.0
    verdict: bool = False
    params: dict = field(default_factory=dict)
    note: str = ""

    def to_obj(self) -> dict:
        d = asdict(self)
        d["verdict"] = "pass" if self.verdict else "fail"
        return d


def lp_constraint_terms(x: Sequence[float], gamma: float, t: float, n: int) -> list[float]:
    """Left-hand side terms of constraint ``n`` (1-based) of the LP."""
    if n == 1:
        return [2 * x[0], t]
    return [2 * xi for xi in x[:n]] + [-(gamma - 1) * x[n - 2], n * t]


def lp_primal_check(gamma: float, t: float, phi: float | None = None, N: int = 30) -> CertificateReport:
    """Plug ``x_i = (r2**i - 1) t / 2`` into the first ``N`` LP constraints.

    A residual is ``lhs - phi``; the point is feasible when no residual is
    positive beyond rounding.  With ``phi = r2 * t`` every constraint is tight.
    """
    if N < 2:
        raise SearchError("N must be >= 2")
    if not t > 0:
        raise SearchError("t must be positive")
    rp = roots(gamma)
    if phi is None:
        phi = rp.r2 * t
    rel, ab = tolerances()
    x = [0.5 * (rp.r2**i - 1) * t for i in range(1, N + 1)]
    residuals, ok = [], True
    for n in range(1, N + 1):
        terms = lp_constraint_terms(x, gamma, t, n) + [-phi]
        res = math.fsum(terms)
        residuals.append(res)
        if res > ab + rel * math.fsum(abs(v) for v in terms):
            ok = False
    return CertificateReport(
        "lp_primal",
        primal_residuals=residuals,
        verdict=ok,
        params={"gamma": gamma, "t": t, "phi": phi, "N": N},
        note="feasible iff every residual <= abs_tol + rel_tol * sum|terms|",
    )


def lp_dual_check(gamma: float, L: int = 200, ell_max: int = 20, t: float = 1.0) -> CertificateReport:
    """Check the geometric dual multipliers ``y_i = r1**-i`` truncated at ``L``.

    Every column sum must vanish, ``sum y_i = 1/(r1-1)`` and
    ``sum i*y_i = r1/(r1-1)**2``, each up to the analytic tail beyond ``L``.
    The resulting lower bound on ``phi`` is ``t * sum(i y_i) / sum(y_i)``.
    """
    if not gamma > 9:
        raise SearchError("the dual certificate needs gamma > 9 (distinct roots)")
    if L < 50:
        raise SearchError("L must be >= 50")
    if not 1 <= ell_max < L:
        raise SearchError("ell_max must lie in [1, L)")
    rp = roots(gamma)
    r1 = rp.r1
    q = 1 / r1
    rel, ab = tolerances()
    y = [q**i for i in range(1, L + 1)]
    tail = 2 * q**L / (1 - q)

    cols = []
    # y_i > 0 exactly; deep terms may underflow to 0 in floating point
    ok = r1 > 1
    for ell in range(1, ell_max + 1):
        s = math.fsum([2 * v for v in y[ell - 1 :]] + [-(gamma - 1) * y[ell]])
        cols.append(s)
        if abs(s) > ab + tail + rel * y[ell - 1]:
            ok = False

    s0 = math.fsum(y)
    s1 = math.fsum(i * v for i, v in enumerate(y, 1))
    c0 = 1 / (r1 - 1)
    c1 = r1 / (r1 - 1) ** 2
    tail0 = q ** (L + 1) / (1 - q)
    tail1 = q ** (L + 1) * ((L + 1) - L * q) / (1 - q) ** 2
    for got, want, tl in ((s0, c0, tail0), (s1, c1, tail1)):
        if abs(got - want) > ab + tl + rel * abs(want):
            ok = False
    bound = t * s1 / s0
    if not math.isclose(bound, rp.r2 * t, rel_tol=rel, abs_tol=ab):
        ok = False
    return CertificateReport(
        "lp_dual",
        dual_column_sums=cols,
        dual_scalar_identities={
            "sum_y": (s0, c0),
            "sum_iy": (s1, c1),
            "phi_lower_bound": (bound, rp.r2 * t),
        },
        tail_bound=tail,
        verdict=ok,
        params={"gamma": gamma, "L": L, "ell_max": ell_max, "t": t},
    )


# --------------------------------------------------------------------------
# recurrences for the ratio-above-9 argument
# --------------------------------------------------------------------------


@dataclass
class RecurrenceTriple:
    gamma: float
    t: float
    tau: list[float]
    mu: list[float]
    nu: list[float]
    delta: list[float]
    tau_closed: list[float]
    mu_closed: list[float]
    nu_closed: list[float]
    closed_form: str
    max_rel_error: float

    @property
    def agrees(self) -> bool:
        return self.max_rel_error <= tolerances()[0]


def _rel_err(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


def recurrence_values(gamma: float, t: float, n_max: int) -> tuple[list[float], list[float], list[float]]:
    A, B, C = (gamma - 3) / 2, t, t / 2
    tau, mu, nu = [A], [B], [1.0]
    for _ in range(n_max):
        ta, m, n = tau[-1], mu[-1], nu[-1]
        tau.append(ta * A - n)
        mu.append(ta * B + m + n * C)
        nu.append(ta + n)
    return tau, mu, nu


def closed_forms(gamma: float, t: float, n_max: int) -> tuple[list[float], list[float], list[float], str]:
    rp = roots(gamma)
    r1, r2 = rp.r1, rp.r2
    ns = range(n_max + 1)
    if abs(r1 - r2) < 1e-9:
        if gamma != 9:
            raise SearchError("double-root closed forms are only available at gamma = 9")
        tau = [(n + 3) * 2.0**n for n in ns]
        mu = [((3 * n + 1) * 2.0**n + 1) * t / 2 for n in ns]
        nu = [(n + 1) * 2.0**n for n in ns]
        return tau, mu, nu, "double-root"
    d = r1 - r2
    tau = [(r1 * (r1 - 1) * r1**n - r2 * (r2 - 1) * r2**n) / d for n in ns]
    k1 = r1 * (2 * r1 - 1) / (2 * (r1 - 1) * d)
    k2 = r2 * (2 * r2 - 1) / (2 * (r2 - 1) * d)
    mu = [k1 * t * r1**n - k2 * t * r2**n + t / 2 for n in ns]
    nu = [(r1 * r1**n - r2 * r2**n) / d for n in ns]
    return tau, mu, nu, "distinct-roots"


def recurrences(gamma: float, t: float, n_max: int = 30, x1: float | None = None) -> RecurrenceTriple:
    """Run the ``tau, mu, nu`` recurrences and compare with their closed forms.

    ``tau_0 = A, mu_0 = t, nu_0 = 1`` with ``A = (gamma-3)/2`` and
    ``tau' = tau*A - nu``, ``mu' = tau*t + mu + nu*t/2``, ``nu' = tau + nu``.
    When ``x1`` is given, ``delta(n) = tau_{n-1} x1 - mu_{n-1}`` is also
    returned for ``n = 1 .. n_max + 1``.
    """
    tau, mu, nu = recurrence_values(gamma, t, n_max)
    tc, mc, nc, kind = closed_forms(gamma, t, n_max)
    err = max(
        _rel_err(a, b)
        for pair in ((tau, tc), (mu, mc), (nu, nc))
        for a, b in zip(*pair)
    )
    delta = [] if x1 is None else [ta * x1 - m for ta, m in zip(tau, mu)]
    return RecurrenceTriple(gamma, t, tau, mu, nu, delta, tc, mc, nc, kind, err)


@dataclass
class DeltaReport:
    t: float
    lam: float
    x1: float
    increments: list[float]
    formula: list[float]
    max_rel_error: float
    increments_positive: bool
    requirement: float  # (2/3) x1; t must not exceed it
    requirement_holds: bool


def delta_increment_check(t: float, lam: float, x1: float, n_max: int = 20) -> DeltaReport:
    """Compare ``delta(n+1) - delta(n)`` at ratio 9 with ``(2(n+4)x1 - (3n+4)t) 2^n / 4``.

    ``x1`` must lie in ``[lam, (8 lam - t)/2]``; an empty interval raises
    :class:`VacuousRegime`.
    """
    hi = (8 * lam - t) / 2
    if hi < lam:
        raise VacuousRegime(f"no admissible x1: interval [{lam}, {hi}] is empty")
    if not lam <= x1 <= hi:
        raise SearchError(f"x1 = {x1} outside [{lam}, {hi}]")
    tau, mu, _ = recurrence_values(9.0, t, n_max + 1)
    delta = [tau[n - 1] * x1 - mu[n - 1] for n in range(1, n_max + 2)]
    inc = [delta[n] - delta[n - 1] for n in range(1, n_max + 1)]
    formula = [(2 * (n + 4) * x1 - (3 * n + 4) * t) / 4 * 2.0**n for n in range(1, n_max + 1)]
    err = max(_rel_err(a, b) for a, b in zip(inc, formula))
    req = 2 * x1 / 3
    rel, ab = tolerances()
    return DeltaReport(
        t, lam, x1, inc, formula, err,
        all(v > 0 for v in inc),
        req,
        t <= req * (1 + rel) + ab,
    )


def tight_chain_check(lam: float, t: float, n_max: int = 30) -> float:
    """Largest gap in ``x_{n+1} = tau_{n-1} x_1 - mu_{n-1}`` for the optimal high-turn-cost strategy,
    relative to ``|tau_{n-1} x_1| + |mu_{n-1}|``."""
    h = line_high_turn_cost(lam, t)
    gamma = h.claimed.value
    tau, mu, _ = recurrence_values(gamma, t, n_max)
    x1 = h.distance(1)
    # tau grows like r1**n while x grows like r2**n, so the right-hand side is a
    # difference of large terms; measure the gap against their size
    return max(
        abs(h.distance(n + 1) - (tau[n - 1] * x1 - mu[n - 1])) / (abs(tau[n - 1] * x1) + abs(mu[n - 1]))
        for n in range(1, n_max + 1)
    )


# --------------------------------------------------------------------------
# optimisations
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class GammaStar:
    gamma: float
    total: float
    gamma_closed: float
    total_closed: float
    note: str = ""


def total_cost(gamma: float, D: float, t: float) -> float:
    return gamma * D + roots(gamma).r2 * t


def gamma_star(D: float, t: float, iters: int = 200) -> GammaStar:
    """Minimise ``gamma*D + r2(gamma)*t`` over ``gamma >= 9`` by golden-section search."""
    if not D > 0:
        raise SearchError("D must be positive")
    if t < 0:
        raise SearchError("t must be non-negative")
    if t == 0:
        return GammaStar(9.0, 9.0 * D, 9.0, 9.0 * D, "degenerate: t = 0 gives gamma = 9 and no finite strategy")
    g_closed = min_total_gamma(D, t)
    hi = max(50.0, 4 * g_closed)
    g, tc = golden_section(lambda g: total_cost(g, D, t), 9.0, hi, iters)
    return GammaStar(g, tc, g_closed, min_total_value(D, t))


@dataclass(frozen=True)
class FirstStepOptimum:
    gamma: float
    x1: float
    gamma_closed: float
    x1_closed: float


def first_step_optimum(lam: float, t: float, grid: int = 2001) -> FirstStepOptimum:
    """Smallest ratio ``gamma`` admitting a first sweep ``x1 >= lam`` when ``t > 2 lam``.

    For fixed ``x1`` the least admissible ``gamma`` is the larger of the
    growth bound and the first-step bound, so the problem reduces to
    minimising that maximum over ``x1``: coarse grid, then golden-section
    refinement around the best grid point.
    """
    if not t > 2 * lam:
        raise WrongRegime("requires t > 2*lambda")

    def growth(x):
        return (t * t + 3 * t * x + (t + 2 * x) * math.sqrt(t * (t + 2 * x))) / (t * x)

    def first(x):
        return (2 * x + t + lam) / lam

    def h(x):
        return max(growth(x), first(x))

    hi = lam + 10 * max(lam, t)
    step = (hi - lam) / (grid - 1)
    xs = [lam + k * step for k in range(grid)]
    k = min(range(grid), key=lambda i: h(xs[i]))
    a, b = xs[max(k - 1, 0)], xs[min(k + 1, grid - 1)]
    x1, gamma = golden_section(h, a, b)
    rho = t / (2 * lam)
    return FirstStepOptimum(gamma, x1, high_turn_cost_ratio(rho), (2 + 1 / rho) * lam)


def geometric_series(a: float) -> float:
    """``sum_{j <= 1} a**j`` for ``a > 1``, i.e. ``a**2 / (a - 1)``."""
    return a * a / (a - 1)


def geometric_ratio(a: float) -> float:
    return 1 + 2 * geometric_series(a)


@dataclass(frozen=True)
class GeometricBound:
    value: float
    argmin: float


def geometric_line_bound() -> GeometricBound:
    """Lower bound ``inf_{a>1} 1 + 2 a^2/(a-1)`` for plain line search.

    Golden-section search brackets the minimiser; the bracket is then
    tightened by bisection on the sign of ``d/da a^2/(a-1) = a(a-2)/(a-1)^2``
    because the minimum is too flat for function values alone to pin ``a``.
    """
    a0, _ = golden_section(geometric_ratio, 1 + 1e-6, 64.0)
    lo, hi = a0 * (1 - 1e-4), a0 * (1 + 1e-4)
    a = _bisect_sign_change(lambda a: a * (a - 2), lo, hi)
    return GeometricBound(geometric_ratio(a), a)


# --------------------------------------------------------------------------
# exploratory: strategies defined by making every ratio constraint tight
# --------------------------------------------------------------------------


def equality_strategy(m: int, lam: float, t: float, gamma: float, n: int, head: Sequence[float] = ()) -> list[float]:
    """Sweeps obtained by turning every worst-case constraint into an equality.

    With ``x_0 = lam`` the tight constraints read
    ``sum_{i <= k+m-1} (2 x_i + t) = (gamma - 1) x_k`` for ``k >= 0``.  For
    ``m > 2`` the first equation leaves ``m - 2`` sweeps free; they are taken
    from ``head``.
    """
    if len(head) != m - 2:
        raise SearchError(f"need exactly {m - 2} free initial sweeps, got {len(head)}")
    x = [float(lam)] + [float(v) for v in head]
    last = ((gamma - 1) * lam - math.fsum(2 * v + t for v in head) - t) / 2
    x.append(last)
    k = 1
    while len(x) <= n:
        x.append(((gamma - 1) * (x[k] - x[k - 1]) - t) / 2)
        k += 1
    return x[1 : n + 1]


def _grows(xs: Sequence[float], lam: float) -> bool:
    return xs[0] >= lam and all(b > a for a, b in zip(xs, xs[1:]))


def equality_min_gamma(lam: float, t: float, n: int = 40, lo: float = 3.0, hi: float = 1e4) -> float:
    """Smallest ``gamma`` whose two-ray tight strategy keeps growing for ``n`` steps.

    Found by bisection; growth is monotone in ``gamma`` for two rays.
    """
    def grows(g):
        return _grows(equality_strategy(2, lam, t, g, n), lam)

    if not grows(hi):
        raise SearchError("no growing tight strategy below the upper bracket")
    a, b = lo, hi
    if grows(a):
        return a
    for _ in range(200):
        mid = 0.5 * (a + b)
        if grows(mid):
            b = mid
        else:
            a = mid
        if b - a <= 1e-12 * b:
            break
    return b


@dataclass
class EqualityComparison:
    m: int
    gamma: float
    tight: list[float]
    cyclic: list[float]

    @property
    def max_rel_gap(self) -> float:
        return max(abs(a - b) / abs(b) for a, b in zip(self.tight, self.cyclic))

    def to_obj(self) -> dict:
        return {"m": self.m, "gamma": self.gamma, "tight": self.tight, "cyclic": self.cyclic,
                "max_rel_gap": self.max_rel_gap}


def equality_vs_cyclic(m: int, lam: float, t: float, n: int = 15) -> EqualityComparison:
    """Solve the tight system at the cyclic strategy's ratio and compare sweeps.

    The first ``m - 2`` sweeps are free in the tight system and are copied
    from the cyclic strategy.  For ``m > 2`` the recursion is unstable (any
    other ``gamma`` or head makes it oscillate), so keep ``n`` modest.  No
    optimality verdict is attached.
    """
    h = m_ray_turn_cost(m, lam, t)
    gamma = h.claimed.value
    head = [h.distance(i) for i in range(1, m - 1)]
    tight = equality_strategy(m, lam, t, gamma, n, head)
    return EqualityComparison(m, gamma, tight, [h.distance(i) for i in range(1, n + 1)])


# --------------------------------------------------------------------------
# suites for the command line
# --------------------------------------------------------------------------

SUITES = ("lp", "dual", "recurrence", "gamma-star", "gal")


def run_suite(suite: str = "all", phi_shift: float = 0.0) -> list[CertificateReport]:
    """Run named checks; ``phi_shift`` offsets the LP's ``phi`` by ``phi_shift * t``."""
    names = SUITES if suite == "all" else (suite,)
    unknown = [s for s in names if s not in SUITES]
    if unknown:
        raise SearchError(f"unknown suite {unknown[0]!r}; choose from all, {', '.join(SUITES)}")
    rel, _ = tolerances()
    out: list[CertificateReport] = []
    for s in names:
        if s == "lp":
            for g in (9.0, 10.0, 25.0):
                t = 1.0
                out.append(lp_primal_check(g, t, roots(g).r2 * t + phi_shift * t, 30))
        elif s == "dual":
            for g in (10.0, 25.0):
                out.append(lp_dual_check(g, 200, 20))
        elif s == "recurrence":
            for g, t in ((9.0, 2.0), (10.0, 1.0), (25.0, 1.0)):
                rt = recurrences(g, t, 30)
                out.append(CertificateReport(
                    "recurrence", verdict=rt.agrees,
                    params={"gamma": g, "t": t, "closed_form": rt.closed_form, "max_rel_error": rt.max_rel_error},
                ))
            dr = delta_increment_check(2.0, 1.0, 3.0, 20)
            out.append(CertificateReport(
                "delta_increment", verdict=dr.max_rel_error <= rel and dr.increments_positive,
                params={"t": 2.0, "lambda": 1.0, "x1": 3.0, "max_rel_error": dr.max_rel_error},
            ))
            gap = tight_chain_check(1.0, 4.0, 30)
            out.append(CertificateReport(
                "tight_chain", verdict=gap <= rel, params={"lambda": 1.0, "t": 4.0, "max_rel_gap": gap},
            ))
        elif s == "gamma-star":
            worst = 0.0
            for D in (0.1, 1.0, 10.0, 100.0):
                for t in (0.1, 1.0, 10.0, 100.0):
                    gs = gamma_star(D, t)
                    worst = max(worst, _rel_err(gs.gamma, gs.gamma_closed), _rel_err(gs.total, gs.total_closed))
            out.append(CertificateReport("gamma_star", verdict=worst <= 1e-6, params={"max_rel_error": worst}))
        elif s == "gal":
            gb = geometric_line_bound()
            out.append(CertificateReport(
                "geometric_line_bound",
                verdict=abs(gb.value - 9) <= 1e-9 and abs(gb.argmin - 2) <= 1e-9,
                params={"value": gb.value, "argmin": gb.argmin},
            ))
    return out
