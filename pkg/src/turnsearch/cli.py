"""Command-line front end.

Every subcommand prints CSV or a plain table by default and a
``{"command", "params", "result"}`` JSON document with ``--json``.
Exit codes: 0 success, 1 failed verification, 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import strategies as st
from . import transforms, verify
from .core import FAMILY_PARAMS, CostModel, SearchError, StepSequence, StrategySpec, Target
from .evaluator import adversarial_targets, simulate, worst_case_cr

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_FAMILIES = {name.lower(): name for name in FAMILY_PARAMS}


def fmt(v) -> str:
    """Stable number formatting for CSV output."""
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, float):
        return f"{v:.12g}"
    return "" if v is None else str(v)


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _jsonable(obj):
    # strict JSON has no inf/nan
    if isinstance(obj, float) and not math.isfinite(obj):
        return None if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return _jsonable(obj.item())
    return obj


def envelope(command: str, params: dict, result) -> str:
    doc = {"command": command, "params": params, "result": result}
    return json.dumps(_jsonable(doc), indent=2, allow_nan=False) + "\n"


# --------------------------------------------------------------------------
# argument helpers
# --------------------------------------------------------------------------


def _parse_param(text: str):
    key, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    if key == "regime":
        return key, value
    try:
        num = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"parameter {key!r} needs a number, got {value!r}") from None
    return key, int(num) if key == "m" else num


def load_spec(args) -> StrategySpec:
    if args.spec is not None:
        text = args.spec
        if not text.lstrip().startswith("{") and os.path.exists(text):
            with open(text, encoding="utf-8") as fh:
                text = fh.read()
        return StrategySpec.from_json(text)
    if args.family is None:
        raise SearchError("give a strategy with --spec or --family")
    family = _FAMILIES.get(args.family.lower())
    if family is None:
        raise SearchError(f"unknown strategy family {args.family!r}; choose from {', '.join(FAMILY_PARAMS)}")
    return StrategySpec.from_obj({"family": family, "params": dict(args.param or [])})


def load_cost(args, default: CostModel) -> CostModel:
    if args.plain:
        return CostModel.plain()
    if args.turn_cost is not None:
        return CostModel.turn(args.turn_cost)
    given = [args.alpha1, args.beta1, args.alpha2, args.beta2]
    if all(v is None for v in given):
        return default
    base = (1.0, 0.0, 1.0, 0.0)
    return CostModel(*(b if v is None else v for v, b in zip(given, base)))


def _add_spec_args(p):
    p.add_argument("--spec", help="strategy as inline JSON or a path to a JSON file")
    p.add_argument("--family", help="strategy family name (alternative to --spec)")
    p.add_argument("--param", action="append", type=_parse_param, metavar="KEY=VALUE",
                   help="family parameter, repeatable")


def _add_cost_args(p):
    g = p.add_argument_group("cost model (default: the family's own model)")
    ex = g.add_mutually_exclusive_group()
    ex.add_argument("--plain", action="store_true", help="distance only, (1, 0, 1, 0)")
    ex.add_argument("--turn-cost", type=float, metavar="T", help="(1, 0, 1, T)")
    g.add_argument("--alpha1", type=float)
    g.add_argument("--beta1", type=float)
    g.add_argument("--alpha2", type=float)
    g.add_argument("--beta2", type=float)


def _claim_obj(claimed):
    if isinstance(claimed, st.CompetitiveRatio):
        return {"kind": "competitive_ratio", "value": claimed.value, "status": claimed.status}
    if isinstance(claimed, st.AffineTotal):
        return {"kind": "affine_total", "gamma": claimed.gamma, "phi": claimed.phi}
    return None


# --------------------------------------------------------------------------
# subcommands; each returns (exit code, text)
# --------------------------------------------------------------------------


def cmd_strategy(args):
    spec = load_spec(args)
    h = st.from_spec(spec)
    if args.n < 1:
        raise SearchError("n must be at least 1")
    seq = h.steps(args.n)
    rows = [(i, x, r) for i, (x, r) in enumerate(seq.steps, 1)]
    claim = _claim_obj(h.claimed)
    if args.json:
        result = {"steps": [{"i": i, "x": x, "ray": r} for i, x, r in rows], "claimed": claim,
                  "regime": h.regime}
        return EXIT_OK, envelope("strategy", {"spec": spec.to_obj(), "n": args.n}, result)
    if args.csv:
        return EXIT_OK, to_csv(["i", "x", "ray"], rows)
    lines = [f"{'i':>4}  {'x_i':>20}  ray"]
    lines += [f"{i:>4}  {fmt(x):>20}  {r}" for i, x, r in rows]
    if claim is not None:
        body = ", ".join(f"{k}={fmt(v)}" for k, v in claim.items() if k != "kind")
        lines.append(f"claimed {claim['kind']}: {body}")
    return EXIT_OK, "\n".join(lines) + "\n"


def cmd_evaluate(args):
    spec = load_spec(args)
    h = st.from_spec(spec)
    cost = load_cost(args, h.cost)
    rep = worst_case_cr(h, cost, args.horizon, args.tol)
    if args.json:
        params = {"spec": spec.to_obj(), "cost": cost.as_tuple(), "horizon": args.horizon, "tol": args.tol}
        result = rep.to_obj()
        result["claimed"] = _claim_obj(h.claimed)
        return EXIT_OK, envelope("evaluate", params, result)
    if args.csv:
        return EXIT_OK, rep.to_csv()
    lines = [
        f"supremum CR over {rep.horizon} steps: {fmt(rep.supremum)} (step {rep.argmax})",
        f"converged: {rep.converged}",
        f"completion bound: {fmt(rep.completion_bound)}",
    ]
    claim = _claim_obj(h.claimed)
    if claim is not None and "value" in claim:
        lines.append(f"claimed CR: {fmt(claim['value'])} ({claim['status']})")
    return EXIT_OK, "\n".join(lines) + "\n"


def cmd_simulate(args):
    spec = load_spec(args)
    h = st.from_spec(spec)
    cost = load_cost(args, h.cost)
    if args.adversarial is not None:
        targets = adversarial_targets(h, args.adversarial)
    elif args.distance is not None:
        targets = [Target(args.ray, args.distance)]
    else:
        raise SearchError("give --distance or --adversarial")
    rows = []
    for tg in targets:
        total = simulate(h, tg, cost, args.max_steps)
        bound = h.claimed.total(tg.distance) if isinstance(h.claimed, st.AffineTotal) else None
        rows.append((tg.ray, tg.distance, total, total / tg.distance, bound))
    header = ["ray", "distance", "total_cost", "ratio", "claimed_bound"]
    if args.json:
        params = {"spec": spec.to_obj(), "cost": cost.as_tuple(), "max_steps": args.max_steps}
        return EXIT_OK, envelope("simulate", params, [dict(zip(header, r)) for r in rows])
    return EXIT_OK, to_csv(header, rows)


def cmd_transform(args):
    spec = load_spec(args)
    h = st.from_spec(spec)
    seq = h.steps(args.n)
    out = transforms.make_monotonic(seq)
    if args.to == "normalized":
        out = transforms.make_periodic_fully_monotonic(out, args.m)
    obj = out.to_json_obj()
    if args.json:
        return EXIT_OK, envelope("transform", {"spec": spec.to_obj(), "to": args.to, "m": args.m}, obj)
    return EXIT_OK, json.dumps(obj) + "\n"


def gamma_grid(lo: float, hi: float, points: int, log: bool) -> np.ndarray:
    if points < 2:
        return np.array([lo])
    return np.geomspace(lo, hi, points) if log else np.linspace(lo, hi, points)


def cmd_tradeoff(args):
    if args.gamma_min < 9:
        raise SearchError("gamma-min must be at least 9")
    if args.gamma_max < args.gamma_min or args.points < 1:
        raise SearchError("need gamma-max >= gamma-min and at least one point")
    rows = [(float(g), st.tradeoff_phi(float(g), args.t) / args.t)
            for g in gamma_grid(args.gamma_min, args.gamma_max, args.points, args.log)]
    header = ["gamma", "phi_over_t"]
    if args.json:
        params = {"t": args.t, "gamma_min": args.gamma_min, "gamma_max": args.gamma_max,
                  "points": args.points, "log": args.log}
        return EXIT_OK, envelope("tradeoff", params, [dict(zip(header, r)) for r in rows])
    return EXIT_OK, to_csv(header, rows)


def cmd_optcost(args):
    if not (args.ratio_min > 0 and args.ratio_max >= args.ratio_min) or args.points < 1:
        raise SearchError("need 0 < ratio-min <= ratio-max and at least one point")
    if not args.lam > 0:
        raise SearchError("lambda must be positive")
    grid = np.linspace(args.ratio_min, args.ratio_max, args.points) if args.points > 1 else [args.ratio_min]
    rows = [(float(r), st.optimal_line_ratio(float(r))) for r in grid]
    header = ["t_over_2lambda", "CR"]
    if args.json:
        params = {"lambda": args.lam, "ratio_min": args.ratio_min, "ratio_max": args.ratio_max,
                  "points": args.points}
        return EXIT_OK, envelope("optcost", params, [dict(zip(header, r)) for r in rows])
    return EXIT_OK, to_csv(header, rows)


def cmd_verify(args):
    reports = verify.run_suite(args.suite, args.phi_shift)
    ok = all(r.verdict for r in reports)
    code = EXIT_OK if ok else EXIT_FAIL
    if args.json:
        params = {"suite": args.suite, "phi_shift": args.phi_shift}
        return code, envelope("verify", params, {"ok": ok, "reports": [r.to_obj() for r in reports]})
    lines = [f"{'PASS' if r.verdict else 'FAIL'}  {r.name}  {json.dumps(_jsonable(r.params))}" for r in reports]
    lines.append(f"{sum(r.verdict for r in reports)}/{len(reports)} checks passed")
    return code, "\n".join(lines) + "\n"


def cmd_sweep(args):
    if not args.lam > 0:
        raise SearchError("lambda must be positive")
    if not (args.rho_min >= 0 and args.rho_max >= args.rho_min) or args.points < 1:
        raise SearchError("need 0 <= rho-min <= rho-max and at least one point")
    grid = np.linspace(args.rho_min, args.rho_max, args.points) if args.points > 1 else [args.rho_min]
    rows = []
    for m in args.m:
        for rho in grid:
            rho = float(rho)
            h = st.m_ray_turn_cost(m, args.lam, 2 * args.lam * rho)
            rep = worst_case_cr(h, None, args.horizon)
            rows.append((m, rho, h.regime, h.claimed.value, rep.supremum))
    header = ["m", "rho", "regime", "claimed_cr", "evaluated_cr"]
    if args.json:
        params = {"m": args.m, "lambda": args.lam, "rho_min": args.rho_min, "rho_max": args.rho_max,
                  "points": args.points, "horizon": args.horizon}
        return EXIT_OK, envelope("sweep", params, [dict(zip(header, r)) for r in rows])
    return EXIT_OK, to_csv(header, rows)


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="turnsearch", description="Search strategies on lines and rays with turn costs")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit {command, params, result} JSON")
    common.add_argument("-o", "--output", help="write to this file instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("strategy", parents=[common], help="list the first steps of a strategy")
    _add_spec_args(p)
    p.add_argument("-n", type=int, default=10)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_strategy)

    p = sub.add_parser("evaluate", parents=[common], help="worst-case ratio over a finite horizon")
    _add_spec_args(p)
    _add_cost_args(p)
    p.add_argument("--horizon", type=int, default=60)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--csv", action="store_true", help="per-step table")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("simulate", parents=[common], help="total cost to reach a target")
    _add_spec_args(p)
    _add_cost_args(p)
    p.add_argument("--ray", type=int, default=0)
    p.add_argument("--distance", type=float)
    p.add_argument("--adversarial", type=int, metavar="N", help="place targets just past the first N sweeps")
    p.add_argument("--max-steps", type=int, default=10_000)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("transform", parents=[common], help="make a strategy monotonic, then periodic")
    _add_spec_args(p)
    p.add_argument("--to", choices=("monotonic", "normalized"), default="normalized")
    p.add_argument("--m", type=int, default=None, help="rays for the cyclic reassignment")
    p.add_argument("-n", type=int, default=20, help="steps taken from a closed-form family")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("tradeoff", parents=[common], help="phi(gamma)/t curve")
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--gamma-min", type=float, default=9.0)
    p.add_argument("--gamma-max", type=float, default=59.0)
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--log", action="store_true", help="geometric spacing")
    p.set_defaults(func=cmd_tradeoff)

    p = sub.add_parser("optcost", parents=[common], help="optimal line ratio against t/(2 lambda)")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--ratio-min", type=float, default=0.1)
    p.add_argument("--ratio-max", type=float, default=5.0)
    p.add_argument("--points", type=int, default=50)
    p.set_defaults(func=cmd_optcost)

    p = sub.add_parser("verify", parents=[common], help="run the numerical certificate checks")
    p.add_argument("--suite", default="all", help=f"all or one of {', '.join(verify.SUITES)}")
    p.add_argument("--phi-shift", type=float, default=0.0, help="offset the LP's phi by this multiple of t")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", parents=[common], help="m-ray ratio over a grid of t/(2 lambda)")
    p.add_argument("--m", type=int, nargs="+", default=[2, 3, 4, 5, 6])
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--rho-min", type=float, default=0.0)
    p.add_argument("--rho-max", type=float, default=3.0)
    p.add_argument("--points", type=int, default=31)
    p.add_argument("--horizon", type=int, default=200)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code, text = args.func(args)
    except SearchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
