"""Command-line experiment runner: analyze, sweep, optimize, simulate.

Exit codes: 0 success (infeasible optimizations included), 2 usage or
scenario error, 3 numerical fault.
"""

from __future__ import annotations

import argparse
import dataclasses
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import covertness as cov
from . import optimizer as opt
from . import reliability as rel
from .model import Constraints, ScenarioError, SystemParams, load_scenario
from .simulator import MODES, SimConfig, simulate, simulate_detection_signal_level

SWEEP_VARS = ("P_a", "P_w", "n", "epsilon", "kappa")
METRICS = (
    "xi_exact",
    "xi_approx",
    "xi_kl",
    "xi_sim",
    "delta",
    "eta",
    "P_a_opt",
    "R_opt",
    "eta_opt",
    "eta_fixed",
    "kappa_min",
)
DEFAULT_METRICS = "xi_exact,xi_approx,xi_kl,delta,eta"


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    start: float
    stop: float
    points: int
    scale: str = "linear"

    def __post_init__(self):
        if self.variable not in SWEEP_VARS:
            raise UsageError(f"unknown sweep variable '{self.variable}'")
        if not self.start < self.stop:
            raise UsageError("sweep needs start < stop")
        if self.points < 2:
            raise UsageError("sweep needs at least 2 points")
        if self.scale == "log" and self.start <= 0:
            raise UsageError("log sweep needs start > 0")

    def grid(self) -> list:
        if self.scale == "log":
            values = np.geomspace(self.start, self.stop, self.points)
        else:
            values = np.linspace(self.start, self.stop, self.points)
        if self.variable == "n":
            return [int(round(v)) for v in values]
        return [float(v) for v in values]


def _num(x):
    # JSON has no NaN/inf; emit null so files stay parseable
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x) if math.isfinite(x) else ""
    return str(x)


def analyze_record(params: SystemParams, P_a: float, R: float, n: int, quad: cov.QuadratureConfig) -> dict:
    """Covertness and reliability summary at one operating point."""
    report = cov.covertness_report(params, P_a, n, quad)
    delta = rel.avg_decoding_error(params, P_a, R, n) if P_a > 0 else 1.0
    return {
        "P_a": P_a,
        "R": R,
        "n": n,
        "xi_exact": report.xi_exact_avg,
        "xi_approx": report.xi_approx_avg,
        "xi_kl": report.xi_kl_avg,
        "delta": delta,
        "eta": opt.effective_throughput(n, R, delta),
    }


def solution_record(sol: opt.InnerSolution | None) -> dict | None:
    if sol is None:
        return None
    return {k: _num(v) if not isinstance(v, tuple) else list(v) for k, v in dataclasses.asdict(sol).items()}


def sweep_rows(args, params: SystemParams, constraints: Constraints, spec: SweepSpec, metrics: list[str]):
    quad = cov.QuadratureConfig(args.B)
    for value in spec.grid():
        P_a, R, n = args.P_a, args.R, args.n
        p, c = params, constraints
        if spec.variable == "P_a":
            P_a = value
        elif spec.variable == "P_w":
            p = params.replace(P_w=value)
        elif spec.variable == "n":
            n = value
            c = c.replace(n_min=min(c.n_min, n), n_max=max(c.n_max, n))
        elif spec.variable == "epsilon":
            c = c.replace(epsilon=value)
        else:
            c = c.replace(kappa=value)
        row = {spec.variable: value}
        base = None
        inner = None
        for m in metrics:
            if m in ("xi_exact", "xi_approx", "xi_kl", "delta", "eta"):
                base = base or analyze_record(p, P_a, R, n, quad)
                row[m] = base[m]
            elif m == "xi_sim":
                cfg = SimConfig(args.trials, args.seed)
                row[m] = simulate_detection_signal_level(p, P_a, n, cfg).mean
            elif m in ("P_a_opt", "R_opt", "eta_opt"):
                inner = inner or opt.solve_inner(p, n, c, quad, args.method)
                row[m] = {"P_a_opt": inner.P_a_star, "R_opt": inner.R_star, "eta_opt": inner.eta}[m]
            elif m == "eta_fixed":
                row[m] = opt.fixed_rate_throughput(p, n, c, R, quad, args.method)
            elif m == "kappa_min":
                row[m] = opt.reliability_frontier(p, c.epsilon, n, c.P_a_max, quad)
        yield row


def _scenario(args):
    if args.scenario is None:
        return SystemParams(), Constraints()
    return load_scenario(args.scenario)


def _constraints(args, constraints: Constraints) -> Constraints:
    overrides = {
        k: getattr(args, k)
        for k in ("epsilon", "kappa", "P_a_max", "n_min", "n_max")
        if getattr(args, k, None) is not None
    }
    try:
        return constraints.replace(**overrides)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_analyze(args, out):
    params, _ = _scenario(args)
    record = analyze_record(params, args.P_a, args.R, args.n, cov.QuadratureConfig(args.B))
    out.write(json.dumps(record) + "\n")


def cmd_sweep(args, out):
    params, constraints = _scenario(args)
    constraints = _constraints(args, constraints)
    metrics = [m.strip() for m in args.metrics.split(",") if m.strip()]
    for m in metrics:
        if m not in METRICS:
            raise UsageError(f"unknown metric '{m}' (known: {', '.join(METRICS)})")
    spec = SweepSpec(args.var, args.start, args.stop, args.points, "log" if args.log else "linear")
    out.write(",".join([spec.variable] + metrics) + "\n")
    for row in sweep_rows(args, params, constraints, spec, metrics):
        out.write(",".join(_fmt(row[k]) for k in [spec.variable] + metrics) + "\n")


def cmd_optimize(args, out):
    params, constraints = _scenario(args)
    constraints = _constraints(args, constraints)
    result = opt.optimize(params, constraints, cov.QuadratureConfig(args.B), args.method, args.workers)
    record = {
        "feasible": result.feasible,
        "best": solution_record(result.best),
        "constraints": dataclasses.asdict(constraints),
        "trace": [solution_record(s) for s in result.trace],
    }
    out.write(json.dumps(record) + "\n")


def cmd_simulate(args, out):
    params, _ = _scenario(args)
    if args.mode not in MODES:
        raise UsageError(f"unknown mode '{args.mode}' (known: {', '.join(MODES)})")
    if args.trials < 1:
        raise UsageError("trials must be >= 1")
    cfg = SimConfig(args.trials, args.seed, args.mode, args.workers)
    est = simulate(params, cfg, args.P_a, args.n, args.R)
    record = {
        "mode": args.mode,
        "mean": est.mean,
        "std_err": est.std_err,
        "trials": est.trials,
        "seed": args.seed,
        "std_err_degenerate": est.trials < 2,
    }
    out.write(json.dumps(record) + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="covert-spc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, point=True):
        p.add_argument("--scenario", help="flat JSON scenario file")
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trials", type=int, default=100_000)
        p.add_argument("--B", type=int, default=100, help="quadrature nodes")
        p.add_argument("--method", choices=("exact", "approx"), default="exact")
        p.add_argument("--workers", type=int, default=1)
        if point:
            p.add_argument("--P-a", dest="P_a", type=float, default=1.0)
            p.add_argument("--R", type=float, default=1.0)
            p.add_argument("--n", type=int, default=100)

    def limits(p):
        p.add_argument("--epsilon", type=float)
        p.add_argument("--kappa", type=float)
        p.add_argument("--P-a-max", dest="P_a_max", type=float)
        p.add_argument("--n-min", dest="n_min", type=int)
        p.add_argument("--n-max", dest="n_max", type=int)

    p = sub.add_parser("analyze", help="covertness and reliability at one point")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="CSV sweep over one variable")
    common(p)
    limits(p)
    p.add_argument("--var", required=True, choices=SWEEP_VARS)
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--log", action="store_true")
    p.add_argument("--metrics", default=DEFAULT_METRICS)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("optimize", help="maximize effective throughput")
    common(p, point=False)
    limits(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("simulate", help="Monte Carlo estimate")
    common(p)
    p.add_argument("--mode", default="detection_signal_level")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    buf = io.StringIO()
    try:
        args.func(args, buf)
    except (ScenarioError, UsageError, FileNotFoundError) as exc:
        field = getattr(exc, "field", None)
        msg = f"error: {exc}" + (f" [field: {field}]" if field else "")
        print(msg, file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (opt.NumericalFault, ArithmeticError) as exc:
        print(f"numerical fault: {exc}", file=sys.stderr)
        return 3
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return 0


if __name__ == "__main__":
    sys.exit(main())
