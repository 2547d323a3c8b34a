"""Effective throughput vs blocklength, optimized rate and fixed rate."""

import argparse
import csv
import sys

from covert_spc import Constraints, QuadratureConfig, SystemParams, optimize
from covert_spc.optimizer import fixed_rate_throughput


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rate", type=float, default=1.0, help="fixed rate (bpcu)")
    ap.add_argument("--n-min", type=int, default=50)
    ap.add_argument("--n-max", type=int, default=200)
    ap.add_argument("--workers", type=int, default=4)
    ap.add_argument("--out", default="-")
    args = ap.parse_args()

    out = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.writer(out)
    w.writerow(["P_w", "n", "P_a_opt", "R_opt", "eta_opt", "eta_fixed"])
    cons = Constraints(n_min=args.n_min, n_max=args.n_max)
    quad = QuadratureConfig(100)
    for P_w in (0.0, 100.0):
        p = SystemParams(P_w=P_w)
        result = optimize(p, cons, quad, workers=args.workers)
        for sol in result.trace:
            fixed = fixed_rate_throughput(p, sol.n, cons, args.rate, quad)
            w.writerow([P_w, sol.n, repr(sol.P_a_star), repr(sol.R_star), repr(sol.eta), repr(fixed)])
        if result.best is not None:
            print(f"P_w={P_w:g}: best n={result.best.n} eta={result.best.eta:.4f}", file=sys.stderr)


if __name__ == "__main__":
    main()
