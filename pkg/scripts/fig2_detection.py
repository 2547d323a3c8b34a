"""Average detection error vs transmit power for several jamming powers.

Writes one CSV row per (P_w, P_a) with the quadrature value, the closed-form
approximation, the averaged Pinsker bound and a signal-level Monte Carlo run.
"""

import argparse
import csv
import sys

import numpy as np

from covert_spc import QuadratureConfig, SimConfig, SystemParams
from covert_spc.covertness import (
    avg_detection_error_approx,
    avg_detection_error_quadrature,
    avg_kl_lower_bound,
)
from covert_spc.simulator import simulate_detection_signal_level


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=10**6)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--n", type=int, default=100)
    ap.add_argument("--points", type=int, default=20)
    ap.add_argument("--out", default="-")
    args = ap.parse_args()

    out = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.writer(out)
    w.writerow(["P_w", "P_a", "xi_exact", "xi_approx", "xi_kl", "xi_sim", "sim_std_err"])
    quad = QuadratureConfig(100)
    for k, P_w in enumerate((0.0, 50.0, 100.0)):
        p = SystemParams(P_w=P_w)
        for j, P_a in enumerate(np.linspace(0.1, 5.0, args.points)):
            sim = simulate_detection_signal_level(p, P_a, args.n, SimConfig(args.trials, args.seed + 1000 * k + j))
            w.writerow([
                P_w,
                repr(float(P_a)),
                repr(avg_detection_error_quadrature(p, P_a, args.n, quad)),
                repr(avg_detection_error_approx(p, P_a, args.n)),
                repr(avg_kl_lower_bound(p, P_a, args.n)),
                repr(sim.mean),
                repr(sim.std_err),
            ])


if __name__ == "__main__":
    main()
