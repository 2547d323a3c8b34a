"""Reliability/covertness trade-off: smallest reachable kappa for each epsilon.

For each covertness slack the power is set by the covertness constraint and
the rate maximizes throughput at n = 100; the resulting average decoding error
is the smallest reliability cap that operating point satisfies.
"""

import argparse
import csv
import sys

import numpy as np

from covert_spc import SystemParams
from covert_spc.optimizer import reliability_frontier


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=100)
    ap.add_argument("--points", type=int, default=20)
    ap.add_argument("--out", default="-")
    args = ap.parse_args()

    out = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.writer(out)
    w.writerow(["P_w", "epsilon", "kappa_min"])
    for P_w in (0.0, 50.0, 100.0):
        p = SystemParams(P_w=P_w)
        for eps in np.geomspace(0.01, 0.5, args.points):
            w.writerow([P_w, repr(float(eps)), repr(reliability_frontier(p, float(eps), args.n))])


if __name__ == "__main__":
    main()
