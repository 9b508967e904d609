"""Critical values of the white-noise null for the published (N, B) cells.

Prints the analytic threshold at alpha = 0.01 (and 0.001) next to the
reported number, plus the Monte Carlo 99th percentile when --reps > 0.
"""

import argparse

import numpy as np

from pacnull.mcval import mc_null
from pacnull.nullmodel import critical_value, null_params

CELLS = [
    (7000, 18, 0.0002261),
    (20000, 36, 0.0001094855),
    (24000, 51, 0.0001105),
    (450, 20, 0.0046073),
    (600, 8, 0.00211),
    (600, 9, 0.00211),
    (600, 18, 0.00270),
    (600, 36, 0.00383),
    (600, 60, 0.00527),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--reps", type=int, default=0, help="Monte Carlo replicates per cell (0 skips)")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    head = f"{'N':>6} {'B':>3} {'reported':>12} {'cv 0.01':>12} {'rel':>8} {'cv 0.001':>12}"
    if args.reps:
        head += f" {'mc q99':>12}"
    print(head)
    for n, b, reported in CELLS:
        p = null_params(n, b)
        cv = critical_value(p, 0.01)
        line = f"{n:>6} {b:>3} {reported:>12.7g} {cv:>12.7g} {cv / reported - 1:>+8.2%} {critical_value(p, 0.001):>12.7g}"
        if args.reps:
            line += f" {np.quantile(mc_null(n, b, args.reps, args.seed).mis, 0.99):>12.7g}"
        print(line)


if __name__ == "__main__":
    main()
