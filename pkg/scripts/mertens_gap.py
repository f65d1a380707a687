#!/usr/bin/env python3
"""Print pi(n) ln n / n beside prod_{p <= sqrt n}(1 - 1/p) ln n along a decade grid."""

import argparse
import math

from probnt.density import TWO_EXP_NEG_GAMMA, density_scan


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-exp", type=int, default=8, help="largest grid point is 10**max_exp")
    args = ap.parse_args()

    grid = [10**k for k in range(2, args.max_exp + 1)]
    print(f"2 e^-gamma = {TWO_EXP_NEG_GAMMA:.10f}")
    print(f"{'n':>12} {'pi(n)':>10} {'pi ln n/n':>10} {'mertens ln n':>13} {'gap':>9}")
    for r in density_scan(grid):
        pi_scaled = r.pi_density * math.log(r.n)
        print(f"{r.n:>12} {r.pi_n:>10} {pi_scaled:>10.6f} {r.mertens_times_ln_n:>13.6f} "
              f"{pi_scaled - r.mertens_times_ln_n:>+9.5f}")


if __name__ == "__main__":
    main()
