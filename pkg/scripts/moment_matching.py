#!/usr/bin/env python3
"""Central moments of f on [1, n] against its two-point model, for every matched pair."""

import argparse

from probnt.additive import NAMED_SPECS
from probnt.cli import parse_int
from probnt.models import TwoPointModel, match_report, sanctioned_model

PAIRS = ("omega", "omega1", "omega2", "f4", "omega_diff")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=parse_int, default=10**6)
    ap.add_argument("--K", type=int, default=6)
    args = ap.parse_args()

    for name in PAIRS:
        spec = NAMED_SPECS[name]
        rep = match_report(spec, TwoPointModel(sanctioned_model(spec)), args.n, args.K)
        print(f"\n{name} vs {rep.model}, n={rep.n}")
        print(f"{'k':>3} {'arithmetic':>12} {'model exact':>12} {'per-prime':>12} {'asymptote':>10}")
        for r in rep.rows:
            asym = "-" if r.asymptote is None else f"{r.asymptote:.5f}"
            print(f"{r.k:>3} {r.arithmetic:>12.5f} {r.model_exact:>12.5f} {r.model_per_prime_sum:>12.5f} {asym:>10}")


if __name__ == "__main__":
    main()
