#!/usr/bin/env python3
"""KS distance to the normal law for omega and omega_1 - omega_2, both normalizations, as CSV."""

import argparse
import csv
import sys

from probnt.additive import NAMED_SPECS
from probnt.cli import parse_grid
from probnt.clt import CSV_COLUMNS, EMPIRICAL, THEORETICAL, erdos_kac_experiment


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--grid", type=parse_grid, default=(10**3, 10**4, 10**5, 10**6, 10**7))
    ap.add_argument("--specs", default="omega,omega_diff")
    ap.add_argument("--threads", type=int, default=None)
    args = ap.parse_args()

    out = csv.DictWriter(sys.stdout, fieldnames=CSV_COLUMNS, lineterminator="\n")
    out.writeheader()
    for name in args.specs.split(","):
        for norm in (EMPIRICAL, THEORETICAL):
            for res in erdos_kac_experiment(NAMED_SPECS[name], args.grid, norm, workers=args.threads):
                out.writerow(res.row())


if __name__ == "__main__":
    main()
