"""Golden data: large-n results stored once so tests run at desk scale.

``regenerate`` recomputes every entry; pi(1e8) is taken from a plain
(non-segmented) bytearray sieve so it does not share code with ``sieve.py``.
"""

from __future__ import annotations

import json
import math
from importlib import resources
from pathlib import Path

GOLDEN_VERSION = 1
GOLDEN_FILE = "golden_v1.json"


def golden_path() -> Path:
    return Path(str(resources.files("probnt") / "data" / GOLDEN_FILE))


def load_golden(path: Path | None = None) -> dict:
    with open(path or golden_path(), encoding="utf-8") as fh:
        return json.load(fh)


def reference_pi(n: int) -> int:
    """pi(n) from a bytearray Eratosthenes over [0, n]."""
    if n < 2:
        return 0
    flags = bytearray([1]) * (n + 1)
    flags[0] = flags[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if flags[p]:
            flags[p * p :: p] = bytes(len(range(p * p, n + 1, p)))
    return flags.count(1)


def regenerate(path: Path | None = None, workers: int | None = None) -> dict:
    from .additive import omega
    from .clt import EMPIRICAL, THEORETICAL, erdos_kac_experiment
    from .density import density_scan
    from .lln import hardy_ramanujan_check, lln_scan, turan_check

    grid_density = [10**k for k in range(2, 9)]
    pis = {str(n): reference_pi(n) for n in grid_density}
    reports = density_scan(grid_density)
    ks_grid = [10**k for k in range(3, 8)]
    data = {
        "version": GOLDEN_VERSION,
        "pi": pis,
        "mertens_times_ln_n": {str(r.n): r.mertens_times_ln_n for r in reports},
        "hardy_ramanujan_exceedance_1e7_eps0.25": hardy_ramanujan_check(10**7, 0.25, workers=workers).exceedance_fraction,
        "lln_exceedance_omega_1e7_eps0.25": lln_scan(omega(), [10**7], 0.25, workers=workers)[0].exceedance_fraction,
        "ks_omega_empirical": {str(r.n): r.ks_statistic for r in erdos_kac_experiment(omega(), ks_grid, EMPIRICAL, workers)},
        "ks_omega_theoretical": {str(r.n): r.ks_statistic for r in erdos_kac_experiment(omega(), ks_grid, THEORETICAL, workers)},
        "turan_ratio_omega_1e7": turan_check(omega(), [10**7], workers)[0].ratio,
    }
    target = path or golden_path()
    target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return data
