"""Prime density pi(n)/n against 1/ln n and the sieve product over p <= sqrt(n).

Treating "p divides m" as independent events with probability 1/p predicts
the density of primes in [1, n] to be prod_{p <= sqrt n} (1 - 1/p), which by
Mertens behaves like 2 e^{-gamma} / ln n.  The true density behaves like
1 / ln n, so the two differ by the constant factor 2 e^{-gamma} ~ 1.1229.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .errors import DomainError, UsageError
from .sieve import prime_counts_at, primes_up_to

# Euler-Mascheroni constant to 20 decimals (OEIS A001620).
EULER_GAMMA = 0.57721566490153286061
TWO_EXP_NEG_GAMMA = 2.0 * math.exp(-EULER_GAMMA)

CSV_COLUMNS = ("n", "pi_n", "pi_density", "pnt_estimate", "mertens_product", "mertens_asymptote", "mertens_times_ln_n")


def mertens_product(x: float) -> float:
    """prod_{p <= x} (1 - 1/p), accumulated as a sum of logs."""
    if x < 0:
        raise UsageError(f"x must be >= 0, got {x}")
    primes = primes_up_to(int(math.floor(x))).primes
    return math.exp(math.fsum(math.log1p(-1.0 / p) for p in primes.tolist()))


@dataclass(frozen=True)
class DensityReport:
    n: int
    pi_n: int
    pi_density: float
    pnt_estimate: float
    mertens_product: float
    mertens_asymptote: float
    gamma: float = EULER_GAMMA

    @property
    def pi_over_pnt(self) -> float:
        return self.pi_density / self.pnt_estimate

    @property
    def mertens_over_pnt(self) -> float:
        return self.mertens_product / self.pnt_estimate

    @property
    def mertens_times_ln_n(self) -> float:
        """Finite-n approximation of 2 e^{-gamma}."""
        return self.mertens_product * math.log(self.n)

    @property
    def ratios(self) -> dict[str, float]:
        return {
            "pi_density/pnt_estimate": self.pi_over_pnt,
            "mertens_product/pnt_estimate": self.mertens_over_pnt,
            "mertens_product*ln_n": self.mertens_times_ln_n,
        }

    def row(self) -> dict:
        out = asdict(self)
        out.pop("gamma")
        out["mertens_times_ln_n"] = self.mertens_times_ln_n
        return {k: out[k] for k in CSV_COLUMNS}


def _report(n: int, pi_n: int, log_products: dict[int, float]) -> DensityReport:
    ln_n = math.log(n)
    return DensityReport(
        n=n,
        pi_n=pi_n,
        pi_density=pi_n / n,
        pnt_estimate=1.0 / ln_n,
        mertens_product=math.exp(log_products[math.isqrt(n)]),
        mertens_asymptote=TWO_EXP_NEG_GAMMA / ln_n,
    )


def _check_n(n: int) -> None:
    if n < 3:
        raise DomainError(f"density reports need n >= 3 (ln n too small to compare), got {n}")


def density_report(n: int) -> DensityReport:
    return density_scan([n])[0]


def density_scan(n_grid: list[int]) -> list[DensityReport]:
    """One report per grid point from one prime count pass and one sieve up to sqrt(max n)."""
    grid = [int(n) for n in n_grid]
    if not grid:
        return []
    for n in grid:
        _check_n(n)
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise UsageError("density grid must be ascending")
    roots = sorted({math.isqrt(n) for n in grid})
    small = primes_up_to(roots[-1]).primes.tolist()
    log_products: dict[int, float] = {}
    terms: list[float] = []
    i = 0
    for r in roots:
        while i < len(small) and small[i] <= r:
            terms.append(math.log1p(-1.0 / small[i]))
            i += 1
        log_products[r] = math.fsum(terms)
    counts = prime_counts_at(grid)
    return [_report(n, c, log_products) for n, c in zip(grid, counts)]
