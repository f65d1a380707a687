"""Chebyshev-type deviation bounds for arithmetic functions on [1, n].

Convention: a point m with |f(m) - center| >= b * scale is an exceedance
(ties included); every other point is "within".  So within + exceedance = n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .additive import AdditiveFunctionSpec, ValueHistogram, histogram, omega, spec_name
from .errors import DegenerateDistributionError, DomainError, HypothesisViolation, UsageError
from .probspace import EmpiricalStats, _exact_central_moments, moments_from_histogram

DEFAULT_EPSILON = 0.25
DEFAULT_GRID = (10**3, 10**4, 10**5, 10**6, 10**7)
MIN_N = 16  # smallest integer with ln ln n > 1
CSV_COLUMNS = ("n", "b", "epsilon", "exceedance_fraction", "chebyshev_bound", "within_fraction")
PHI_LOG_DIAGNOSTIC = "condition A_n → ∞ not met"


@dataclass(frozen=True)
class BoundCheck:
    n: int
    b: float
    epsilon: float | None
    center: float
    scale: float
    exceedance_count: int
    within_count: int
    stated_rate_bound: float | None = None

    @property
    def exceedance_fraction(self) -> float:
        return self.exceedance_count / self.n

    @property
    def within_fraction(self) -> float:
        return self.within_count / self.n

    @property
    def chebyshev_bound(self) -> float:
        return 1.0 / (self.b * self.b)

    @property
    def satisfies_chebyshev_bound(self) -> bool:
        return self.exceedance_fraction <= self.chebyshev_bound

    @property
    def satisfies_stated_rate(self) -> bool | None:
        if self.stated_rate_bound is None:
            return None
        return self.exceedance_fraction <= self.stated_rate_bound

    def row(self) -> dict:
        return {
            "n": self.n,
            "b": self.b,
            "epsilon": self.epsilon,
            "exceedance_fraction": self.exceedance_fraction,
            "chebyshev_bound": self.chebyshev_bound,
            "within_fraction": self.within_fraction,
        }


def deviation_count(hist: ValueHistogram, center, scale_sq, b: float) -> int:
    """#{m : (f(m) - center)^2 >= b^2 * scale_sq}.

    With an integer histogram and rational ``center``/``scale_sq`` the
    comparison is done in exact arithmetic.
    """
    exact = hist.is_integer and all(isinstance(x, (int, Fraction)) for x in (center, scale_sq))
    if exact:
        bound = Fraction(b) ** 2 * scale_sq
        return sum(c for v, c in zip(hist.values.tolist(), hist.counts.tolist()) if (v - center) ** 2 >= bound)
    dev = hist.values.astype(np.float64) - float(center)
    hit = dev * dev >= (b * b) * float(scale_sq)
    return int(hist.counts[hit].sum())


def _loglog(n: int) -> float:
    if n < MIN_N:
        raise DomainError(f"need n >= {MIN_N} so that ln ln n > 1, got {n}")
    return math.log(math.log(n))


def chebyshev_check(hist: ValueHistogram, stats: EmpiricalStats, b: float, epsilon: float | None = None) -> BoundCheck:
    """Exceedance of |f - A_n| >= b sigma_n measured on the histogram itself."""
    if not b > 0:
        raise UsageError(f"b must be > 0, got {b}")
    if stats.variance <= 0:
        raise DegenerateDistributionError("sigma_n = 0: the distribution is a point mass")
    if hist.is_integer:
        center, moments = _exact_central_moments(hist, 2)
        scale_sq = moments[2]
    else:
        center, scale_sq = stats.mean, stats.variance
    exceed = deviation_count(hist, center, scale_sq, b)
    return BoundCheck(hist.n, b, epsilon, stats.mean, stats.std, exceed, hist.n - exceed)


def lln_scan(
    spec: AdditiveFunctionSpec,
    n_grid: Sequence[int] = DEFAULT_GRID,
    epsilon: float = DEFAULT_EPSILON,
    workers: int | None = None,
) -> list[BoundCheck]:
    """chebyshev_check with b(n) = (ln ln n)^epsilon along a grid."""
    if epsilon < 0:
        raise UsageError(f"epsilon must be >= 0, got {epsilon}")
    out = []
    for n in n_grid:
        b = _loglog(n) ** epsilon
        hist = histogram(spec, n, workers=workers)
        out.append(chebyshev_check(hist, moments_from_histogram(hist, 2), b, epsilon))
    return out


def hardy_ramanujan_check(
    n: int,
    epsilon: float = DEFAULT_EPSILON,
    hist: ValueHistogram | None = None,
    center=None,
    scale_sq=None,
    workers: int | None = None,
) -> BoundCheck:
    """Exceedance of |omega(m) - ln ln n| >= (ln ln n)^(1/2 + epsilon).

    ``center``/``scale_sq`` default to ln ln n; passing the empirical mean
    and variance instead reproduces :func:`chebyshev_check`.  Two candidate
    decay bounds are reported: ``chebyshev_bound`` = (ln ln n)^(-2 eps) and
    ``stated_rate_bound`` = (ln ln n)^(-(1/2 + 2 eps)).
    """
    if not epsilon > 0:
        raise UsageError(f"epsilon must be > 0, got {epsilon}")
    ll = _loglog(n)
    if hist is None:
        hist = histogram(omega(), n, workers=workers)
    if center is None:
        center = ll
    if scale_sq is None:
        scale_sq = ll
    b = ll**epsilon
    exceed = deviation_count(hist, center, scale_sq, b)
    return BoundCheck(n, b, epsilon, float(center), math.sqrt(scale_sq), exceed, n - exceed,
                      stated_rate_bound=ll ** -(0.5 + 2 * epsilon))


@dataclass(frozen=True)
class TuranResult:
    n: int
    mean: float
    variance: float
    mean_diverges: bool

    @property
    def ratio(self) -> float:
        return self.variance / self.mean

    @property
    def note(self) -> str:
        return "" if self.mean_diverges else "Turán hypothesis A_n → ∞ not met"

    def row(self) -> dict:
        return {"n": self.n, "mean": self.mean, "variance": self.variance, "ratio": self.ratio, "note": self.note}


def turan_check(spec: AdditiveFunctionSpec, n_grid: Sequence[int], workers: int | None = None) -> list[TuranResult]:
    """sigma_n^2 / A_n along a grid for a bounded nonnegative strongly additive f."""
    if not spec.strongly_additive:
        raise HypothesisViolation(f"{spec_name(spec)} is not strongly additive")
    if not spec.nonnegative:
        raise HypothesisViolation(f"{spec_name(spec)} takes negative values on primes; need 0 <= f(p) < c")
    out = []
    for n in n_grid:
        stats = moments_from_histogram(histogram(spec, n, workers=workers), 2)
        if stats.mean == 0:
            raise DegenerateDistributionError(f"A_n = 0 at n={n}; the ratio sigma_n^2/A_n is undefined")
        out.append(TuranResult(n, stats.mean, stats.variance, spec.mean_diverges))
    return out
