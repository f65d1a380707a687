"""The uniform probability space on {1, ..., n}: densities, moments and CDFs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from .additive import BIN_MOMENT_ORDER, ValueHistogram, shift_central
from .errors import UsageError

DEFAULT_ORDER = 6


def density(indicator: Callable[[int], bool], n: int) -> float:
    """P_n(A) = #{m <= n : m in A} / n."""
    if n < 1:
        raise UsageError(f"n must be >= 1, got {n}")
    return sum(1 for m in range(1, n + 1) if indicator(m)) / n


def multiples_density(p: int, n: int) -> Fraction:
    """Exact density of the multiples of p in [1, n], floor(n/p)/n."""
    if n < 1 or p < 1:
        raise UsageError("n and p must be >= 1")
    return Fraction(n // p, n)


def density_candidates(indicator: Callable[[int], bool], grid: Iterable[int]) -> list[tuple[int, float]]:
    """Finite-n approximations to an asymptotic density.

    The limit is only ever reported as a candidate; it is finitely additive
    but not a measure, so nothing here treats it as a probability.
    """
    return [(n, density(indicator, n)) for n in grid]


@dataclass(frozen=True)
class EmpiricalStats:
    n: int
    mean: float
    variance: float
    central_moments: dict[int, float] = field(repr=False)
    max_order: int = DEFAULT_ORDER

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)


def _exact_central_moments(hist: ValueHistogram, K: int) -> tuple[Fraction, dict[int, Fraction]]:
    n = hist.n
    pairs = list(zip(hist.values.tolist(), hist.counts.tolist()))
    mean = Fraction(sum(v * c for v, c in pairs), n)
    moments = {}
    for k in range(2, K + 1):
        moments[k] = sum((v - mean) ** k * c for v, c in pairs) / n
    return mean, moments


def moments_from_histogram(hist: ValueHistogram, K: int = DEFAULT_ORDER) -> EmpiricalStats:
    """Mean and central moments of orders 2..K, in two passes over the bins.

    Integer histograms are summed in exact rational arithmetic and rounded
    once at the end.
    """
    if K < 2:
        raise UsageError(f"moment order K must be >= 2, got {K}")
    if hist.n < 1 or len(hist.counts) == 0:
        raise UsageError("histogram is empty")
    if hist.is_integer:
        mean, exact = _exact_central_moments(hist, K)
        moments = {k: float(v) for k, v in exact.items()}
        return EmpiricalStats(hist.n, float(mean), moments[2], moments, K)
    mean = hist.mean()
    if hist.bin_central is not None and K <= BIN_MOMENT_ORDER:
        # within-bin spread is carried by the per-bin central power sums
        shifted = shift_central(hist.bin_central, hist.values - mean)
        moments = {k: math.fsum(shifted[:, k].tolist()) / hist.n for k in range(2, K + 1)}
    else:
        dev = hist.values - mean
        c = hist.counts.astype(np.float64)
        moments = {k: math.fsum((dev**k * c).tolist()) / hist.n for k in range(2, K + 1)}
    return EmpiricalStats(hist.n, mean, max(moments[2], 0.0), moments, K)


@dataclass(frozen=True, eq=False)
class EmpiricalCDF:
    """Step CDF: ``cumulative[i]`` = fraction of the mass at points <= ``points[i]``."""

    points: np.ndarray
    cumulative: np.ndarray
    masses: np.ndarray

    def __call__(self, x: float) -> float:
        i = np.searchsorted(self.points, x, side="right")
        return 0.0 if i == 0 else float(self.cumulative[i - 1])

    def left_limits(self) -> np.ndarray:
        """F(v-) at each support point."""
        return np.concatenate([[0.0], self.cumulative[:-1]])

    def mean(self) -> float:
        return math.fsum((self.points * self.masses).tolist())

    def variance(self) -> float:
        mu = self.mean()
        return math.fsum(((self.points - mu) ** 2 * self.masses).tolist())


def empirical_cdf(hist: ValueHistogram, normalize: tuple[float, float] | None = None) -> EmpiricalCDF:
    """CDF of (v - center)/scale under the histogram weights."""
    pts = hist.values.astype(np.float64)
    if normalize is not None:
        center, scale = normalize
        if not scale > 0:
            raise UsageError(f"normalization scale must be > 0, got {scale}")
        pts = (pts - center) / scale
    order = np.argsort(pts, kind="stable")
    pts = pts[order]
    counts = hist.counts[order]
    cum = np.cumsum(counts) / hist.n
    cum[-1] = 1.0
    return EmpiricalCDF(pts, cum, counts / hist.n)
