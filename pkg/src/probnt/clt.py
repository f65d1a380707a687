"""Distance of normalized arithmetic functions from the standard normal law."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .additive import AdditiveFunctionSpec, exact_mean, histogram, spec_name
from .errors import DegenerateDistributionError, DomainError, HypothesisViolation, UsageError
from .lln import MIN_N, PHI_LOG_DIAGNOSTIC
from .probspace import EmpiricalCDF, empirical_cdf, moments_from_histogram

THEORETICAL = "theoretical"
EMPIRICAL = "empirical"
CSV_COLUMNS = ("n", "spec", "normalization", "center", "scale", "ks_statistic")

# Abramowitz & Stegun 26.2.17: for x >= 0,
#   1 - Phi(x) = phi(x) * (b1 t + b2 t^2 + b3 t^3 + b4 t^4 + b5 t^5),  t = 1/(1 + P x),
# with absolute error below 7.5e-8.
_P = 0.2316419
_B = (0.319381530, -0.356563782, 1.781477937, -1.821255978, 1.330274429)
_INV_SQRT_2PI = 0.3989422804014327


def _upper_half(x: np.ndarray) -> np.ndarray:
    """Phi(x) for x >= 0."""
    t = 1.0 / (1.0 + _P * x)
    poly = t * (_B[0] + t * (_B[1] + t * (_B[2] + t * (_B[3] + t * _B[4]))))
    out = 1.0 - _INV_SQRT_2PI * np.exp(-0.5 * x * x) * poly
    return np.where(x == 0, 0.5, out)


def standard_normal_cdf(x):
    """Phi(x), evaluated at |x| and reflected so that Phi(-x) = 1 - Phi(x) exactly."""
    arr = np.asarray(x, dtype=np.float64)
    upper = _upper_half(np.abs(arr))
    out = np.where(arr >= 0, upper, 1.0 - upper)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class KSResult:
    n: int
    ks_statistic: float
    center: float
    scale: float
    sample_size: int
    normalization: str = ""
    spec: str = ""

    def row(self) -> dict:
        return {
            "n": self.n,
            "spec": self.spec,
            "normalization": self.normalization,
            "center": self.center,
            "scale": self.scale,
            "ks_statistic": self.ks_statistic,
        }


def ks_distance(
    cdf: EmpiricalCDF,
    reference: Callable = standard_normal_cdf,
    *,
    n: int | None = None,
    center: float = 0.0,
    scale: float = 1.0,
) -> KSResult:
    """sup |F_emp - reference|, taken at both one-sided limits of every step."""
    ref = np.asarray(reference(cdf.points), dtype=np.float64)
    right = np.abs(cdf.cumulative - ref)
    left = np.abs(cdf.left_limits() - ref)
    ks = float(max(right.max(), left.max())) if len(ref) else 0.0
    size = n if n is not None else 0
    return KSResult(size, min(ks, 1.0), center, scale, size)


def check_clt_hypotheses(spec: AdditiveFunctionSpec) -> None:
    """Raise HypothesisViolation unless |f(p)| <= 1 and sigma_n -> infinity."""
    name = spec_name(spec)
    if spec.max_abs_prime_value > 1:
        raise HypothesisViolation(f"{name}: |f(p)| <= 1 fails (max |f(p)| = {spec.max_abs_prime_value})")
    if not spec.variance_diverges:
        raise HypothesisViolation(
            f"{name}: {PHI_LOG_DIAGNOSTIC}; sum f(p)/p converges so A_n and sigma_n stay bounded "
            "and no normal limit is claimed"
        )


def theoretical_normalization(spec: AdditiveFunctionSpec, n: int) -> tuple[float, float]:
    """(center, scale) suggested by the limit theorems for this function."""
    if n < MIN_N:
        raise DomainError(f"theoretical normalization needs n >= {MIN_N}, got {n}")
    ll = math.log(math.log(n))
    if spec.kind == "constant_one":  # omega, and Omega which shares its limit law
        return ll, math.sqrt(ll)
    if spec.kind == "signed_difference":
        return 0.0, math.sqrt(0.5 * ll)
    if spec.nonnegative or spec.nonpositive:
        a = exact_mean(spec, n)
        if a == 0:
            raise DegenerateDistributionError(f"A_n = 0 at n={n}")
        return a, math.sqrt(abs(a))
    raise UsageError(f"no theoretical normalization for mixed-sign {spec_name(spec)}")


def erdos_kac_experiment(
    spec: AdditiveFunctionSpec,
    n_grid: Sequence[int],
    normalization: str = EMPIRICAL,
    workers: int | None = None,
) -> list[KSResult]:
    """KS distance between the normalized law of f on [1, n] and Phi, per n."""
    check_clt_hypotheses(spec)
    if normalization not in (THEORETICAL, EMPIRICAL):
        raise UsageError(f"normalization must be {THEORETICAL} or {EMPIRICAL}, got {normalization!r}")
    grid = [int(n) for n in n_grid]
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise UsageError("grid must be ascending")
    name = spec_name(spec)
    out = []
    for n in grid:
        hist = histogram(spec, n, workers=workers)
        if normalization == EMPIRICAL:
            stats = moments_from_histogram(hist, 2)
            if stats.variance <= 0:
                raise DegenerateDistributionError(f"sigma_n = 0 at n={n}")
            center, scale = stats.mean, stats.std
        else:
            center, scale = theoretical_normalization(spec, n)
        res = ks_distance(empirical_cdf(hist, (center, scale)), n=n, center=center, scale=scale)
        out.append(KSResult(n, res.ks_statistic, center, scale, n, normalization, name))
    return out

