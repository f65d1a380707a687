"""Sums of independent two-point random variables indexed by primes.

For a model X_p (p prime) and S_n = sum_{p <= n} X_p this module gives

* per-prime central moments of the two-point law;
* two values for the k-th central moment of S_n: the *per-prime sum*
  sum_p E[(X_p - EX_p)^k], and the *exact* value.  Central moments are
  additive under independence only for k = 2, 3; the exact value for any k is
  obtained by adding cumulants and converting back;
* the exact law of S_n by convolution (small n), used as an oracle;
* seeded Monte Carlo estimates with standard errors.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from .additive import AdditiveFunctionSpec, histogram, spec_name
from .errors import CapacityError, HypothesisViolation, UsageError
from .probspace import DEFAULT_ORDER, moments_from_histogram
from .sieve import default_workers, primes_up_to

BERNOULLI_INV_P = "bernoulli_inv_p"
BERNOULLI_HALF_INV_P = "bernoulli_half_inv_p"
SYMMETRIC_SIGNED = "symmetric_signed"
MODEL_KINDS = (BERNOULLI_INV_P, BERNOULLI_HALF_INV_P, SYMMETRIC_SIGNED)
MODEL_ALIASES = {
    "inv_p": BERNOULLI_INV_P,
    "bernoulli": BERNOULLI_INV_P,
    "half_inv_p": BERNOULLI_HALF_INV_P,
    "half": BERNOULLI_HALF_INV_P,
    "signed": SYMMETRIC_SIGNED,
}

MAX_ATOMS = 1 << 20
MAX_RATIONAL_PRIMES = 256
MERGE_GRID = 1e-12
MC_CHUNK = 1024  # samples per random substream; fixed so results do not depend on threads
MIN_SAMPLES = 1000
CSV_COLUMNS = ("model", "n", "k", "exact_or_leading", "value", "mc_estimate", "mc_stderr", "samples", "seed")


def two_point_central_moment(value_a, prob_a, value_b, prob_b, k: int):
    """E[(X - EX)^k] for X = value_a w.p. prob_a, value_b w.p. prob_b.

    Works in exact arithmetic when given Fractions.
    """
    if k < 1:
        raise UsageError(f"order k must be >= 1, got {k}")
    for q in (prob_a, prob_b):
        if not 0 <= q <= 1:
            raise UsageError(f"probability {q} outside [0, 1]")
    total = prob_a + prob_b
    if (total != 1) if isinstance(total, (int, Fraction)) else abs(total - 1) > 1e-12:
        raise UsageError(f"probabilities sum to {total}, expected 1")
    mean = value_a * prob_a + value_b * prob_b
    return prob_a * (value_a - mean) ** k + prob_b * (value_b - mean) ** k


@dataclass(frozen=True)
class TwoPointModel:
    kind: str

    def __post_init__(self):
        kind = MODEL_ALIASES.get(self.kind, self.kind)
        if kind not in MODEL_KINDS:
            raise UsageError(f"unknown model {self.kind!r}; expected one of {', '.join(MODEL_KINDS)}")
        object.__setattr__(self, "kind", kind)

    @property
    def is_bernoulli(self) -> bool:
        return self.kind != SYMMETRIC_SIGNED

    def law(self, p: int) -> tuple[float, float, float, float]:
        """(value_a, prob_a, value_b, prob_b) of X_p."""
        if self.kind == BERNOULLI_INV_P:
            return 1.0, 1.0 / p, 0.0, 1.0 - 1.0 / p
        if self.kind == BERNOULLI_HALF_INV_P:
            return 1.0, 1.0 / (2 * p), 0.0, 1.0 - 1.0 / (2 * p)
        w = 1.0 / math.sqrt(2 * p)
        return w, 0.5, -w, 0.5

    def exact_law(self, p: int) -> tuple:
        """Rational law for the Bernoulli models."""
        if not self.is_bernoulli:
            raise UsageError("symmetric_signed takes irrational values; no rational law")
        q = Fraction(1, p) if self.kind == BERNOULLI_INV_P else Fraction(1, 2 * p)
        return 1, q, 0, 1 - q

    def success_probs(self, primes: np.ndarray) -> np.ndarray:
        p = primes.astype(np.float64)
        return 1.0 / p if self.kind == BERNOULLI_INV_P else 1.0 / (2.0 * p)

    def prime_central_moments(self, primes: np.ndarray, k: int) -> np.ndarray:
        """E[(X_p - EX_p)^k] for every p in ``primes``."""
        if self.is_bernoulli:
            q = self.success_probs(primes)
            return q * (1.0 - q) ** k + (1.0 - q) * (-q) ** k
        if k % 2:
            return np.zeros(len(primes))
        return (1.0 / (2.0 * primes.astype(np.float64))) ** (k // 2)

    def prime_means(self, primes: np.ndarray) -> np.ndarray:
        if self.is_bernoulli:
            return self.success_probs(primes)
        return np.zeros(len(primes))


def _cumulants_from_central(mu: dict[int, np.ndarray], K: int, size: int) -> dict[int, np.ndarray]:
    """Cumulants of orders 2..K of a centered variable from its central moments."""
    m = {0: np.ones(size), 1: np.zeros(size), **mu}
    kappa = {1: np.zeros(size)}
    for j in range(2, K + 1):
        acc = m[j].copy()
        for i in range(1, j):
            acc -= comb(j - 1, i - 1) * kappa[i] * m[j - i]
        kappa[j] = acc
    return kappa


def _central_from_cumulants(kappa: dict[int, float], K: int) -> dict[int, float]:
    m = {0: 1.0, 1: 0.0}
    for j in range(2, K + 1):
        m[j] = math.fsum(comb(j - 1, i - 1) * kappa[i] * m[j - i] for i in range(2, j + 1))
    return m


@dataclass(frozen=True)
class ModelMoment:
    n: int
    k: int
    exact: float
    per_prime_sum: float

    @property
    def additive(self) -> bool:
        """Whether the per-prime sum is itself the exact moment (k <= 3)."""
        return self.k <= 3


def _primes(n: int) -> np.ndarray:
    if n < 0:
        raise UsageError(f"n must be >= 0, got {n}")
    return primes_up_to(n).primes


def model_mean(model: TwoPointModel, n: int) -> float:
    return math.fsum(model.prime_means(_primes(n)).tolist())


def model_moments(model: TwoPointModel, n: int, K: int = DEFAULT_ORDER) -> dict[int, ModelMoment]:
    """ModelMoment for k = 2..K."""
    if K < 2:
        raise UsageError(f"moment order must be >= 2, got {K}")
    primes = _primes(n)
    mu = {j: model.prime_central_moments(primes, j) for j in range(2, K + 1)}
    kappa_p = _cumulants_from_central(mu, K, len(primes))
    kappa = {j: math.fsum(kappa_p[j].tolist()) for j in range(1, K + 1)}
    exact = _central_from_cumulants(kappa, K)
    return {k: ModelMoment(n, k, exact[k], math.fsum(mu[k].tolist())) for k in range(2, K + 1)}


def model_central_moment_sum(model: TwoPointModel, n: int, k: int) -> ModelMoment:
    """k-th central moment of S_n: exact value plus the per-prime sum."""
    if k < 2:
        raise UsageError(f"order k must be >= 2, got {k}")
    return model_moments(model, n, k)[k]


def leading_asymptote(model: TwoPointModel, n: int, k: int) -> float | None:
    """Leading asymptote of the k-th central moment (k = 1: the mean), or None when it is O(1)."""
    ll = math.log(math.log(n)) if n >= 3 else float("nan")
    if model.kind == BERNOULLI_INV_P:
        return ll
    if model.kind == BERNOULLI_HALF_INV_P:
        return 0.5 * ll
    if k % 2 == 1:
        return 0.0
    return 0.5 * ll if k == 2 else None


# -- exact law by convolution -------------------------------------------------


@dataclass(frozen=True, eq=False)
class ExactDistribution:
    """Law of S_n as parallel lists of support points and probabilities."""

    values: list
    probs: list

    def total(self):
        return sum(self.probs) if isinstance(self.probs[0], Fraction) else math.fsum(self.probs)

    def mean(self):
        if isinstance(self.probs[0], Fraction):
            return sum(v * q for v, q in zip(self.values, self.probs))
        return math.fsum(v * q for v, q in zip(self.values, self.probs))

    def central_moment(self, k: int):
        mu = self.mean()
        if isinstance(self.probs[0], Fraction):
            return sum((v - mu) ** k * q for v, q in zip(self.values, self.probs))
        return math.fsum((v - mu) ** k * q for v, q in zip(self.values, self.probs))


def exact_distribution(model: TwoPointModel, n: int, max_atoms: int = MAX_ATOMS) -> ExactDistribution:
    """Convolve the per-prime laws over p <= n.

    Bernoulli models are convolved in rational arithmetic; symmetric_signed
    merges equal sums on a grid of width 1e-12.
    """
    primes = _primes(n).tolist()
    if model.is_bernoulli:
        if len(primes) > MAX_RATIONAL_PRIMES or len(primes) + 1 > max_atoms:
            raise CapacityError(
                f"rational convolution over {len(primes)} primes exceeds the budget of {MAX_RATIONAL_PRIMES} primes"
            )
        probs = [Fraction(1)]
        for p in primes:
            _, q, _, r = model.exact_law(p)
            nxt = [Fraction(0)] * (len(probs) + 1)
            for j, w in enumerate(probs):
                nxt[j] += w * r
                nxt[j + 1] += w * q
            probs = nxt
        return ExactDistribution(list(range(len(probs))), probs)
    if 2 ** len(primes) > max_atoms:
        raise CapacityError(f"2^{len(primes)} atoms exceed the convolution budget of {max_atoms} atoms")
    atoms: dict[int, list] = {0: [0.0, 1.0]}
    for p in primes:
        a, pa, b, pb = model.law(p)
        nxt: dict[int, list] = {}
        for val, prob in atoms.values():
            for step, q in ((a, pa), (b, pb)):
                v = val + step
                key = round(v / MERGE_GRID)
                if key in nxt:
                    nxt[key][1] += prob * q
                else:
                    nxt[key] = [v, prob * q]
        atoms = nxt
    items = sorted(atoms.values())
    return ExactDistribution([v for v, _ in items], [q for _, q in items])


# -- Monte Carlo ------------------------------------------------------------


@dataclass(frozen=True)
class ModelMomentReport:
    model: str
    n: int
    k: int
    exact_central_moment: float
    per_prime_sum: float
    matched_asymptote: float | None
    monte_carlo_estimate: float
    standard_error: float
    samples: int
    seed: int

    @property
    def z_score(self) -> float:
        if self.standard_error == 0:
            return 0.0 if self.monte_carlo_estimate == self.exact_central_moment else math.inf
        return (self.monte_carlo_estimate - self.exact_central_moment) / self.standard_error

    def rows(self) -> list[dict]:
        base = {"model": self.model, "n": self.n, "k": self.k, "mc_estimate": self.monte_carlo_estimate,
                "mc_stderr": self.standard_error, "samples": self.samples, "seed": self.seed}
        out = [{**base, "exact_or_leading": "exact", "value": self.exact_central_moment}]
        if self.k >= 4:
            out.append({**base, "exact_or_leading": "leading", "value": self.per_prime_sum})
        return [{c: r[c] for c in CSV_COLUMNS} for r in out]


@dataclass(frozen=True)
class MonteCarloResult:
    model: str
    n: int
    samples: int
    seed: int
    exact_mean: float
    mean: float
    mean_stderr: float
    reports: list[ModelMomentReport] = field(default_factory=list)

    def report(self, k: int) -> ModelMomentReport:
        return next(r for r in self.reports if r.k == k)


def _substream(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(chunk,))))


class _BernoulliSampler:
    """S = #{p : N_p >= 1} with independent N_p ~ Poisson(-ln(1 - q_p)), so
    P(N_p >= 1) = q_p exactly.  The superposed Poisson points are drawn in one
    go and assigned to primes by inverse CDF."""

    def __init__(self, model: TwoPointModel, primes: np.ndarray):
        rates = -np.log1p(-model.success_probs(primes))
        self.total_rate = float(rates.sum())
        cum = np.cumsum(rates) / self.total_rate if len(rates) else np.zeros(0)
        if len(cum):
            cum[-1] = 1.0
        self.cum = cum
        self.size = len(primes)

    def __call__(self, gen: np.random.Generator, count: int) -> np.ndarray:
        if self.size == 0:
            return np.zeros(count)
        points = gen.poisson(self.total_rate, size=count)
        owner = np.repeat(np.arange(count, dtype=np.int64), points)
        which = np.searchsorted(self.cum, gen.random(int(points.sum())), side="right")
        keys = np.unique(owner * self.size + which)
        return np.bincount(keys // self.size, minlength=count).astype(np.float64)


class _SignedSampler:
    """Sum of +-w_p with fair signs: one random byte decides 8 signs, looked up in
    a table of the 256 partial sums of each group of 8 primes."""

    COLUMN_BLOCK = 2048

    def __init__(self, primes: np.ndarray):
        w = 1.0 / np.sqrt(2.0 * primes.astype(np.float64))
        groups = -(-len(w) // 8)
        w = np.concatenate([w, np.zeros(groups * 8 - len(w))]).reshape(groups, 8)
        bits = (np.arange(256)[:, None] >> np.arange(8)[None, :]) & 1  # (256, 8)
        signs = 2.0 * bits - 1.0
        self.table = w @ signs.T  # (groups, 256)
        self.groups = groups

    def __call__(self, gen: np.random.Generator, count: int) -> np.ndarray:
        if self.groups == 0:
            return np.zeros(count)
        draws = gen.integers(0, 256, size=(count, self.groups), dtype=np.uint8)
        total = np.zeros(count)
        for lo in range(0, self.groups, self.COLUMN_BLOCK):
            hi = min(lo + self.COLUMN_BLOCK, self.groups)
            cols = np.arange(lo, hi)
            total += self.table[cols[None, :], draws[:, lo:hi]].sum(axis=1)
        return total


def sample_sums(model: TwoPointModel, n: int, samples: int, seed: int, workers: int | None = None) -> np.ndarray:
    """Independent draws of S_n, reproducible from (seed, samples, n) for any thread count."""
    if samples < 1:
        raise UsageError("samples must be >= 1")
    primes = _primes(n)
    sampler = _BernoulliSampler(model, primes) if model.is_bernoulli else _SignedSampler(primes)
    chunks = [(i, min(MC_CHUNK, samples - i * MC_CHUNK)) for i in range(-(-samples // MC_CHUNK))]

    def work(chunk: tuple[int, int]) -> np.ndarray:
        return sampler(_substream(seed, chunk[0]), chunk[1])

    workers = default_workers() if workers is None else max(1, workers)
    if workers == 1:
        parts = [work(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, chunks))
    return np.concatenate(parts)


def _moment_stderr(mu: dict[int, float], k: int, size: int) -> float:
    """Delta-method standard error of the sample k-th central moment."""
    var = mu[2 * k] - mu[k] ** 2 - 2 * k * mu[k - 1] * mu[k + 1] + k * k * mu[2] * mu[k - 1] ** 2
    return math.sqrt(max(var, 0.0) / size)


def monte_carlo(
    model: TwoPointModel,
    n: int,
    samples: int,
    seed: int,
    K: int = DEFAULT_ORDER,
    workers: int | None = None,
) -> MonteCarloResult:
    if samples < MIN_SAMPLES:
        raise UsageError(f"Monte Carlo needs at least {MIN_SAMPLES} samples, got {samples}")
    if K < 2:
        raise UsageError(f"moment order must be >= 2, got {K}")
    draws = sample_sums(model, n, samples, seed, workers)
    mean = math.fsum(draws.tolist()) / samples
    dev = draws - mean
    mu = {0: 1.0, 1: 0.0}
    power = np.ones(samples)
    for j in range(1, 2 * K + 1):
        power = power * dev
        if j >= 2:
            mu[j] = math.fsum(power.tolist()) / samples
    exact = model_moments(model, n, K)
    reports = [
        ModelMomentReport(model.kind, n, k, exact[k].exact, exact[k].per_prime_sum, leading_asymptote(model, n, k),
                          mu[k], _moment_stderr(mu, k, samples), samples, seed)
        for k in range(2, K + 1)
    ]
    return MonteCarloResult(model.kind, n, samples, seed, model_mean(model, n), mean,
                            math.sqrt(mu[2] / samples), reports)


# -- arithmetic function vs model -------------------------------------------


def sanctioned_model(spec: AdditiveFunctionSpec) -> str | None:
    """The model kind whose sum shares this function's mean/variance asymptotics."""
    k = spec.kind
    if k in ("constant_one", "excluded_primes", "scaled_primes"):
        return BERNOULLI_INV_P
    if k == "residue_class" and spec.modulus == 4 and spec.residue in (1, 3) and spec.weight == 1:
        return BERNOULLI_HALF_INV_P
    if k == "parity_indexed" and spec.value == 1:
        return BERNOULLI_HALF_INV_P
    if k == "signed_difference":
        return SYMMETRIC_SIGNED
    return None


@dataclass(frozen=True)
class MatchRow:
    k: int
    arithmetic: float
    model_exact: float
    model_per_prime_sum: float
    asymptote: float | None

    @property
    def discrepancy(self) -> float:
        return self.arithmetic - self.model_exact

    def row(self) -> dict:
        return {"k": self.k, "arithmetic": self.arithmetic, "model_exact": self.model_exact,
                "model_per_prime_sum": self.model_per_prime_sum, "asymptote": self.asymptote,
                "discrepancy": self.discrepancy}


@dataclass(frozen=True)
class MatchReport:
    spec: str
    model: str
    n: int
    rows: list[MatchRow]

    def order(self, k: int) -> MatchRow:
        return next(r for r in self.rows if r.k == k)


def match_report(
    spec: AdditiveFunctionSpec,
    model: TwoPointModel,
    n: int,
    K: int = DEFAULT_ORDER,
    workers: int | None = None,
) -> MatchReport:
    """Per order k <= K: empirical moment of f on [1, n] vs model moment vs asymptote.

    Row k = 1 compares means; rows k >= 2 compare central moments.
    """
    expected = sanctioned_model(spec)
    if expected is None or expected != model.kind:
        hint = f"; use {expected}" if expected else ""
        raise HypothesisViolation(
            f"({spec_name(spec)}, {model.kind}) is not a matched pair: the model sum must share the "
            f"function's mean and variance asymptotics{hint}"
        )
    stats = moments_from_histogram(histogram(spec, n, workers=workers), K)
    moments = model_moments(model, n, K)
    mean = model_mean(model, n)
    rows = [MatchRow(1, stats.mean, mean, mean, leading_asymptote(model, n, 1))]
    for k in range(2, K + 1):
        rows.append(MatchRow(k, stats.central_moments[k], moments[k].exact, moments[k].per_prime_sum,
                             leading_asymptote(model, n, k)))
    return MatchReport(spec_name(spec), model.kind, n, rows)
