"""Strongly additive arithmetic functions and their value histograms on [1, n].

A strongly additive function is fixed by its values on primes,
f(m) = sum of f(p) over the distinct primes p dividing m.  The one exception
supported here is Omega (``multiplicity_mode="with_multiplicity"``), which
counts prime factors with multiplicity.

Primes are numbered from 1 (p_1 = 2, p_2 = 3, ...) for the parity-indexed
functions.  The prime 2 belongs to neither residue class 1 mod 4 nor 3 mod 4.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Mapping

import numpy as np

from .errors import InvalidBinningError, UsageError
from .sieve import DEFAULT_BLOCK_SIZE, FactorBlock, FunctionConsumer, factorize, prime_count, primes_up_to, sieve_blocks

KINDS = (
    "constant_one",
    "excluded_primes",
    "scaled_primes",
    "residue_class",
    "parity_indexed",
    "phi_log",
    "signed_difference",
)
DISTINCT = "distinct"
WITH_MULTIPLICITY = "with_multiplicity"
EXACT_INTEGER = "exact_integer"
FIXED_WIDTH = "fixed_width"
DEFAULT_WIDTH = 1e-3
BIN_MOMENT_ORDER = 8


def _is_int(x: float) -> bool:
    return float(x).is_integer()


@dataclass(frozen=True)
class AdditiveFunctionSpec:
    kind: str
    multiplicity_mode: str = DISTINCT
    primes: tuple[int, ...] = ()
    values: tuple[float, ...] = ()
    modulus: int = 0
    residue: int = 0
    weight: float = 1
    selector: str = ""
    value: float = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise UsageError(f"unknown kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        if self.multiplicity_mode not in (DISTINCT, WITH_MULTIPLICITY):
            raise UsageError(f"unknown multiplicity_mode {self.multiplicity_mode!r}")
        if self.multiplicity_mode == WITH_MULTIPLICITY and self.kind != "constant_one":
            raise UsageError("with_multiplicity is only defined for kind constant_one (Omega)")
        object.__setattr__(self, "primes", tuple(int(p) for p in self.primes))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        for p in self.primes:
            if p < 2 or factorize(p) != [(p, 1)]:
                raise UsageError(f"{p} is not a prime")
        if self.kind == "scaled_primes":
            if len(self.values) != len(self.primes):
                raise UsageError("scaled_primes needs one value per prime")
            if len(set(self.primes)) != len(self.primes):
                raise UsageError("scaled_primes lists a prime twice")
            if any(not 0 < v < 1 for v in self.values):
                raise UsageError("scaled_primes values must lie strictly inside (0, 1)")
        if self.kind == "residue_class":
            if self.modulus < 1:
                raise UsageError("residue_class needs modulus >= 1")
            object.__setattr__(self, "residue", self.residue % self.modulus)
        if self.kind == "parity_indexed" and self.selector not in ("even_index", "odd_index"):
            raise UsageError("parity_indexed selector must be even_index or odd_index")

    # -- classification -------------------------------------------------

    @property
    def strongly_additive(self) -> bool:
        return self.multiplicity_mode == DISTINCT

    @property
    def integer_valued(self) -> bool:
        if self.kind in ("constant_one", "excluded_primes", "signed_difference"):
            return True
        if self.kind == "residue_class":
            return _is_int(self.weight)
        if self.kind == "parity_indexed":
            return _is_int(self.value)
        return False

    @property
    def needs_prime_index(self) -> bool:
        return self.kind == "parity_indexed"

    @property
    def _nonzero_on_divergent_set(self) -> bool:
        """f(p) != 0 on a set of primes whose reciprocals diverge."""
        if self.kind in ("constant_one", "excluded_primes", "scaled_primes", "signed_difference"):
            return True
        if self.kind == "residue_class":
            return self.weight != 0 and math.gcd(self.residue, self.modulus) == 1
        if self.kind == "parity_indexed":
            return self.value != 0
        return False  # phi_log: f(p) ~ 1/p

    @property
    def mean_diverges(self) -> bool:
        """Whether sum f(p)/p diverges, i.e. A_n is unbounded."""
        return self.kind != "signed_difference" and self._nonzero_on_divergent_set

    @property
    def variance_diverges(self) -> bool:
        """Whether sum f(p)^2/p diverges, i.e. sigma_n is unbounded."""
        return self._nonzero_on_divergent_set

    @property
    def max_abs_prime_value(self) -> float:
        if self.kind == "residue_class":
            return abs(self.weight)
        if self.kind == "parity_indexed":
            return abs(self.value)
        if self.kind == "phi_log":
            return math.log(2)
        return 1.0

    @property
    def nonnegative(self) -> bool:
        if self.kind == "residue_class":
            return self.weight >= 0
        if self.kind == "parity_indexed":
            return self.value >= 0
        return self.kind != "signed_difference"

    @property
    def nonpositive(self) -> bool:
        if self.kind == "residue_class":
            return self.weight <= 0
        if self.kind == "parity_indexed":
            return self.value <= 0
        return False

    # -- values on primes -------------------------------------------------

    def prime_values(self, primes: np.ndarray, index: np.ndarray | None = None) -> np.ndarray:
        """f(p) for an array of primes; ``index`` (1-based) is needed for parity_indexed."""
        primes = np.asarray(primes, dtype=np.int64)
        dtype = np.int64 if self.integer_valued else np.float64
        k = self.kind
        if k == "constant_one":
            return np.ones(len(primes), dtype=dtype)
        if k == "excluded_primes":
            return (~np.isin(primes, self.primes)).astype(dtype)
        if k == "scaled_primes":
            out = np.ones(len(primes), dtype=dtype)
            for p, v in zip(self.primes, self.values):
                out[primes == p] = v
            return out
        if k == "residue_class":
            hit = primes % self.modulus == self.residue
            return (hit * self.weight).astype(dtype)
        if k == "parity_indexed":
            if index is None:
                raise UsageError("parity_indexed values need the prime index")
            want = 0 if self.selector == "even_index" else 1
            hit = np.asarray(index) % 2 == want
            return (hit * self.value).astype(dtype)
        if k == "phi_log":
            return -np.log1p(-1.0 / primes.astype(np.float64))
        # signed_difference: omega_1 - omega_2
        r = primes % 4
        return (r == 1).astype(dtype) - (r == 3).astype(dtype)

    def value_at_prime(self, p: int) -> float:
        index = np.array([prime_count(p)]) if self.needs_prime_index else None
        v = self.prime_values(np.array([p]), index)[0]
        return int(v) if self.integer_valued else float(v)

    # -- text serialization ----------------------------------------------

    def to_text(self) -> str:
        """Canonical ``key=value`` form, see :func:`parse_spec`."""
        parts = [f"kind={self.kind}"]
        k = self.kind
        if k in ("excluded_primes", "scaled_primes"):
            parts.append("primes=" + ",".join(str(p) for p in self.primes))
        if k == "scaled_primes":
            parts.append("values=" + ",".join(repr(v) for v in self.values))
        if k == "residue_class":
            parts += [f"modulus={self.modulus}", f"residue={self.residue}", f"weight={_num(self.weight)}"]
        if k == "parity_indexed":
            parts += [f"selector={self.selector}", f"value={_num(self.value)}"]
        parts.append(f"mode={self.multiplicity_mode}")
        return " ".join(parts)


def _num(x: float) -> str:
    return str(int(x)) if _is_int(x) else repr(float(x))


_KEYS = {"kind", "mode", "multiplicity_mode", "primes", "values", "modulus", "residue", "weight", "selector", "value"}


def parse_spec(text: str) -> AdditiveFunctionSpec:
    """Parse the ``key=value`` spec format, or a named alias such as ``omega``.

    Pairs are separated by whitespace, ``;`` or newlines; ``#`` starts a
    comment.  Lists are comma separated.  Example::

        kind=residue_class modulus=4 residue=1 weight=1 mode=distinct
    """
    stripped = text.strip()
    if stripped in NAMED_SPECS:
        return NAMED_SPECS[stripped]
    fields: dict[str, str] = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        for token in line.replace(";", " ").split():
            if "=" not in token:
                raise UsageError(f"expected key=value, got {token!r}")
            key, val = token.split("=", 1)
            if key not in _KEYS:
                raise UsageError(f"unknown spec key {key!r}")
            fields[key] = val
    if "kind" not in fields:
        raise UsageError(f"spec {text!r} has no kind (or named alias: {', '.join(NAMED_SPECS)})")
    kw: dict = {"kind": fields["kind"]}
    mode = fields.get("mode", fields.get("multiplicity_mode"))
    if mode:
        kw["multiplicity_mode"] = mode
    try:
        if "primes" in fields:
            kw["primes"] = tuple(int(x) for x in fields["primes"].split(",") if x)
        if "values" in fields:
            kw["values"] = tuple(float(x) for x in fields["values"].split(",") if x)
        for key in ("modulus", "residue"):
            if key in fields:
                kw[key] = int(fields[key])
        for key in ("weight", "value"):
            if key in fields:
                kw[key] = float(fields[key])
    except ValueError as exc:
        raise UsageError(f"bad number in spec {text!r}: {exc}") from None
    if "selector" in fields:
        kw["selector"] = fields["selector"]
    return AdditiveFunctionSpec(**kw)


def omega() -> AdditiveFunctionSpec:
    return AdditiveFunctionSpec("constant_one")


def big_omega() -> AdditiveFunctionSpec:
    return AdditiveFunctionSpec("constant_one", WITH_MULTIPLICITY)


def residue_class(modulus: int, residue: int, weight: float = 1) -> AdditiveFunctionSpec:
    return AdditiveFunctionSpec("residue_class", modulus=modulus, residue=residue, weight=weight)


def excluded_primes(*primes: int) -> AdditiveFunctionSpec:
    return AdditiveFunctionSpec("excluded_primes", primes=primes)


def scaled_primes(values: Mapping[int, float]) -> AdditiveFunctionSpec:
    items = sorted(values.items())
    return AdditiveFunctionSpec("scaled_primes", primes=tuple(p for p, _ in items), values=tuple(v for _, v in items))


def parity_indexed(selector: str, value: float = 1) -> AdditiveFunctionSpec:
    return AdditiveFunctionSpec("parity_indexed", selector=selector, value=value)


NAMED_SPECS: dict[str, AdditiveFunctionSpec] = {
    "omega": omega(),
    "Omega": big_omega(),
    "big_omega": big_omega(),
    "omega1": residue_class(4, 1),
    "omega2": residue_class(4, 3),
    "omega_diff": AdditiveFunctionSpec("signed_difference"),
    "signed_difference": AdditiveFunctionSpec("signed_difference"),
    "phi_log": AdditiveFunctionSpec("phi_log"),
    "f4": parity_indexed("even_index", 1),
    "f5": parity_indexed("odd_index", -1),
}


def spec_name(spec: AdditiveFunctionSpec) -> str:
    for name, known in NAMED_SPECS.items():
        if known == spec:
            return name
    return spec.to_text()


# -- pointwise evaluation -------------------------------------------------


def eval_at(spec: AdditiveFunctionSpec, m: int) -> float:
    """f(m) by trial-division factorization."""
    if m < 1:
        raise UsageError(f"m must be >= 1, got {m}")
    factors = factorize(m)
    if spec.multiplicity_mode == WITH_MULTIPLICITY:
        return sum(a for _, a in factors)
    if not factors:
        return 0 if spec.integer_valued else 0.0
    vals = [spec.value_at_prime(p) for p, _ in factors]
    return sum(vals) if spec.integer_valued else math.fsum(vals)


# -- histograms -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ValueHistogram:
    """Counts of f(m) over m in [1, n].

    For ``fixed_width`` binning, ``values`` holds the centroid of each bin
    (sum of the values falling in it divided by its count), so the mean read
    off the histogram is exact.  ``bin_central[i, j]`` is the sum of
    (v - centroid_i)^j over the values in bin i, which lets central moments
    up to order BIN_MOMENT_ORDER be recovered exactly.  Deviation counts and
    CDFs treat each bin as an atom at its centroid.
    """

    n: int
    values: np.ndarray
    counts: np.ndarray
    binning: str = EXACT_INTEGER
    width: float | None = None
    sums: np.ndarray | None = field(default=None, repr=False)
    bin_central: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if int(self.counts.sum()) != self.n:
            raise UsageError(f"histogram counts sum to {int(self.counts.sum())}, expected n={self.n}")

    @classmethod
    def from_counts(cls, bins: Mapping[float, int]) -> "ValueHistogram":
        keys = sorted(bins)
        integer = all(_is_int(k) for k in keys)
        dtype = np.int64 if integer else np.float64
        values = np.array(keys, dtype=dtype)
        counts = np.array([bins[k] for k in keys], dtype=np.int64)
        return cls(int(counts.sum()), values, counts, EXACT_INTEGER if integer else FIXED_WIDTH)

    @property
    def bins(self) -> dict:
        vals = self.values.tolist()
        return dict(zip(vals, self.counts.tolist()))

    @property
    def is_integer(self) -> bool:
        return self.values.dtype.kind in "iu"

    def value_sum(self) -> float | int:
        if self.sums is not None:
            return math.fsum(self.sums.tolist())
        if self.is_integer:
            return sum(int(v) * int(c) for v, c in zip(self.values.tolist(), self.counts.tolist()))
        return math.fsum((self.values * self.counts).tolist())

    def mean(self) -> float:
        total = self.value_sum()
        return total / self.n


def _block_values(spec: AdditiveFunctionSpec, block: FactorBlock) -> np.ndarray:
    if spec.multiplicity_mode == WITH_MULTIPLICITY:
        return block.multiplicity_count.astype(np.int64)
    if spec.kind == "constant_one":
        return block.distinct_count.astype(np.int64)
    return block.weighted


def _prime_weight(spec: AdditiveFunctionSpec, n: int):
    if spec.kind == "constant_one":
        return None
    if spec.needs_prime_index:
        table = primes_up_to(n)
        return lambda ps: spec.prime_values(ps, table.index_of(ps))
    return spec.prime_values


def histogram(
    spec: AdditiveFunctionSpec,
    n: int,
    binning: str | None = None,
    width: float = DEFAULT_WIDTH,
    block_size: int = DEFAULT_BLOCK_SIZE,
    workers: int | None = None,
) -> ValueHistogram:
    """Exact value counts of f over [1, n], streamed through the block sieve."""
    if n < 1:
        raise UsageError(f"n must be >= 1, got {n}")
    if binning is None:
        binning = EXACT_INTEGER if spec.integer_valued else FIXED_WIDTH
    if binning == EXACT_INTEGER:
        if not (spec.integer_valued or spec.multiplicity_mode == WITH_MULTIPLICITY):
            raise InvalidBinningError(f"{spec_name(spec)} is real-valued; use fixed_width binning")

        def process(block: FactorBlock) -> Counter:
            vals, counts = np.unique(_block_values(spec, block), return_counts=True)
            return Counter(dict(zip(vals.tolist(), counts.tolist())))

        def merge(a: Counter, b: Counter) -> Counter:
            a.update(b)
            return a

        acc = sieve_blocks(n, FunctionConsumer(Counter, process, merge), block_size,
                           prime_weight=_prime_weight(spec, n), workers=workers)
        keys = sorted(k for k, c in acc.items() if c)
        return ValueHistogram(n, np.array(keys, dtype=np.int64),
                              np.array([acc[k] for k in keys], dtype=np.int64), EXACT_INTEGER)

    if binning != FIXED_WIDTH:
        raise InvalidBinningError(f"unknown binning {binning!r}")
    if not width > 0:
        raise InvalidBinningError(f"bin width must be > 0, got {width}")

    def process_fw(block: FactorBlock) -> _BinStats:
        v = _block_values(spec, block).astype(np.float64)
        keys, inverse, counts = np.unique(np.floor(v / width).astype(np.int64), return_inverse=True, return_counts=True)
        sums = np.bincount(inverse, weights=v, minlength=len(keys))
        dev = v - (sums / counts)[inverse]
        power = np.ones_like(dev)
        central = np.zeros((len(keys), BIN_MOMENT_ORDER + 1))
        central[:, 0] = counts
        for j in range(1, BIN_MOMENT_ORDER + 1):
            power = power * dev
            if j >= 2:
                central[:, j] = np.bincount(inverse, weights=power, minlength=len(keys))
        return _BinStats(keys, counts.astype(np.int64), sums, central)

    acc = sieve_blocks(n, FunctionConsumer(_BinStats.empty, process_fw, _BinStats.merge), block_size,
                       prime_weight=_prime_weight(spec, n), workers=workers)
    return ValueHistogram(n, acc.sums / acc.counts, acc.counts, FIXED_WIDTH, width, acc.sums, acc.central)


def shift_central(central: np.ndarray, delta: np.ndarray) -> np.ndarray:
    """Central power sums about a point shifted by ``delta`` from each group mean.

    sum (x - c)^p = sum_j C(p, j) M_j (mean - c)^(p - j), with M_0 = count and M_1 = 0.
    """
    out = np.zeros_like(central)
    out[:, 0] = central[:, 0]
    for p in range(2, central.shape[1]):
        acc = np.zeros(len(central))
        for j in range(0, p + 1):
            if j == 1:
                continue
            acc += math.comb(p, j) * central[:, j] * delta ** (p - j)
        out[:, p] = acc
    return out


@dataclass
class _BinStats:
    """Per-bin count, value sum and central power sums (orders 0..BIN_MOMENT_ORDER)."""

    keys: np.ndarray
    counts: np.ndarray
    sums: np.ndarray
    central: np.ndarray

    @classmethod
    def empty(cls) -> "_BinStats":
        return cls(np.zeros(0, np.int64), np.zeros(0, np.int64), np.zeros(0), np.zeros((0, BIN_MOMENT_ORDER + 1)))

    def merge(self, other: "_BinStats") -> "_BinStats":
        keys = np.union1d(self.keys, other.keys)
        counts = np.zeros(len(keys), np.int64)
        sums = np.zeros(len(keys))
        ia = np.searchsorted(keys, self.keys)
        ib = np.searchsorted(keys, other.keys)
        counts[ia] += self.counts
        counts[ib] += other.counts
        sums[ia] += self.sums
        sums[ib] += other.sums
        mean = sums / np.maximum(counts, 1)
        central = np.zeros((len(keys), BIN_MOMENT_ORDER + 1))
        for idx, part in ((ia, self), (ib, other)):
            if len(idx):
                central[idx] += shift_central(part.central, part.sums / part.counts - mean[idx])
        return _BinStats(keys, counts, sums, central)


# -- means via the prime-sum identity ---------------------------------------


@lru_cache(maxsize=8)
def _table(n: int):
    return primes_up_to(n)


def _prime_data(spec: AdditiveFunctionSpec, n: int) -> tuple[np.ndarray, np.ndarray]:
    primes = _table(n).primes
    idx = np.arange(1, len(primes) + 1) if spec.needs_prime_index else None
    return primes, spec.prime_values(primes, idx)


def exact_mean(spec: AdditiveFunctionSpec, n: int) -> float:
    """A_n = sum_{p<=n} f(p) floor(n/p) / n, without enumerating m."""
    if n < 1:
        raise UsageError(f"n must be >= 1, got {n}")
    if not spec.strongly_additive:
        raise UsageError("exact_mean needs a strongly additive spec; the prime-sum identity fails for Omega")
    primes, f = _prime_data(spec, n)
    floors = n // primes
    if spec.integer_valued:
        return int(np.dot(f, floors)) / n
    return math.fsum((f * floors).tolist()) / n


def mean_asymptote(spec: AdditiveFunctionSpec, n: int) -> float:
    """sum_{p<=n} f(p)/p."""
    if not spec.strongly_additive:
        spec = replace(spec, multiplicity_mode=DISTINCT)
    primes, f = _prime_data(spec, n)
    return math.fsum((f / primes).tolist())
