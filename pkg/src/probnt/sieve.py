"""Segmented prime sieves and block factorization data over [1, n].

Two sieves live here:

* an odd-only segmented Eratosthenes sieve used for listing and counting
  primes (``primes_up_to``, ``prime_count``, ``prime_counts_at``);
* a block sieve over every integer of [1, n] that produces, per block, the
  number of distinct prime divisors, the number with multiplicity, the part of
  each m not divisible by any base prime (``cofactor``) and, on demand, the
  smallest prime factor.

Memory is O(block) apart from the base primes up to sqrt(n), so n up to 1e9 is
reachable without allocating O(n) bytes.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Generic, Iterator, Protocol, Sequence, TypeVar

import numpy as np

from .errors import CapacityError, UsageError

DEFAULT_BLOCK_SIZE = 1 << 18
DEFAULT_SEGMENT_ODDS = 1 << 18
MEMORY_BUDGET = 1 << 30  # bytes allowed for a materialized prime list
THREADS_ENV = "PROBNT_THREADS"

T = TypeVar("T")
PrimeWeight = Callable[[np.ndarray], np.ndarray]


def default_workers() -> int:
    """Thread budget from ``$PROBNT_THREADS`` (default 1)."""
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        workers = int(raw)
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    return max(1, workers)


def _small_sieve(limit: int) -> np.ndarray:
    """Plain Eratosthenes for the base primes (limit is at most ~sqrt(n))."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def _odd_segments(bound: int, segment_odds: int = DEFAULT_SEGMENT_ODDS) -> Iterator[tuple[int, np.ndarray]]:
    """Yield ``(lo, mask)`` with ``mask[i]`` true iff ``lo + 2*i`` is an odd prime <= bound."""
    if bound < 3:
        return
    base = _small_sieve(math.isqrt(bound))[1:]  # odd base primes
    lo = 3
    span = 2 * segment_odds
    while lo <= bound:
        hi = min(lo + span - 1, bound)  # inclusive
        size = (hi - lo) // 2 + 1
        mask = np.ones(size, dtype=bool)
        for p in base:
            p = int(p)
            sq = p * p
            if sq > hi:
                break
            start = max(sq, ((lo + p - 1) // p) * p)
            if start % 2 == 0:
                start += p
            if start > hi:
                continue
            mask[(start - lo) // 2 :: p] = False
        yield lo, mask
        lo += span


@dataclass(frozen=True, eq=False)
class PrimeTable:
    """All primes <= ``bound`` in ascending order."""

    bound: int
    primes: np.ndarray

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self):
        return iter(self.primes.tolist())

    @property
    def count(self) -> int:
        return len(self.primes)

    def up_to(self, x: int) -> np.ndarray:
        """Primes <= x (x may not exceed ``bound``)."""
        if x > self.bound:
            raise UsageError(f"table only covers primes <= {self.bound}, asked for {x}")
        return self.primes[: np.searchsorted(self.primes, x, side="right")]

    def index_of(self, values: np.ndarray) -> np.ndarray:
        """1-based position of each prime in the sequence 2, 3, 5, ..."""
        return np.searchsorted(self.primes, values) + 1


def _estimated_table_bytes(bound: int) -> int:
    if bound < 17:
        return 8 * 8
    # pi(x) < 1.25506 x / ln x for x > 1 (Rosser-Schoenfeld)
    return int(8 * 1.25506 * bound / math.log(bound)) + 64


def primes_up_to(bound: int, memory_budget: int | None = None) -> PrimeTable:
    if bound < 0:
        raise UsageError(f"bound must be >= 0, got {bound}")
    budget = MEMORY_BUDGET if memory_budget is None else memory_budget
    need = _estimated_table_bytes(bound)
    if need > budget:
        raise CapacityError(
            f"primes_up_to({bound}) needs ~{need} bytes, over the memory budget of {budget} bytes"
        )
    parts = [np.array([2], dtype=np.int64)] if bound >= 2 else []
    for lo, mask in _odd_segments(bound):
        parts.append(lo + 2 * np.flatnonzero(mask).astype(np.int64))
    primes = np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
    return PrimeTable(bound, primes)


def prime_count(n: int) -> int:
    """pi(n), streamed over odd-only segments without storing the primes."""
    if n < 0:
        raise UsageError(f"n must be >= 0, got {n}")
    total = 1 if n >= 2 else 0
    for _, mask in _odd_segments(n):
        total += int(np.count_nonzero(mask))
    return total


def prime_counts_at(grid: Sequence[int]) -> list[int]:
    """pi(x) for every x in ``grid`` from a single pass up to max(grid)."""
    if not grid:
        return []
    xs = np.asarray(grid, dtype=np.int64)
    if (xs < 0).any():
        raise UsageError("grid values must be >= 0")
    counts = (xs >= 2).astype(np.int64)
    for lo, mask in _odd_segments(int(xs.max())):
        vals = lo + 2 * np.flatnonzero(mask).astype(np.int64)
        counts += np.searchsorted(vals, xs, side="right")
    return counts.tolist()


@dataclass(frozen=True, eq=False)
class FactorBlock:
    """Factorization data for every m in ``[range_start, range_end]``.

    ``cofactor[i]`` is what remains of m after removing every base prime power;
    it is 1 or the single prime factor of m above sqrt(n).  ``weighted`` holds
    sum f(p) over distinct p | m when the sieve was given a prime weight.
    """

    range_start: int
    range_end: int
    distinct_count: np.ndarray
    multiplicity_count: np.ndarray
    cofactor: np.ndarray
    base_primes: np.ndarray
    weighted: np.ndarray | None = None

    def __len__(self) -> int:
        return self.range_end - self.range_start + 1

    @property
    def values(self) -> np.ndarray:
        return np.arange(self.range_start, self.range_end + 1, dtype=np.int64)

    @cached_property
    def spf(self) -> np.ndarray:
        """Smallest prime factor per m; spf(1) is reported as 1."""
        lo, size = self.range_start, len(self)
        spf = np.zeros(size, dtype=np.int64)
        for p in self.base_primes:
            p = int(p)
            off = (-lo) % p
            if off >= size:
                continue
            view = spf[off::p]
            view[view == 0] = p
        unset = spf == 0
        spf[unset] = self.values[unset]
        return spf


def factor_block(
    range_start: int,
    range_end: int,
    base_primes: np.ndarray,
    prime_weight: PrimeWeight | None = None,
    base_weights: np.ndarray | None = None,
) -> FactorBlock:
    """Sieve one block.  ``base_primes`` must contain every prime <= sqrt(range_end)."""
    lo, hi = range_start, range_end
    size = hi - lo + 1
    distinct = np.zeros(size, dtype=np.int8)
    mult = np.zeros(size, dtype=np.int8)
    smooth = np.ones(size, dtype=np.int64)
    weighted = None
    if prime_weight is not None:
        if base_weights is None:
            base_weights = prime_weight(base_primes)
        weighted = np.zeros(size, dtype=base_weights.dtype)
    for i, p in enumerate(base_primes.tolist()):
        off = (-lo) % p
        if off >= size:
            continue
        distinct[off::p] += 1
        mult[off::p] += 1
        smooth[off::p] *= p
        if weighted is not None:
            weighted[off::p] += base_weights[i]
        pk = p * p
        while pk <= hi:
            off = (-lo) % pk
            if off < size:
                mult[off::pk] += 1
                smooth[off::pk] *= p
            pk *= p
    cofactor = np.arange(lo, hi + 1, dtype=np.int64) // smooth
    big = cofactor > 1
    distinct += big
    mult += big
    if weighted is not None and big.any():
        weighted[big] += prime_weight(cofactor[big]).astype(weighted.dtype, copy=False)
    return FactorBlock(lo, hi, distinct, mult, cofactor, base_primes, weighted)


class BlockConsumer(Protocol[T]):
    """Per-block aggregation.  ``merge`` must be associative and commutative
    with ``identity()`` as neutral element."""

    def identity(self) -> T: ...

    def process(self, block: FactorBlock) -> T: ...

    def merge(self, left: T, right: T) -> T: ...


@dataclass
class FunctionConsumer(Generic[T]):
    """Adapter building a consumer from three callables."""

    identity_fn: Callable[[], T]
    process_fn: Callable[[FactorBlock], T]
    merge_fn: Callable[[T, T], T]

    def identity(self) -> T:
        return self.identity_fn()

    def process(self, block: FactorBlock) -> T:
        return self.process_fn(block)

    def merge(self, left: T, right: T) -> T:
        return self.merge_fn(left, right)


def block_ranges(n: int, block_size: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + block_size - 1, n)) for lo in range(1, n + 1, block_size)]


def sieve_blocks(
    n: int,
    consumer: BlockConsumer[T],
    block_size: int = DEFAULT_BLOCK_SIZE,
    *,
    prime_weight: PrimeWeight | None = None,
    workers: int | None = None,
) -> T:
    """Feed every FactorBlock of [1, n] to ``consumer`` and fold the partial results.

    Partials are merged in block order whatever the number of worker threads,
    so the result is deterministic even for merges that are only
    approximately commutative (floating point sums).
    """
    if n < 1:
        raise UsageError(f"n must be >= 1, got {n}")
    if block_size < 1:
        raise UsageError(f"block_size must be >= 1, got {block_size}")
    workers = default_workers() if workers is None else max(1, workers)
    base = primes_up_to(math.isqrt(n)).primes
    base_weights = prime_weight(base) if prime_weight is not None else None

    def work(bounds: tuple[int, int]) -> T:
        block = factor_block(bounds[0], bounds[1], base, prime_weight, base_weights)
        return consumer.process(block)

    ranges = block_ranges(n, block_size)
    result = consumer.identity()
    if workers == 1 or len(ranges) == 1:
        for r in ranges:
            result = consumer.merge(result, work(r))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(work, ranges):
                result = consumer.merge(result, part)
    return result


def factorize(m: int) -> list[tuple[int, int]]:
    """Trial-division factorization ``[(p, a), ...]`` for moderate m."""
    if m < 1:
        raise UsageError(f"m must be >= 1, got {m}")
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            a = 0
            while m % d == 0:
                m //= d
                a += 1
            out.append((d, a))
        d += 1 if d == 2 else 2
    if m > 1:
        out.append((m, 1))
    return out
