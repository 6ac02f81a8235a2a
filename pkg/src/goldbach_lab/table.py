"""Goldbach partition counts Q2(2k) for 3 <= k <= n.

Two independent constructions are provided.  ``build_table_direct`` walks the
odd primes p <= k and tests whether 2k - p is prime.  ``build_table_convolution``
self-convolves the odd-prime indicator to get the ordered-pair counts C(m) and
uses ``2 Q2(2k) = C(2k) + [k is an odd prime]``.
"""

from __future__ import annotations

import functools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .convolution import self_convolve
from .errors import (
    DomainError,
    InvalidArgumentError,
    OutOfRangeError,
    PrecisionError,
    WideIntegerOverflow,
)
from .primes import PrimeTable, build_prime_table, odd_primes_upto

MAX_ORDER = 8
# Width bound for exact weighted sums; Python ints are unbounded, this makes
# runaway orders fail loudly instead of silently growing.
WIDE_INT_BITS = 512


def count_q2_direct(primes: PrimeTable, m: int) -> int:
    """Number of unordered odd-prime pairs p <= q with p + q = m."""
    m = int(m)
    if m <= 4:
        raise DomainError(f"m must exceed 4, got {m}")
    if m - 3 > primes.limit:
        raise OutOfRangeError(f"prime table to {primes.limit} cannot resolve m={m}; need limit >= {m - 3}")
    if m % 2:
        return 0
    p = odd_primes_upto(primes, m // 2)
    return int(np.count_nonzero(primes.is_prime[m - p]))


def odd_prime_indicator(primes: PrimeTable, length: int) -> np.ndarray:
    """0/1 vector of length ``length`` marking odd primes."""
    ind = np.zeros(length, dtype=np.int64)
    ind[primes.odd_primes[primes.odd_primes < length]] = 1
    return ind


def ordered_pair_counts(primes: PrimeTable, n: int, transform: str = "fft") -> np.ndarray:
    """C(m) for 0 <= m <= 2n: ordered pairs of odd primes summing to m."""
    return self_convolve(odd_prime_indicator(primes, 2 * n + 1), transform)[: 2 * n + 1]


@dataclass(frozen=True, eq=False)
class GoldbachCountTable:
    """Q2(2k) for k = 3..n.

    ``counts[k]`` is Q2(2k) for 3 <= k <= n; entries 0..2 are zero so the array
    can be indexed by k directly.  ``prefix[j]`` is the cardinality of the
    partition set for even numbers in (4, 2j].
    """

    n: int
    counts: np.ndarray = field(repr=False)
    method_tag: str = "direct"
    prefix: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.shape != (self.n + 1,):
            raise InvalidArgumentError(f"counts must have length n + 1 = {self.n + 1}")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)
        prefix = np.cumsum(counts)
        prefix.setflags(write=False)
        object.__setattr__(self, "prefix", prefix)

    def __eq__(self, other):
        if not isinstance(other, GoldbachCountTable):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.counts, other.counts)

    __hash__ = None

    @property
    def q2(self) -> np.ndarray:
        """Q2(2k) for k = 3..n, as a view."""
        return self.counts[3:]

    @property
    def total(self) -> int:
        return int(self.prefix[-1])

    @functools.cached_property
    def _weighted(self) -> dict:
        return {}

    def weighted_prefix(self, r: int) -> np.ndarray:
        """Object array of exact cumulative sums of (2k)**r * Q2(2k)."""
        cache = self._weighted
        if r not in cache:
            ks = np.arange(self.n + 1, dtype=object)
            terms = (2 * ks) ** r * self.counts.astype(object)
            cache[r] = np.cumsum(terms)
        return cache[r]

    def truncate(self, j: int) -> "GoldbachCountTable":
        """Table restricted to k <= j; counts do not depend on n."""
        j = _check_j(self, j)
        return GoldbachCountTable(j, self.counts[: j + 1].copy(), self.method_tag)


def _check_n(n: int) -> int:
    n = int(n)
    if n < 3:
        raise InvalidArgumentError(f"n must be >= 3, got {n}")
    return n


def _check_j(table: GoldbachCountTable, j: int) -> int:
    j = int(j)
    if not 3 <= j <= table.n:
        raise OutOfRangeError(f"j={j} outside [3, {table.n}]")
    return j


def build_table_direct(n: int, primes: PrimeTable | None = None, workers: int = 1) -> GoldbachCountTable:
    n = _check_n(n)
    if primes is None or primes.limit < 2 * n:
        primes = build_prime_table(2 * n)
    is_prime = primes.is_prime
    odd = primes.odd_primes
    counts = np.zeros(n + 1, dtype=np.int64)

    def fill(ks: range) -> None:
        for k in ks:
            p = odd[: np.searchsorted(odd, k, side="right")]
            counts[k] = np.count_nonzero(is_prime[2 * k - p])

    if workers == 1:
        fill(range(3, n + 1))
    else:
        # Each shard writes its own disjoint slice of counts.
        step = -(-(n - 2) // workers)
        shards = [range(lo, min(lo + step, n + 1)) for lo in range(3, n + 1, step)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill, shards))
    return GoldbachCountTable(n, counts, "direct")


def build_table_convolution(
    n: int, primes: PrimeTable | None = None, transform: str = "fft"
) -> GoldbachCountTable:
    n = _check_n(n)
    if primes is None or primes.limit < 2 * n:
        primes = build_prime_table(2 * n)
    c = ordered_pair_counts(primes, n, transform)
    ks = np.arange(n + 1)
    diag = primes.is_prime[ks].astype(np.int64)
    diag[:3] = 0  # 2 is not an odd prime
    twice = c[2 * ks] + diag
    if np.any(twice & 1):
        raise PrecisionError("C(2k) + [k odd prime] is odd; convolution result is corrupt")
    counts = twice // 2
    counts[:3] = 0
    return GoldbachCountTable(n, counts, "convolution")


def build_table(n: int, method: str = "convolution", **kwargs) -> GoldbachCountTable:
    if method == "direct":
        return build_table_direct(n, **kwargs)
    if method == "convolution":
        return build_table_convolution(n, **kwargs)
    raise InvalidArgumentError(f"unknown method {method!r}; expected 'direct' or 'convolution'")


def cardinality(table: GoldbachCountTable, j: int | None = None) -> int:
    """Number of Goldbach partitions of even numbers in (4, 2j]."""
    j = table.n if j is None else _check_j(table, j)
    return int(table.prefix[j])


def weighted_sum(table: GoldbachCountTable, j: int | None = None, r: int = 1) -> int:
    """Exact sum of (2k)**r * Q2(2k) over 2 < k <= j."""
    j = table.n if j is None else _check_j(table, j)
    r = int(r)
    if r < 0 or r > MAX_ORDER:
        raise InvalidArgumentError(f"order r must be in [0, {MAX_ORDER}], got {r}")
    if r == 0:
        return cardinality(table, j)
    value = int(table.weighted_prefix(r)[j])
    if value.bit_length() > WIDE_INT_BITS:
        raise WideIntegerOverflow(f"weighted sum needs {value.bit_length()} bits > {WIDE_INT_BITS}")
    return value
