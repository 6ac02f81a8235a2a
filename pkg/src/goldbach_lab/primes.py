"""Segmented sieve of Eratosthenes and the odd-prime sequence.

A :class:`PrimeTable` holds a primality mask for ``0..limit``, the ascending
array of odd primes, and sparse prime-counting checkpoints.  The mask is
produced segment by segment; the result does not depend on the segment size
or the number of worker threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError, OutOfRangeError, ResourceError

# Bytes; the mask uses one byte per integer.
DEFAULT_MEMORY_BUDGET = 1 << 32
DEFAULT_SEGMENT = 1 << 22
CHECKPOINT_SPACING = 1 << 16


def _small_sieve(limit: int) -> np.ndarray:
    """Plain sieve up to ``limit``; returns the primes as int64."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.flatnonzero(mask).astype(np.int64)


def _sieve_segment(mask: np.ndarray, lo: int, hi: int, base: np.ndarray) -> None:
    # Marks composites in mask[lo:hi] in place; mask[lo:hi] must start all True.
    seg = mask[lo:hi]
    for p in base:
        p = int(p)
        pp = p * p
        if pp >= hi:
            break
        start = max(pp, -(-lo // p) * p)
        seg[start - lo :: p] = False


@dataclass(frozen=True, eq=False)
class PrimeTable:
    limit: int
    is_prime: np.ndarray = field(repr=False)
    odd_primes: np.ndarray = field(repr=False)
    pi_checkpoints: np.ndarray = field(repr=False)
    checkpoint_spacing: int = CHECKPOINT_SPACING

    def __contains__(self, m: int) -> bool:
        return is_odd_prime(self, m)

    @property
    def num_odd_primes(self) -> int:
        return len(self.odd_primes)


def build_prime_table(
    limit: int,
    *,
    segment_size: int = DEFAULT_SEGMENT,
    workers: int = 1,
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
) -> PrimeTable:
    """Sieve all primes up to and including ``limit``.

    Raises InvalidArgumentError for ``limit < 2`` and ResourceError when the
    mask would not fit in ``memory_budget`` bytes.
    """
    limit = int(limit)
    if limit < 2:
        raise InvalidArgumentError(f"sieve limit must be >= 2, got {limit}")
    if segment_size < 1 or workers < 1:
        raise InvalidArgumentError("segment_size and workers must be positive")
    needed = limit + 1
    if needed > memory_budget:
        raise ResourceError(
            f"sieve to {limit} needs {needed} bytes, over the memory budget of {memory_budget} bytes"
        )

    base = _small_sieve(math.isqrt(limit))
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    bounds = [(lo, min(lo + segment_size, limit + 1)) for lo in range(0, limit + 1, segment_size)]
    if workers == 1:
        for lo, hi in bounds:
            _sieve_segment(mask, lo, hi, base)
    else:
        # Segments are disjoint slices, so the writes never overlap.
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(lambda b: _sieve_segment(mask, b[0], b[1], base), bounds))
    mask.setflags(write=False)

    primes = np.flatnonzero(mask)
    odd = primes[1:].astype(np.int64)
    odd.setflags(write=False)

    spacing = CHECKPOINT_SPACING
    # checkpoints[b] = number of primes < b * spacing
    nblocks = limit // spacing + 1
    counts = np.add.reduceat(mask.astype(np.int64), np.arange(0, nblocks * spacing, spacing)[: nblocks])
    checkpoints = np.concatenate(([0], np.cumsum(counts)[:-1])).astype(np.int64)
    checkpoints.setflags(write=False)
    return PrimeTable(limit, mask, odd, checkpoints, spacing)


def _check_range(table: PrimeTable, m: int, what: str) -> int:
    m = int(m)
    if m < 0 or m > table.limit:
        raise OutOfRangeError(f"{what}={m} outside the sieved range [0, {table.limit}]")
    return m


def is_odd_prime(table: PrimeTable, m: int) -> bool:
    m = _check_range(table, m, "m")
    return m >= 3 and bool(table.is_prime[m])


def prime_count(table: PrimeTable, y: int) -> int:
    """pi(y): number of primes <= y, counting 2."""
    y = _check_range(table, y, "y")
    b = y // table.checkpoint_spacing
    lo = b * table.checkpoint_spacing
    return int(table.pi_checkpoints[b]) + int(np.count_nonzero(table.is_prime[lo : y + 1]))


def odd_primes_upto(table: PrimeTable, y: int) -> np.ndarray:
    """View of the odd primes <= y."""
    y = _check_range(table, y, "y")
    return table.odd_primes[: np.searchsorted(table.odd_primes, y, side="right")]


def is_prime_trial(m: int) -> bool:
    """Trial division; used as an independent check on the sieve."""
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    for d in range(3, math.isqrt(m) + 1, 2):
        if m % d == 0:
            return False
    return True
