"""Uniform sampling from the set of Goldbach partitions of (4, 2n].

A draw picks u uniformly from [1, |Sigma_2n|] and returns the smallest k with
prefix[k] >= u, so P(G_n = k) = Q2(2k) / |Sigma_2n|.  A concrete partition is
then chosen by a second, independent uniform index into the partitions of 2k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .errors import DomainError, InvalidArgumentError
from .primes import PrimeTable, build_prime_table, odd_primes_upto
from .rng import WordStream, _accept_bound
from .table import GoldbachCountTable


class GoldbachPartition(NamedTuple):
    m: int
    p: int
    q: int


def enumerate_partitions(primes: PrimeTable, m: int) -> list[GoldbachPartition]:
    """All p <= q odd primes with p + q = m, ascending in p."""
    m = int(m)
    if m <= 4 or m % 2:
        raise DomainError(f"m must be even and > 4, got {m}")
    if m - 3 > primes.limit:
        raise DomainError(f"prime table to {primes.limit} is too small for m={m}")
    p = odd_primes_upto(primes, m // 2)
    p = p[primes.is_prime[m - p]]
    return [GoldbachPartition(m, int(a), m - int(a)) for a in p]


class SamplerStream:
    """Deterministic draw sequence bound to one count table.

    Identical ``(seed, stream_id, table)`` give identical draws.  Streams are
    sequential objects; run parallel experiments on distinct stream ids.
    """

    def __init__(self, table: GoldbachCountTable, seed: int, stream_id: int = 0, primes: PrimeTable | None = None):
        if table.total < 1:
            raise InvalidArgumentError("cannot sample from an empty table")
        self.table = table
        self.words = WordStream(seed, stream_id)
        self._primes = primes
        self._partitions: dict[int, list[GoldbachPartition]] = {}

    @property
    def seed(self) -> int:
        return self.words.seed

    @property
    def stream_id(self) -> int:
        return self.words.stream_id

    @property
    def primes(self) -> PrimeTable:
        if self._primes is None or self._primes.limit < 2 * self.table.n:
            self._primes = build_prime_table(2 * self.table.n)
        return self._primes

    def partitions_of(self, k: int) -> list[GoldbachPartition]:
        if k not in self._partitions:
            self._partitions[k] = enumerate_partitions(self.primes, 2 * k)
        return self._partitions[k]

    def _k_from_rank(self, u):
        # u is 0-based; prefix[k] >= u + 1 with k minimal
        return np.searchsorted(self.table.prefix, np.asarray(u, dtype=np.int64) + 1, side="left")

    def _draw_pairs(self, count: int, second_range) -> tuple[np.ndarray, np.ndarray]:
        """``count`` (k, x) draws where x is uniform in [0, second_range(k)).

        Equivalent to alternating scalar draws.  Word ranges for the second
        draw are computed speculatively; on the (rare) first rejection the
        tail is pushed back and the pair is finished with scalar calls.
        """
        total = self.table.total
        k_bound = _accept_bound(total)
        ks = np.empty(count, dtype=np.int64)
        xs = np.empty(count, dtype=np.int64)
        words = self.words
        i = 0
        while i < count:
            w = words._take(2 * (count - i))
            kw, xw = w[0::2], w[1::2]
            k = self._k_from_rank(kw % np.uint64(total))
            r2 = np.asarray(second_range(k), dtype=np.uint64)
            uniq = np.unique(r2)
            x_bound = np.array([_accept_bound(int(r)) for r in uniq], dtype=np.uint64)[np.searchsorted(uniq, r2)]
            ok = np.empty(len(w), dtype=bool)
            ok[0::2] = kw <= np.uint64(k_bound)
            ok[1::2] = xw <= x_bound
            if ok.all():
                ks[i:] = k
                xs[i:] = xw % r2
                break
            bad = int(np.argmin(ok))
            done = bad // 2
            ks[i : i + done] = k[:done]
            xs[i : i + done] = xw[:done] % r2[:done]
            words._push_back(w[bad + 1 :])
            j = i + done
            if bad % 2 == 0:
                kj = int(self._k_from_rank(words.randbelow(total)))
            else:
                kj = int(k[done])
            ks[j] = kj
            xs[j] = words.randbelow(int(np.asarray(second_range(np.array([kj])))[0]))
            i = j + 1
        return ks, xs


def make_stream(table: GoldbachCountTable, seed: int, stream_id: int = 0, primes: PrimeTable | None = None) -> SamplerStream:
    return SamplerStream(table, seed, stream_id, primes)


def sample_number(stream: SamplerStream) -> int:
    """One draw of G_n (half the sampled Goldbach number)."""
    return int(stream._k_from_rank(stream.words.randbelow(stream.table.total)))


def sample_numbers(stream: SamplerStream, count: int) -> np.ndarray:
    """``count`` draws of G_n; same values as ``count`` calls to sample_number."""
    u = stream.words.randbelow_fixed(stream.table.total, count)
    return stream._k_from_rank(u.astype(np.int64))


def sample_partition_given(stream: SamplerStream, k: int) -> GoldbachPartition:
    """Uniform partition of 2k, independent of how k was chosen."""
    parts = stream.partitions_of(int(k))
    return parts[stream.words.randbelow(len(parts))]


def sample_partition_index(stream: SamplerStream) -> tuple[int, int]:
    k = sample_number(stream)
    return k, stream.words.randbelow(int(stream.table.counts[k]))


def sample_partition(stream: SamplerStream) -> GoldbachPartition:
    k, idx = sample_partition_index(stream)
    return stream.partitions_of(k)[idx]


def sample_partition_indices(stream: SamplerStream, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized ``sample_partition_index``: arrays of k and the partition index."""
    counts = stream.table.counts
    return stream._draw_pairs(count, lambda k: counts[k])


def partition_rank(table: GoldbachCountTable, k, idx):
    """Position of partition ``idx`` of 2k in the concatenated set, 0-based."""
    return table.prefix[np.asarray(k) - 1] + np.asarray(idx)


@dataclass(frozen=True)
class SampleSummary:
    n: int
    draws: int
    mean: float
    variance: float
    mean_se: float
    variance_se: float


def summarize_draws(n: int, ks: np.ndarray) -> SampleSummary:
    """Empirical mean and variance of G_n / n with CLT standard errors."""
    x = np.asarray(ks, dtype=np.float64) / n
    size = len(x)
    if size < 1:
        raise InvalidArgumentError("need at least one draw to summarize")
    mean = float(x.mean())
    centered = x - mean
    var = float(np.mean(centered**2))
    m4 = float(np.mean(centered**4))
    return SampleSummary(
        n=n,
        draws=size,
        mean=mean,
        variance=var * size / (size - 1) if size > 1 else 0.0,
        mean_se=math.sqrt(var / size),
        variance_se=math.sqrt(max(m4 - var * var, 0.0) / size),
    )


@dataclass(frozen=True)
class TwoStepEstimate:
    n: int
    trials: int
    hits: int
    estimate: float
    se: float


def two_step_estimate(stream: SamplerStream, trials: int) -> TwoStepEstimate:
    """Monte Carlo estimate of Pr(R_n <= G_n).

    Each trial draws G_n from the partition law and R_n uniformly from
    {3, ..., n}, i.e. 2R_n uniform over the even numbers in (4, 2n].
    """
    trials = int(trials)
    if trials < 1:
        raise InvalidArgumentError("trials must be >= 1")
    n = stream.table.n
    g, r = stream._draw_pairs(trials, lambda k: np.full(len(k), n - 2))
    hits = int(np.count_nonzero(r + 3 <= g))
    est = hits / trials
    return TwoStepEstimate(n, trials, hits, est, math.sqrt(est * (1 - est) / trials))


def two_step_exact(table: GoldbachCountTable) -> Fraction:
    """Exact Pr(R_n <= G_n) = sum_k P(G_n = k) (k - 2) / (n - 2)."""
    n = table.n
    ks = np.arange(n + 1, dtype=object)
    num = int(np.sum((ks - 2) * table.counts.astype(object)))
    return Fraction(num, (n - 2) * table.total)
