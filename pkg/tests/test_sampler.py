import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from goldbach_lab.errors import DomainError, InvalidArgumentError
from goldbach_lab.primes import build_prime_table, is_odd_prime
from goldbach_lab.sampler import (
    GoldbachPartition,
    enumerate_partitions,
    make_stream,
    partition_rank,
    sample_number,
    sample_numbers,
    sample_partition,
    sample_partition_given,
    sample_partition_index,
    sample_partition_indices,
    summarize_draws,
    two_step_estimate,
    two_step_exact,
)
from goldbach_lab.table import GoldbachCountTable, build_table_direct, cardinality

SIG = 1e-6


@pytest.mark.parametrize(
    "m, expected",
    [(10, [(3, 7), (5, 5)]), (6, [(3, 3)]), (20, [(3, 17), (7, 13)]), (8, [(3, 5)])],
)
def test_enumerate_partitions(primes_small, m, expected):
    parts = enumerate_partitions(primes_small, m)
    assert [(p.p, p.q) for p in parts] == expected
    assert all(p.m == m for p in parts)


@pytest.mark.parametrize("m", [4, 2, 11, 21])
def test_enumerate_partitions_domain(primes_small, m):
    with pytest.raises(DomainError):
        enumerate_partitions(primes_small, m)


def test_enumerate_length_matches_counts(primes_small, table100):
    for k in range(3, 101):
        parts = enumerate_partitions(primes_small, 2 * k)
        assert len(parts) == table100.counts[k]
        for part in parts:
            assert part.p + part.q == part.m and part.p <= part.q
            assert is_odd_prime(primes_small, part.p) and is_odd_prime(primes_small, part.q)


def test_same_seed_same_draws(table100):
    s1, s2 = make_stream(table100, 42), make_stream(table100, 42)
    assert [sample_partition(s1) for _ in range(100)] == [sample_partition(s2) for _ in range(100)]


def test_streams_have_distinct_draws(table_1e4):
    a = sample_numbers(make_stream(table_1e4, 42, 0), 20)
    b = sample_numbers(make_stream(table_1e4, 42, 1), 20)
    assert not np.array_equal(a, b)


def test_stream_reports_seed(table5):
    s = make_stream(table5, 1234, 5)
    assert (s.seed, s.stream_id) == (1234, 5)


def test_n3_is_degenerate():
    t = build_table_direct(3)
    s = make_stream(t, 0)
    assert set(sample_numbers(s, 1000).tolist()) == {3}
    assert sample_partition(s) == GoldbachPartition(6, 3, 3)


def test_n5_number_frequencies(table5):
    draws = sample_numbers(make_stream(table5, 11), 100_000)
    for k, p in [(3, 0.25), (4, 0.25), (5, 0.5)]:
        freq = np.mean(draws == k)
        assert abs(freq - p) < 4 * math.sqrt(p * (1 - p) / len(draws))


def test_n5_partition_frequencies(table5):
    s = make_stream(table5, 12)
    ks, idx = sample_partition_indices(s, 100_000)
    parts = [s.partitions_of(int(k))[int(i)] for k, i in zip(ks[:2000], idx[:2000])]
    assert set(parts) == {(6, 3, 3), (8, 3, 5), (10, 3, 7), (10, 5, 5)}
    freq = np.mean((ks == 5) & (idx == 1))  # (10, 5, 5)
    assert abs(freq - 0.25) < 4 * math.sqrt(0.25 * 0.75 / len(ks))


def test_vectorized_numbers_equal_scalar(table_1e4):
    s1, s2 = make_stream(table_1e4, 3), make_stream(table_1e4, 3)
    assert sample_numbers(s1, 500).tolist() == [sample_number(s2) for _ in range(500)]


def _heavy_table():
    # synthetic weights near 2**62 force frequent rejections in both draws
    counts = np.zeros(5, dtype=np.int64)
    counts[3] = 3 * 2**60
    counts[4] = 2**62
    return GoldbachCountTable(4, counts)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 80))
def test_vectorized_partition_indices_equal_scalar_under_rejection(seed, count):
    t = _heavy_table()
    s1, s2 = make_stream(t, seed), make_stream(t, seed)
    ks, idx = sample_partition_indices(s1, count)
    scalar = [sample_partition_index(s2) for _ in range(count)]
    assert list(zip(ks.tolist(), idx.tolist())) == scalar
    assert s1.words.words_consumed == s2.words.words_consumed


def test_marginal_law_chi_square_n100(table100):
    draws = sample_numbers(make_stream(table100, 7), 1_000_000)
    observed = np.bincount(draws, minlength=101)[3:]
    expected = table100.q2 / table100.total * len(draws)
    assert stats.chisquare(observed, expected).pvalue > SIG


def test_partition_uniformity_chi_square_n100(table100):
    ks, idx = sample_partition_indices(make_stream(table100, 8), 1_000_000)
    ranks = partition_rank(table100, ks, idx)
    observed = np.bincount(ranks, minlength=cardinality(table100))
    assert len(observed) == cardinality(table100)
    assert stats.chisquare(observed).pvalue > SIG


def test_conditional_uniformity_at_2k_10(table100):
    s = make_stream(table100, 9)
    picks = [sample_partition_given(s, 5) for _ in range(20_000)]
    observed = [picks.count(GoldbachPartition(10, 3, 7)), picks.count(GoldbachPartition(10, 5, 5))]
    assert stats.chisquare(observed).pvalue > SIG


def test_two_step_n3():
    est = two_step_estimate(make_stream(build_table_direct(3), 1), 1000)
    assert est.estimate == 1.0 and est.se == 0.0


def test_two_step_n5(table5):
    from fractions import Fraction

    assert two_step_exact(table5) == Fraction(3, 4)
    est = two_step_estimate(make_stream(table5, 77), 100_000)
    assert abs(est.estimate - 0.75) < 4 * est.se


def test_two_step_draws_match_scalar(table100):
    # G then R per trial, in that order
    s1, s2 = make_stream(table100, 5), make_stream(table100, 5)
    est = two_step_estimate(s1, 300)
    hits = 0
    for _ in range(300):
        g = sample_number(s2)
        r = s2.words.randbelow(98) + 3
        hits += r <= g
    assert est.hits == hits


def test_two_step_rejects_zero_trials(table5):
    with pytest.raises(InvalidArgumentError):
        two_step_estimate(make_stream(table5, 1), 0)


def test_summarize_draws_against_numpy():
    ks = np.array([3, 4, 5, 5, 5, 4, 3, 5])
    s = summarize_draws(5, ks)
    x = ks / 5
    assert s.mean == pytest.approx(x.mean())
    assert s.variance == pytest.approx(x.var(ddof=1))
    assert s.mean_se == pytest.approx(x.std() / math.sqrt(len(x)))


def test_sample_partition_validity():
    t = build_table_direct(500)
    primes = build_prime_table(1000)
    s = make_stream(t, 31, 2, primes)
    for _ in range(300):
        part = sample_partition(s)
        assert 4 < part.m <= 1000 and part.p + part.q == part.m and part.p <= part.q
        assert is_odd_prime(primes, part.p) and is_odd_prime(primes, part.q)


def test_empty_table_rejected():
    with pytest.raises(InvalidArgumentError):
        make_stream(GoldbachCountTable(3, np.zeros(4, dtype=np.int64)), 1)
