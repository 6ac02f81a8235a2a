"""Coefficient-level checks of the generating-function identities.

With C(m) the ordered odd-prime pair counts (coefficients of f(z)**2) and
d(k) = [k is an odd prime] (coefficients of f(z**2) at z**(2k)):

    2 Q2(2k)                 = C(2k) + d(k)
    2k Q2(2k)                = k C(2k) + k d(k)
    2k (2k - 1) Q2(2k)       = k (2k - 1) C(2k) + (k + 2k(k - 1)) d(k)

The last line is the coefficient of z**(2k-2) in
f'(z)**2 + f(z) f''(z) + f'(z**2) + 2 z**2 f''(z**2), i.e. the derivative of
f f' + z f'(z**2).  ``printed_second_residuals`` checks the variant with
f(z**2) + 2 z**2 f'(z**2) in the last two places, which is not an identity.
"""

from __future__ import annotations

import numpy as np

from .errors import ResourceError
from .primes import PrimeTable, build_prime_table
from .table import GoldbachCountTable, ordered_pair_counts

EULER_MAX_N = 200
EULER_MAX_M = 8


def _context(table: GoldbachCountTable, primes: PrimeTable | None, transform: str):
    n = table.n
    if primes is None or primes.limit < 2 * n:
        primes = build_prime_table(2 * n)
    c = ordered_pair_counts(primes, n, transform)
    ks = np.arange(n + 1, dtype=np.int64)
    d = primes.is_prime[ks].astype(np.int64)
    d[:3] = 0
    return ks, c, d


def lemma1_residuals(
    table: GoldbachCountTable, primes: PrimeTable | None = None, transform: str = "ntt"
) -> np.ndarray:
    """Residual of 2 sum Q2(2k) z^(2k) = f^2 + f(z^2) at every power z^m, m <= 2n.

    C(m) is recomputed from the primes (exact NTT by default), independently of
    how ``table`` was built.
    """
    n = table.n
    ks, c, d = _context(table, primes, transform)
    lhs = np.zeros(2 * n + 1, dtype=np.int64)
    lhs[0::2] = 2 * table.counts
    rhs = c.copy()
    rhs[0::2] += d
    return lhs - rhs


def verify_lemma1(table: GoldbachCountTable, primes: PrimeTable | None = None, transform: str = "ntt") -> int:
    """Largest absolute coefficient residual; 0 when the table is correct."""
    return int(np.abs(lemma1_residuals(table, primes, transform)).max())


def derivative_residuals(
    table: GoldbachCountTable, primes: PrimeTable | None = None, transform: str = "ntt"
) -> tuple[np.ndarray, np.ndarray]:
    """Per-k residuals of the first- and second-derivative identities, k = 0..n."""
    ks, c, d = _context(table, primes, transform)
    q = table.counts
    c2k = c[0::2]
    first = 2 * ks * q - (ks * c2k + ks * d)
    second = 2 * ks * (2 * ks - 1) * q - (ks * (2 * ks - 1) * c2k + (ks + 2 * ks * (ks - 1)) * d)
    return first, second


def verify_derivative_identities(
    table: GoldbachCountTable, primes: PrimeTable | None = None, transform: str = "ntt"
) -> tuple[int, int]:
    first, second = derivative_residuals(table, primes, transform)
    return int(np.abs(first).max()), int(np.abs(second).max())


def printed_second_residuals(
    table: GoldbachCountTable, primes: PrimeTable | None = None, transform: str = "ntt"
) -> np.ndarray:
    """Residuals for f'^2 + f f'' + f(z^2) + 2 z^2 f'(z^2); nonzero in general."""
    ks, c, d = _context(table, primes, transform)
    # f(z^2) and 2 z^2 f'(z^2) hit z^(2k-2) through the prime p = k - 1
    d_prev = np.zeros_like(d)
    d_prev[1:] = d[:-1]
    return 2 * ks * (2 * ks - 1) * table.counts - (
        ks * (2 * ks - 1) * c[0::2] + (1 + 2 * (ks - 1)) * d_prev
    )


def _odd_primes_upto(n: int) -> list[int]:
    return [p for p in range(3, n + 1, 2) if all(p % d for d in range(3, int(p**0.5) + 1, 2))]


def euler_coefficients(max_n: int, max_m: int) -> list[list[int]]:
    """Coefficients a[m][n] of prod_p (1 - x z^p)^(-1), truncated at x^max_m, z^max_n."""
    _check_euler_limits(max_n, max_m)
    a = [[0] * (max_n + 1) for _ in range(max_m + 1)]
    a[0][0] = 1
    for p in _odd_primes_upto(max_n):
        # multiply by 1 + x z^p + x^2 z^2p + ...; ascending m and n reuse the
        # updated row, which is the geometric series
        for m in range(1, max_m + 1):
            row, prev = a[m], a[m - 1]
            for n in range(p, max_n + 1):
                row[n] += prev[n - p]
    return a


def count_prime_partitions(n: int, m: int, primes: list[int] | None = None) -> int:
    """Partitions of n into exactly m odd-prime parts, by explicit enumeration."""
    if primes is None:
        primes = _odd_primes_upto(n)

    def go(rest: int, parts: int, start: int) -> int:
        if parts == 0:
            return int(rest == 0)
        total = 0
        for i in range(start, len(primes)):
            p = primes[i]
            if p * parts > rest:
                break
            total += go(rest - p, parts - 1, i)
        return total

    return go(n, m, 0)


def _check_euler_limits(max_n: int, max_m: int) -> None:
    if max_n > EULER_MAX_N or max_m > EULER_MAX_M:
        raise ResourceError(
            f"Euler expansion limited to max_n <= {EULER_MAX_N}, max_m <= {EULER_MAX_M}; got {max_n}, {max_m}"
        )
    if max_n < 0 or max_m < 0:
        raise ResourceError("limits must be nonnegative")


def euler_bivariate_check(max_n: int, max_m: int) -> int:
    """Max |a[m][n] - Q_m(n)| over the truncated expansion; 0 when they agree."""
    a = euler_coefficients(max_n, max_m)
    primes = _odd_primes_upto(max_n)
    worst = abs(a[0][0] - 1)
    for m in range(0, max_m + 1):
        for n in range(0, max_n + 1):
            if m == 0 and n == 0:
                continue
            expected = count_prime_partitions(n, m, primes) if m else 0
            worst = max(worst, abs(a[m][n] - expected))
    return worst
