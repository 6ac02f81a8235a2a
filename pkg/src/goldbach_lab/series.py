"""The odd-prime power series f(z) = sum z**p near z -> 1 and partial-sum
asymptotics of the Goldbach counts.

Truncation uses the geometric majorant obtained by pretending every integer
m > p_max is prime, so the reported tail bounds are rigorous (up to float
rounding in the bound itself).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple

import numpy as np

from .errors import DomainError, InvalidArgumentError, ResourceError
from .moments import exact_moment
from .primes import PrimeTable
from .table import GoldbachCountTable, cardinality, weighted_sum


def _log_tails(n_first: int, z: float) -> tuple[float, float, float]:
    """log of sum_{m>=N} z**m, sum m z**(m-1), sum m(m-1) z**(m-2)."""
    lz = math.log(z)
    lq = math.log1p(-z)  # log(1 - z)
    N = n_first

    def lse(*xs):
        top = max(xs)
        return top + math.log(sum(math.exp(x - top) for x in xs))

    t0 = N * lz - lq
    t1 = lse(math.log(N) + (N - 1) * lz - lq, N * lz - 2 * lq)
    t2 = lse(
        math.log(N) + math.log(max(N - 1, 1)) + (N - 2) * lz - lq,
        math.log(2 * N) + (N - 1) * lz - 2 * lq,
        math.log(2) + N * lz - 3 * lq,
    )
    return t0, t1, t2


def tail_bounds(p_max: int, z: float) -> tuple[float, float, float]:
    """Upper bounds on the omitted parts of f, f', f'' beyond p_max."""
    if z == 0:
        return 0.0, 0.0, 0.0
    return tuple(math.exp(t) for t in _log_tails(p_max + 1, z))


@dataclass(frozen=True)
class SeriesPoint:
    z: float
    eps: float
    f: float
    f_prime: float
    f_double_prime: float
    p_max: int
    tails: tuple[float, float, float]
    relative: bool = False

    @property
    def tail_bound(self) -> float:
        """Worst tail over the three series; relative to the value if ``relative``."""
        if not self.relative:
            return max(self.tails)
        vals = (self.f, self.f_prime, self.f_double_prime)
        return max(t / v if v > 0 else (0.0 if t == 0 else math.inf) for t, v in zip(self.tails, vals))

    def as_row(self) -> dict:
        return {
            "z": self.z,
            "f": self.f,
            "f_prime": self.f_prime,
            "f_double_prime": self.f_double_prime,
            "p_max": self.p_max,
            "tail_bound": self.tail_bound,
            "eps": self.eps,
            "relative": self.relative,
        }


def required_limit(z: float, eps: float, scale: tuple[float, float, float] = (1.0, 1.0, 1.0)) -> int:
    """Smallest sieve limit P whose majorant tails satisfy tail_i <= eps * scale_i."""
    if z == 0:
        return 2
    logs_target = [math.log(eps * s) for s in scale]

    def ok(P: int) -> bool:
        return all(t <= g for t, g in zip(_log_tails(P + 1, z), logs_target))

    # The majorants decrease once P exceeds a few multiples of 1/(1 - z).
    lo = max(2, int(4 / (1 - z)))
    hi = lo
    while not ok(hi):
        hi *= 2
    if ok(lo):
        return lo
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def eval_series(primes: PrimeTable, z: float, eps: float = 1e-9, relative: bool = False) -> SeriesPoint:
    """f, f', f'' at z summed over the odd primes in ``primes``.

    ``eps`` bounds the truncation error of each series, absolutely or, with
    ``relative=True``, as a fraction of the partial sum.  Raises ResourceError
    naming the sieve limit needed when the table is too small.
    """
    z = float(z)
    if not 0 <= z < 1:
        raise DomainError(f"z must lie in [0, 1), got {z}")
    if not eps > 0:
        raise InvalidArgumentError("eps must be positive")
    p = primes.odd_primes
    if z == 0 or len(p) == 0:
        f = fp = fpp = 0.0
    else:
        pf = p.astype(np.float64)
        lz = math.log(z)
        zp = np.exp(pf * lz)
        f = math.fsum(zp)
        fp = math.fsum(pf * np.exp((pf - 1) * lz))
        fpp = math.fsum(pf * (pf - 1) * np.exp((pf - 2) * lz))
    tails = tail_bounds(primes.limit, z)
    point = SeriesPoint(z, eps, f, fp, fpp, int(p[-1]) if len(p) else 0, tails, relative)
    if point.tail_bound > eps:
        scale = (f, fp, fpp) if relative else (1.0, 1.0, 1.0)
        need = required_limit(z, eps, scale) if all(s > 0 for s in scale) else None
        raise ResourceError(
            f"prime table to {primes.limit} leaves tail {point.tail_bound:.3g} > eps={eps} at z={z}; "
            f"a sieve limit of at least {need} is required"
        )
    return point


class Lemma2Ratios(NamedTuple):
    f: float
    f_prime: float
    f_double_prime: float


def _log_inv(z: float) -> float:
    return -math.log1p(-z)  # log(1 / (1 - z))


def lemma2_ratios(point: SeriesPoint) -> Lemma2Ratios:
    """Series values divided by their claimed z -> 1 asymptotes.

    The asymptotes are 1/((1-z)L), 2/((1-z)**2 L) and 2/((1-z)**3 L) with
    L = log(1/(1-z)).  Diagnostic only; nothing is asserted.
    """
    if point.z < 0.9:
        raise DomainError(f"ratios are only meaningful for z >= 0.9, got {point.z}")
    q, L = 1 - point.z, _log_inv(point.z)
    return Lemma2Ratios(
        point.f * q * L,
        point.f_prime * q**2 * L / 2,
        point.f_double_prime * q**3 * L / 2,
    )


def lemma2_constants(point: SeriesPoint) -> Lemma2Ratios:
    """Implied constants c in f ~ c/((1-z)L), f' ~ c/((1-z)^2 L), f'' ~ c/((1-z)^3 L)."""
    r = lemma2_ratios(point)
    return Lemma2Ratios(r.f, 2 * r.f_prime, 2 * r.f_double_prime)


# quantity -> (weight order r, power of n, claimed constant)
TAUBERIAN_QUANTITIES = {
    "cardinality": (0, 2, Fraction(2)),
    "first_moment_sum": (1, 3, Fraction(8, 3)),
    "second_moment_sum": (2, 4, Fraction(4)),
}


@dataclass(frozen=True)
class AsymptoteDiagnostic:
    quantity: str
    n: int
    measured: int
    predicted: float
    ratio: float
    implied_constant: float

    def as_row(self) -> dict:
        return {
            "quantity": self.quantity,
            "n": self.n,
            "measured": self.measured,
            "predicted": self.predicted,
            "ratio": self.ratio,
            "implied_constant": self.implied_constant,
        }


def tauberian_ratio(table: GoldbachCountTable, quantity: str, n: int | None = None) -> AsymptoteDiagnostic:
    """Exact partial sum against its claimed c * n**power / log(n)**2 asymptote."""
    if quantity not in TAUBERIAN_QUANTITIES:
        raise InvalidArgumentError(f"unknown quantity {quantity!r}; expected one of {sorted(TAUBERIAN_QUANTITIES)}")
    n = table.n if n is None else int(n)
    r, power, const = TAUBERIAN_QUANTITIES[quantity]
    measured = weighted_sum(table, n, r)
    log2 = math.log(n) ** 2
    # exact integer division first keeps large n**power out of float range issues
    scaled = Fraction(measured, n**power)
    implied = float(scaled) * log2
    predicted = float(const) * float(n) ** power / log2
    return AsymptoteDiagnostic(quantity, n, measured, predicted, implied / float(const), implied)


def hlk_partial_sum(rho: float, slowly_varying: Callable[[float], float], n: float, radius: float = 1.0) -> float:
    """(n/r)**rho * L(n) / Gamma(rho + 1), the partial-sum asymptote of a
    power series with g(x) ~ (r - x)**(-rho) L(1/(r - x))."""
    return (n / radius) ** rho * slowly_varying(n) / math.gamma(rho + 1)


def tauberian_consistency(table: GoldbachCountTable, n: int | None = None) -> Fraction:
    """measured(first)/(2n measured(card)) - E[G_n/n]; identically zero."""
    n = table.n if n is None else int(n)
    lhs = Fraction(weighted_sum(table, n, 1), 2 * n * cardinality(table, n))
    return lhs - exact_moment(table, 1, n).exact
