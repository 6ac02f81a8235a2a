"""Exact moments and CDF distance of G_n / n against the limit law.

The limit law is T = max(U1, U2) for independent uniforms on (0, 1), with
CDF F(u) = u**2 on (0, 1), r-th moment 2 / (r + 2), mean 2/3, variance 1/18.
All finite-n quantities are exact rationals; floats appear only on output.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np

from .errors import InvalidArgumentError
from .table import MAX_ORDER, GoldbachCountTable, cardinality, weighted_sum


class LimitLaw:
    """Distribution of the maximum of two independent U(0, 1) variables."""

    @staticmethod
    def cdf(u: float) -> float:
        if u <= 0:
            return 0.0
        if u >= 1:
            return 1.0
        return u * u

    @staticmethod
    def moment(r: int) -> Fraction:
        # integral of u**r * 2u over (0, 1)
        return Fraction(2, r + 2)

    mean = Fraction(2, 3)
    variance = Fraction(1, 18)


def limit_cdf(u: float) -> float:
    return LimitLaw.cdf(u)


def limit_moment(r: int) -> Fraction:
    r = int(r)
    if r < 1:
        raise InvalidArgumentError(f"order must be >= 1, got {r}")
    return LimitLaw.moment(r)


@dataclass(frozen=True)
class MomentReport:
    n: int
    order: int | None
    exact: Fraction
    limit: Fraction
    quantity: str = "moment"
    method_tag: str = ""

    @property
    def deviation(self) -> Fraction:
        return abs(self.exact - self.limit)

    def as_row(self) -> dict:
        return {
            "quantity": self.quantity,
            "n": self.n,
            "order": self.order,
            "exact_num": self.exact.numerator,
            "exact_den": self.exact.denominator,
            "float": float(self.exact),
            "limit": float(self.limit),
            "deviation": float(self.deviation),
            "method": self.method_tag,
        }


def _restrict(table: GoldbachCountTable, n: int | None) -> int:
    return table.n if n is None else int(n)


def exact_moment(table: GoldbachCountTable, r: int, n: int | None = None) -> MomentReport:
    """E[(G_n / n)**r] as a reduced fraction.

    ``n`` defaults to ``table.n``; a smaller n reuses the same table since
    Q2(2k) does not depend on the range.
    """
    r = int(r)
    if r < 1 or r > MAX_ORDER:
        raise InvalidArgumentError(f"order must be in [1, {MAX_ORDER}], got {r}")
    n = _restrict(table, n)
    value = Fraction(weighted_sum(table, n, r), (2 * n) ** r * cardinality(table, n))
    quantity = {1: "mean", 2: "second_moment"}.get(r, "moment")
    return MomentReport(n, r, value, limit_moment(r), quantity, table.method_tag)


def exact_variance(table: GoldbachCountTable, n: int | None = None) -> MomentReport:
    """Var(G_n / n) = E[(G_n/n)^2] - E[G_n/n]^2, exactly."""
    n = _restrict(table, n)
    m1 = exact_moment(table, 1, n).exact
    m2 = exact_moment(table, 2, n).exact
    return MomentReport(n, None, m2 - m1 * m1, LimitLaw.variance, "variance", table.method_tag)


@dataclass(frozen=True)
class CdfReport:
    n: int
    distance: Fraction
    argmax_k: int
    left_limit: bool
    points: list = field(default_factory=list, repr=False)
    method_tag: str = ""

    def as_row(self) -> dict:
        return {
            "quantity": "kolmogorov",
            "n": self.n,
            "order": None,
            "exact_num": self.distance.numerator,
            "exact_den": self.distance.denominator,
            "float": float(self.distance),
            "limit": 0.0,
            "deviation": float(self.distance),
            "method": self.method_tag,
        }


def _candidates(table: GoldbachCountTable, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    prefix = table.prefix[: n + 1].astype(np.float64)
    total = prefix[n]
    ks = np.arange(3, n + 1)
    f = (ks / n) ** 2
    at = np.abs(prefix[3:] / total - f)
    left = np.abs(prefix[2:n] / total - f)
    return ks, at, left


def kolmogorov_distance(table: GoldbachCountTable, n: int | None = None, points: Iterable[float] = ()) -> CdfReport:
    """Sup distance between the law of G_n/n and F(u) = u**2.

    The empirical CDF is a step function with atoms at k/n, so the supremum is
    attained at an atom or at its left limit.  Candidates are ranked in
    float64 and the leaders re-evaluated exactly.
    """
    n = _restrict(table, n)
    ks, at, left = _candidates(table, n)
    best = max(at.max(), left.max())
    slack = 1e-12
    total = cardinality(table, n)
    best_val, best_k, best_left = Fraction(-1), 0, False
    for arr, is_left in ((at, False), (left, True)):
        for idx in np.flatnonzero(arr >= best - slack):
            k = int(ks[idx])
            mass = int(table.prefix[k - 1 if is_left else k])
            val = abs(Fraction(mass, total) - Fraction(k * k, n * n))
            if val > best_val:
                best_val, best_k, best_left = val, k, is_left
    pts = [cdf_point(table, u, n) for u in points]
    return CdfReport(n, best_val, best_k, best_left, pts, table.method_tag)


def cdf_point(table: GoldbachCountTable, u: float, n: int | None = None) -> dict:
    """P(G_n / n <= u) beside F(u)."""
    n = _restrict(table, n)
    k = min(max(int(np.floor(u * n)), 2), n)
    mass = int(table.prefix[k])
    return {"u": u, "k": k, "cdf": mass / cardinality(table, n), "limit_cdf": limit_cdf(u)}


QUANTITIES = ("mean", "variance", "second_moment", "kolmogorov")


def convergence_sweep(
    n_list: Iterable[int],
    quantities: Iterable[str] = QUANTITIES,
    table: GoldbachCountTable | None = None,
    builder=None,
) -> Iterator[MomentReport | CdfReport]:
    """Yield one report per (n, quantity), n ascending.

    With ``table`` given, each n <= table.n is read from it directly; otherwise
    ``builder(n)`` supplies a table per n (defaults to the convolution build).
    """
    n_list = [int(n) for n in n_list]
    if n_list != sorted(n_list):
        raise InvalidArgumentError("n_list must be ascending")
    quantities = list(quantities)
    for q in quantities:
        if q not in QUANTITIES:
            raise InvalidArgumentError(f"unknown quantity {q!r}; expected one of {QUANTITIES}")
    if not quantities:
        return
    if builder is None:
        from .table import build_table_convolution as builder
    for n in n_list:
        if table is not None and n <= table.n:
            t, at = table, n
        else:
            t, at = builder(n), None
        for q in quantities:
            if q == "mean":
                yield exact_moment(t, 1, at)
            elif q == "second_moment":
                yield exact_moment(t, 2, at)
            elif q == "variance":
                yield exact_variance(t, at)
            else:
                yield kolmogorov_distance(t, at)
