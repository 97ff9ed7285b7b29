"""Concrete q-products: ``f_n``, Pochhammer products and the quotients ``f_{j,k}``."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .errors import InvalidDissectionIndex
from .series import TruncatedSeries, inverse, mul, power, shift, spread

__all__ = [
    "EtaQuotientSpec",
    "eta",
    "eta_product",
    "eta_pentagonal",
    "pochhammer",
    "f_jk",
    "eval_eta_quotient",
    "jacobi_cube_sum",
    "dissection_parts",
    "seven_dissection_rhs",
    "dissection_relations",
]


def _finite_product(starts: Iterable[int], order: int) -> list[int]:
    # multiply 1 by (1 - q^s) for each s, in place
    c = [0] * order
    c[0] = 1
    for s in starts:
        if s >= order:
            continue
        for i in range(order - 1, s - 1, -1):
            c[i] -= c[i - s]
    return c


def eta_product(n: int, order: int) -> TruncatedSeries:
    """``f_n`` expanded as the finite product of ``(1 - q^(n*j))``."""
    if n < 1 or order < 1:
        raise ValueError("need n >= 1 and order >= 1")
    return TruncatedSeries(_finite_product(range(n, order, n), order))


def eta_pentagonal(n: int, order: int) -> TruncatedSeries:
    """``f_n`` from Euler's pentagonal number theorem."""
    if n < 1 or order < 1:
        raise ValueError("need n >= 1 and order >= 1")
    c = [0] * order
    c[0] = 1
    k = 1
    while n * k * (3 * k - 1) // 2 < order:
        sign = -1 if k % 2 else 1
        c[n * k * (3 * k - 1) // 2] += sign
        e = n * k * (3 * k + 1) // 2
        if e < order:
            c[e] += sign
        k += 1
    return TruncatedSeries(c)


@lru_cache(maxsize=256)
def eta(n: int, order: int) -> TruncatedSeries:
    return eta_pentagonal(n, order)


def pochhammer(a: int, b: int, order: int) -> TruncatedSeries:
    """``(q^a; q^b)_inf`` truncated to ``order``."""
    if a < 1 or b < 1:
        raise ValueError("need a >= 1 and b >= 1")
    return TruncatedSeries(_finite_product(range(a, order, b), order))


@lru_cache(maxsize=64)
def f_jk(j: int, k: int, order: int) -> TruncatedSeries:
    if not (0 < j and 0 < 2 * j < k):
        raise InvalidDissectionIndex(f"f_{{{j},{k}}} needs 0 < j and 0 < 2j < k")
    num = mul(pochhammer(2 * j, k, order), pochhammer(k - 2 * j, k, order))
    den = mul(pochhammer(j, k, order), pochhammer(k - j, k, order))
    return mul(num, inverse(den))


@dataclass(frozen=True)
class EtaQuotientSpec:
    """``prod(f_n ** e for n, e in factors)``; empty means the constant 1."""

    factors: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        for n, _ in self.factors:
            if n < 1:
                raise ValueError(f"eta step must be positive, got {n}")

    @classmethod
    def of(cls, *factors: tuple[int, int]) -> "EtaQuotientSpec":
        return cls(tuple(factors))


def eval_eta_quotient(spec: EtaQuotientSpec, order: int) -> TruncatedSeries:
    out = TruncatedSeries.one(order)
    for n, e in spec.factors:
        if e:
            out = mul(out, power(eta(n, order), e))
    return out


def jacobi_cube_sum(order: int) -> TruncatedSeries:
    """The sparse sum ``sum((-1)^n (2n+1) q^(n(n+1)/2))``."""
    c = [0] * order
    n = 0
    while n * (n + 1) // 2 < order:
        c[n * (n + 1) // 2] = (-1) ** n * (2 * n + 1)
        n += 1
    return TruncatedSeries(c)


def dissection_parts(order: int) -> tuple[TruncatedSeries, TruncatedSeries, TruncatedSeries]:
    """``f_{j,7}(q^7)`` for j = 1, 2, 3 as series of the given order."""
    inner = -(-order // 7)
    return tuple(spread(f_jk(j, 7, inner), 7, order) for j in (1, 2, 3))


def seven_dissection_rhs(order: int) -> TruncatedSeries:
    """``f_49 (F1 - q F2 - q^2 + q^5 F3)`` with ``F_j = f_{j,7}(q^7)``."""
    F1, F2, F3 = dissection_parts(order)
    bracket = F1 - shift(F2, 1) - TruncatedSeries.monomial(1, 2, order) + shift(F3, 5)
    return mul(eta(49, order), bracket)


def dissection_relations(order: int) -> tuple[TruncatedSeries, ...]:
    """The four relations among the ``f_{j,7}(q^7)``; each should vanish.

    1. F1^2 - F1 F2^2 - q^7 F3
    2. F1 - F2^2 - q^7 F2 F3^2
    3. F2 - F1^2 F3 + q^7 F3^2
    4. F1 F2 F3 - 1
    """
    F1, F2, F3 = dissection_parts(order)
    return (
        mul(F1, F1) - mul(F1, mul(F2, F2)) - shift(F3, 7),
        F1 - mul(F2, F2) - shift(mul(F2, mul(F3, F3)), 7),
        F2 - mul(mul(F1, F1), F3) + shift(mul(F3, F3), 7),
        mul(F1, mul(F2, F3)) - 1,
    )
