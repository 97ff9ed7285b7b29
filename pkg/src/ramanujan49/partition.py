"""Partition numbers, two-colour partition numbers and congruence checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

from .errors import InsufficientData
from .qseries import eta
from .series import TruncatedSeries, dissect, inverse, mul, power

__all__ = [
    "partition_numbers",
    "partition_numbers_series",
    "two_color_numbers",
    "CongruenceClaim",
    "CongruenceReport",
    "check_congruence",
    "verify_step1_mod49",
    "Step1Report",
    "ramanujan_49_claims",
    "TWO_COLOR_CLAIMS",
]


@lru_cache(maxsize=8)
def _partitions(n: int) -> tuple[int, ...]:
    p = [0] * (n + 1)
    p[0] = 1
    for m in range(1, n + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > m:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[m - g1]
            g2 = g1 + k
            if g2 <= m:
                total += sign * p[m - g2]
            k += 1
        p[m] = total
    return tuple(p)


def partition_numbers(N: int) -> tuple[int, ...]:
    """``p(0), ..., p(N)`` by Euler's pentagonal-number recurrence."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    return _partitions(N)


def partition_numbers_series(order: int) -> TruncatedSeries:
    """``1/f_1`` by series inversion; independent of the recurrence above."""
    return inverse(eta(1, order))


def two_color_numbers(r: int, N: int) -> tuple[int, ...]:
    """``p_{1,r}(0..N)``: parts divisible by ``r`` come in two colours.

    The generating function is ``1/(f_1 f_r)``.
    """
    if r < 1:
        raise ValueError("r must be positive")
    order = N + 1
    gf = mul(inverse(eta(1, order)), inverse(eta(r, order)))
    return gf.coeffs


@dataclass(frozen=True)
class CongruenceClaim:
    """``value(step*n + residue) = 0 (mod modulus)`` for ``0 <= n < count``."""

    modulus: int
    step: int
    residue: int
    count: int
    label: str = ""

    def __post_init__(self):
        if self.modulus < 1 or self.step < 1 or self.count < 0:
            raise ValueError("modulus and step must be positive, count nonnegative")
        if not 0 <= self.residue < self.step:
            raise ValueError("residue must lie in 0..step-1")

    @property
    def last_index(self) -> int:
        return self.step * (self.count - 1) + self.residue


@dataclass(frozen=True)
class CongruenceReport:
    claim: CongruenceClaim
    passed: bool
    # (n, value, quotient); quotient is None where the value is not divisible
    rows: tuple[tuple[int, int, Optional[int]], ...] = field(repr=False)

    @property
    def failures(self) -> list[tuple[int, int]]:
        return [(n, v) for n, v, qt in self.rows if qt is None]

    @property
    def first_failure(self) -> Optional[tuple[int, int]]:
        f = self.failures
        return f[0] if f else None


def check_congruence(values: Sequence[int], claim: CongruenceClaim) -> CongruenceReport:
    if claim.count and len(values) <= claim.last_index:
        raise InsufficientData(
            f"need values up to index {claim.last_index}, have {len(values)}"
        )
    rows = []
    ok = True
    for n in range(claim.count):
        v = values[claim.step * n + claim.residue]
        qt, rem = divmod(v, claim.modulus)
        if rem:
            ok = False
            rows.append((n, v, None))
        else:
            rows.append((n, v, qt))
    return CongruenceReport(claim, ok, tuple(rows))


def ramanujan_49_claims(count: int) -> list[CongruenceClaim]:
    return [CongruenceClaim(49, 49, r, count, f"p(49n+{r})") for r in (19, 33, 40)]


# (colour step r, modulus, progression step, residues)
TWO_COLOR_CLAIMS: tuple[tuple[int, int, int, tuple[int, ...]], ...] = (
    (7, 5, 25, (17,)),
    (17, 5, 25, (7,)),
    (2, 7, 49, (15, 29, 36, 43)),
    (4, 7, 49, (11, 25, 32, 39)),
)


@dataclass(frozen=True)
class Step1Report:
    order: int
    passed: bool
    first_mismatch: Optional[int]
    vanishing: dict[int, bool]


def verify_step1_mod49(order: int) -> Step1Report:
    """Check ``sum p(7n+5) q^n = 7 f_1^3 f_7^2 (mod 49)`` to ``order``.

    Also checks that the right side has no terms at exponents 2, 4, 5 mod 7,
    which is where the three mod-49 progressions come from.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    p = partition_numbers(7 * (order - 1) + 5)
    lhs = [p[7 * n + 5] % 49 for n in range(order)]
    rhs_series = mul(power(eta(1, order), 3), power(eta(7, order), 2)) * 7
    rhs = [c % 49 for c in rhs_series.coeffs]
    mismatch = next((i for i in range(order) if lhs[i] != rhs[i]), None)
    vanishing = {}
    for s in (2, 4, 5):
        if order > s:
            part = dissect(rhs_series, 7, s)
            vanishing[s] = all(c % 49 == 0 for c in part.coeffs)
    passed = mismatch is None and all(vanishing.values())
    return Step1Report(order, passed, mismatch, vanishing)
