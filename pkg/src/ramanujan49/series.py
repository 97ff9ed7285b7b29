"""Exact truncated power series in q with integer coefficients.

A :class:`TruncatedSeries` stores the coefficients of ``q**0 .. q**(order-1)``.
Every binary operation truncates to the smaller operand order, so a
computed identity is never claimed beyond the range actually known.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import InsufficientOrder, NonUnitConstantTerm

__all__ = [
    "TruncatedSeries",
    "Comparison",
    "add",
    "mul",
    "inverse",
    "power",
    "shift",
    "dissect",
    "substitute_power",
    "spread",
    "eq_upto",
]

# below this size the Cauchy product beats packing into one big integer
_SCHOOLBOOK_CUTOFF = 24


class TruncatedSeries:
    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable[int], order: Optional[int] = None):
        c = tuple(int(x) for x in coeffs)
        if order is not None:
            if order < len(c):
                c = c[:order]
            else:
                c = c + (0,) * (order - len(c))
        if not c:
            raise ValueError("a truncated series needs order >= 1")
        self._coeffs = c

    @classmethod
    def one(cls, order: int) -> "TruncatedSeries":
        return cls((1,), order)

    @classmethod
    def zero(cls, order: int) -> "TruncatedSeries":
        return cls((0,), order)

    @classmethod
    def monomial(cls, coeff: int, exponent: int, order: int) -> "TruncatedSeries":
        c = [0] * order
        if exponent < order:
            c[exponent] = coeff
        return cls(c)

    @classmethod
    def from_sparse(cls, terms: dict[int, int], order: int) -> "TruncatedSeries":
        c = [0] * order
        for e, v in terms.items():
            if 0 <= e < order:
                c[e] += v
        return cls(c)

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self._coeffs

    @property
    def order(self) -> int:
        return len(self._coeffs)

    def __len__(self) -> int:
        return len(self._coeffs)

    def __getitem__(self, i):
        return self._coeffs[i]

    def __iter__(self):
        return iter(self._coeffs)

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise InsufficientOrder(f"cannot extend order {self.order} series to {order}")
        return TruncatedSeries(self._coeffs[:order])

    def is_zero(self) -> bool:
        return not any(self._coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, TruncatedSeries):
            return self._coeffs == other._coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._coeffs)

    def __repr__(self) -> str:
        shown = []
        for i, c in enumerate(self._coeffs[:12]):
            if c:
                shown.append(f"{c}*q^{i}" if i else str(c))
        body = " + ".join(shown) or "0"
        return f"TruncatedSeries({body} + O(q^{self.order}))"

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(-c for c in self._coeffs)

    def __add__(self, other):
        if isinstance(other, int):
            other = TruncatedSeries((other,), self.order)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = TruncatedSeries((other,), self.order)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return add(self, -other)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, int):
            return TruncatedSeries(other * c for c in self._coeffs)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "TruncatedSeries":
        return power(self, e)

    def __mod__(self, m: int) -> "TruncatedSeries":
        return TruncatedSeries(c % m for c in self._coeffs)


def add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    n = min(a.order, b.order)
    return TruncatedSeries(x + y for x, y in zip(a.coeffs[:n], b.coeffs[:n]))


def _pack(coeffs: Sequence[int], bits: int) -> int:
    # signed coefficients are fine: the packed value is an exact sum
    acc = 0
    for c in reversed(coeffs):
        acc = (acc << bits) + c
    return acc


def _unpack(value: int, bits: int, n: int) -> list[int]:
    mask = (1 << bits) - 1
    half = 1 << (bits - 1)
    value &= (1 << (bits * n)) - 1
    out = []
    borrow = 0
    for _ in range(n):
        c = (value & mask) + borrow
        value >>= bits
        if c >= half:
            c -= 1 << bits
            borrow = 1
        else:
            borrow = 0
        out.append(c)
    return out


def _cauchy(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[: n - i]):
                out[i + j] += x * y
    return out


def mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated to the smaller order.

    Long inputs go through Kronecker substitution: both coefficient lists are
    packed into single integers, multiplied once, and unpacked with signed
    (balanced) digits. The slot width leaves room for the largest possible
    convolution sum, so the result is exact.
    """
    n = min(a.order, b.order)
    ac, bc = a.coeffs[:n], b.coeffs[:n]
    if n <= _SCHOOLBOOK_CUTOFF:
        return TruncatedSeries(_cauchy(ac, bc, n))
    amax = max(abs(x) for x in ac)
    bmax = max(abs(x) for x in bc)
    if not amax or not bmax:
        return TruncatedSeries.zero(n)
    bits = amax.bit_length() + bmax.bit_length() + n.bit_length() + 2
    prod = _pack(ac, bits) * _pack(bc, bits)
    return TruncatedSeries(_unpack(prod, bits, n))


def inverse(a: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse of a series whose constant term is +1 or -1.

    Coefficients are solved one at a time from ``a * b = 1``; only the
    nonzero coefficients of ``a`` are visited, which keeps sparse inputs
    such as eta products cheap.
    """
    c0 = a.coeffs[0]
    if c0 not in (1, -1):
        raise NonUnitConstantTerm(f"constant term {c0} is not a unit")
    n = a.order
    nz = [(k, c) for k, c in enumerate(a.coeffs) if k and c]
    b = [0] * n
    b[0] = c0
    for m in range(1, n):
        s = 0
        for k, c in nz:
            if k > m:
                break
            s += c * b[m - k]
        b[m] = -c0 * s
    return TruncatedSeries(b)


def power(a: TruncatedSeries, e: int) -> TruncatedSeries:
    if e < 0:
        return power(inverse(a), -e)
    result = TruncatedSeries.one(a.order)
    base = a
    while e:
        if e & 1:
            result = mul(result, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return result


def shift(a: TruncatedSeries, k: int) -> TruncatedSeries:
    """Multiply by ``q**k`` keeping the order (top ``k`` coefficients drop)."""
    if k < 0:
        raise ValueError("shift amount must be nonnegative")
    n = a.order
    if k >= n:
        return TruncatedSeries.zero(n)
    return TruncatedSeries((0,) * k + a.coeffs[: n - k])


def dissect(a: TruncatedSeries, m: int, r: int) -> TruncatedSeries:
    """Return ``sum(a[m*n + r] * q**n)``.

    The output order is ``ceil((a.order - r) / m)``. When that is zero the
    residue class is not represented at all, and :class:`InsufficientOrder`
    is raised rather than inventing a coefficient.
    """
    if m < 1 or not 0 <= r < m:
        raise ValueError(f"need m >= 1 and 0 <= r < m, got m={m}, r={r}")
    picked = a.coeffs[r::m]
    if not picked:
        raise InsufficientOrder(f"order {a.order} series has no coefficient at residue {r} mod {m}")
    return TruncatedSeries(picked)


def spread(a: TruncatedSeries, k: int, order: int) -> TruncatedSeries:
    """Series of the given order for ``a(q**k)``; needs ``a.order >= ceil(order/k)``."""
    if k < 1:
        raise ValueError("k must be positive")
    need = -(-order // k)
    if a.order < need:
        raise InsufficientOrder(f"need order {need} to spread by {k} up to {order}, have {a.order}")
    out = [0] * order
    out[::k] = a.coeffs[:need]
    return TruncatedSeries(out)


def substitute_power(a: TruncatedSeries, k: int) -> TruncatedSeries:
    """Replace q by ``q**k``; the order is preserved."""
    return spread(a, k, a.order)


@dataclass(frozen=True)
class Comparison:
    equal: bool
    order: int
    index: Optional[int] = None
    left: Optional[int] = None
    right: Optional[int] = None

    def __bool__(self) -> bool:
        return self.equal


def eq_upto(a: TruncatedSeries, b: TruncatedSeries, n: int) -> Comparison:
    """Compare the first ``n`` coefficients; report the first mismatch if any."""
    if a.order < n or b.order < n:
        raise InsufficientOrder(f"comparison to order {n} needs both operands that long (have {a.order}, {b.order})")
    for i in range(n):
        if a.coeffs[i] != b.coeffs[i]:
            return Comparison(False, n, i, a.coeffs[i], b.coeffs[i])
    return Comparison(True, n)
