"""Laurent polynomials in F1, F2, F3 (standing for f_{j,7}(q^7)) and q.

Monomials are packed into one Python int: the exponent vector
``(e1, e2, e3, eq)`` becomes ``e1 + e2*S + e3*S**2 + eq*S**3`` with
``S = 2**20``. Packing is linear, so multiplying monomials is adding keys,
and negative exponents need no bias as long as ``|e| < S/2``.

The relation ideal among F1, F2, F3 and q^7 is handled by a normal form:
F3 -> 1/(F1*F2) and q^7 -> F1^3*F2 - F1^2*F2^3. What remains is, for each
residue of the q-exponent mod 7, a Laurent polynomial in F1 and F2.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Callable, Iterator, Mapping, Optional, Sequence, Union

from .errors import DimensionMismatch, IndexOutOfRange, NonMonomialInverse
from .qseries import f_jk
from .series import TruncatedSeries, inverse, mul

__all__ = [
    "LaurentPoly",
    "F1",
    "F2",
    "F3",
    "Q",
    "PolyMatrix",
    "ReducedForm",
    "build_R",
    "build_A",
    "build_A_ell",
    "dissection_quadrinomial",
    "build_matrix_A",
    "build_matrix_W",
    "matrix_from_residue_blocks",
    "matrix_power",
    "matrix_power_nested",
    "det5",
    "det_leibniz",
    "cofactor_first_row",
    "det7",
    "reduce",
    "reduce_single",
    "eval_poly",
]

_BITS = 20
_S = 1 << _BITS
_HALF = _S >> 1
_MASK = _S - 1
NVARS = 4
VARNAMES = ("F1", "F2", "F3", "q")


def pack(exps: Sequence[int]) -> int:
    key = 0
    for e in reversed(exps):
        if not -_HALF < e < _HALF:
            raise OverflowError(f"exponent {e} out of packable range")
        key = key * _S + e
    return key


def unpack(key: int) -> tuple[int, ...]:
    out = []
    for _ in range(NVARS):
        e = key & _MASK
        if e >= _HALF:
            e -= _S
        out.append(e)
        key = (key - e) >> _BITS
    return tuple(out)


class LaurentPoly:
    """Sparse integer Laurent polynomial; immutable after construction."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[int, int]] = None, *, _trusted: bool = False):
        if _trusted:
            self._terms = terms
        else:
            self._terms = {k: int(v) for k, v in (terms or {}).items() if v}
        self._hash = None

    @classmethod
    def monomial(cls, coeff: int = 1, f1: int = 0, f2: int = 0, f3: int = 0, q: int = 0) -> "LaurentPoly":
        if q < 0:
            raise ValueError("the exponent of q must be nonnegative")
        return cls({pack((f1, f2, f3, q)): coeff})

    @classmethod
    def constant(cls, c: int) -> "LaurentPoly":
        return cls.monomial(c)

    @classmethod
    def from_terms(cls, items: Mapping[tuple[int, int, int, int], int]) -> "LaurentPoly":
        out: dict[int, int] = {}
        for exps, c in items.items():
            if exps[3] < 0:
                raise ValueError("the exponent of q must be nonnegative")
            k = pack(exps)
            out[k] = out.get(k, 0) + c
        return cls(out)

    def items(self) -> Iterator[tuple[tuple[int, ...], int]]:
        for k, c in self._terms.items():
            yield unpack(k), c

    def as_dict(self) -> dict[tuple[int, ...], int]:
        return dict(self.items())

    def coefficient(self, f1: int = 0, f2: int = 0, f3: int = 0, q: int = 0) -> int:
        return self._terms.get(pack((f1, f2, f3, q)), 0)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def q_residues(self) -> set[int]:
        return {e[3] % 7 for e, _ in self.items()}

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({k: -v for k, v in self._terms.items()}, _trusted=True)

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if len(self._terms) < len(other._terms):
            self, other = other, self
        out = dict(self._terms)
        for k, v in other._terms.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                del out[k]
        return LaurentPoly(out, _trusted=True)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return LaurentPoly()
            return LaurentPoly({k: v * other for k, v in self._terms.items()}, _trusted=True)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out: dict[int, int] = {}
        get = out.get
        for kb, vb in b.items():
            for ka, va in a.items():
                k = ka + kb
                out[k] = get(k, 0) + va * vb
        return LaurentPoly({k: v for k, v in out.items() if v}, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "LaurentPoly":
        if e < 0:
            if len(self._terms) != 1:
                raise NonMonomialInverse("only a single monomial can be raised to a negative power")
            (k, c), = self._terms.items()
            if c not in (1, -1):
                raise NonMonomialInverse(f"coefficient {c} has no integer inverse")
            if unpack(k)[3]:
                raise NonMonomialInverse("q has no inverse in this ring")
            return LaurentPoly({k * e: c ** (-e)}, _trusted=True)
        result = LaurentPoly.constant(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for exps, c in sorted(self.items(), key=lambda t: (t[0][3], -t[0][0], t[0][1], t[0][2])):
            factors = [
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(VARNAMES, exps)
                if e
            ]
            mono = "*".join(factors)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


F1 = LaurentPoly.monomial(f1=1)
F2 = LaurentPoly.monomial(f2=1)
F3 = LaurentPoly.monomial(f3=1)
Q = LaurentPoly.monomial(q=1)
ZERO = LaurentPoly()
ONE = LaurentPoly.constant(1)


def dissection_quadrinomial() -> LaurentPoly:
    """``F1 - q*F2 - q^2 + q^5*F3``: the bracket of the 7-dissection of f_1."""
    return F1 - Q * F2 - Q ** 2 + Q ** 5 * F3


def build_R(i: int, j: int, k: int, ell: int = 4) -> LaurentPoly:
    """One multinomial term of the ``ell``-th power of the dissection bracket."""
    if not (0 <= i <= ell and 0 <= j <= ell - i and 0 <= k <= i):
        raise IndexOutOfRange(f"R_{{{i},{j},{k}}} is outside 0<=i<={ell}, 0<=j<={ell}-i, 0<=k<=i")
    coeff = comb(ell, i) * comb(ell - i, j) * comb(i, k) * (-1) ** (i + j - k)
    return LaurentPoly.monomial(coeff, f1=ell - i - j, f2=j, f3=k, q=2 * i + j + 3 * k)


# index triples (i, j, k) grouped into A_1 .. A_7
A_TERMS: dict[int, tuple[tuple[int, int, int], ...]] = {
    1: ((0, 0, 0), (1, 2, 1), (2, 0, 1), (3, 1, 0), (4, 0, 2)),
    2: ((0, 1, 0), (1, 3, 1), (2, 1, 1), (4, 0, 0), (3, 0, 3)),
    3: ((0, 2, 0), (1, 0, 0), (2, 2, 1), (3, 0, 1), (3, 1, 3)),
    4: ((0, 3, 0), (1, 1, 0), (2, 0, 2), (3, 1, 1), (4, 0, 3)),
    5: ((0, 4, 0), (1, 2, 0), (2, 0, 0), (2, 1, 2), (4, 0, 1)),
    6: ((1, 3, 0), (1, 0, 1), (2, 1, 0), (2, 2, 2), (3, 0, 2)),
    7: ((1, 1, 1), (2, 2, 0), (3, 0, 0), (3, 1, 2), (4, 0, 4)),
}


def build_A(t: int) -> LaurentPoly:
    if t not in A_TERMS:
        raise IndexOutOfRange(f"A_t needs t in 1..7, got {t}")
    out = ZERO
    for i, j, k in A_TERMS[t]:
        out = out + build_R(i, j, k)
    return out


def build_A_ell(ell: int) -> dict[int, LaurentPoly]:
    """Group the multinomial expansion of the bracket to the ``ell`` by q-residue.

    Returns ``{t: A_t}`` where every q-exponent in ``A_t`` is ``t-1`` mod 7.
    """
    groups: dict[int, dict[int, int]] = {t: {} for t in range(1, 8)}
    for i in range(ell + 1):
        for j in range(ell - i + 1):
            for k in range(i + 1):
                term = build_R(i, j, k, ell)
                (key, c), = term._terms.items()
                t = (2 * i + j + 3 * k) % 7 + 1
                g = groups[t]
                g[key] = g.get(key, 0) + c
    return {t: LaurentPoly(g) for t, g in groups.items()}


RingElem = Union[int, LaurentPoly]


class PolyMatrix:
    """Dense square matrix; entries are LaurentPoly (or plain ints in tests)."""

    __slots__ = ("n", "rows")

    def __init__(self, rows: Sequence[Sequence[RingElem]]):
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise DimensionMismatch("matrix must be square")
        self.n = n
        self.rows = tuple(tuple(r) for r in rows)

    @classmethod
    def identity(cls, n: int) -> "PolyMatrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def entry(self, i: int, j: int):
        """1-based access, matching the usual (row, column) labelling."""
        return self.rows[i - 1][j - 1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.n == other.n and all(
            a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb)
        )

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.n != other.n:
            raise DimensionMismatch(f"{self.n}x{self.n} times {other.n}x{other.n}")
        n = self.n
        cols = list(zip(*other.rows))
        out = []
        for row in self.rows:
            new_row = []
            for col in cols:
                acc = ZERO
                for a, b in zip(row, col):
                    if a and b:
                        acc = acc + a * b
                new_row.append(acc)
            out.append(new_row)
        return PolyMatrix(out)

    def minor_matrix(self, row: int, col: int) -> "PolyMatrix":
        """Delete the given 0-based row and column."""
        return PolyMatrix(
            [[x for j, x in enumerate(r) if j != col] for i, r in enumerate(self.rows) if i != row]
        )

    def __repr__(self) -> str:
        return f"PolyMatrix(n={self.n})"


def _nonzero(x: RingElem) -> bool:
    return bool(x) if isinstance(x, int) else not x.is_zero()


def matrix_from_residue_blocks(blocks: Mapping[int, LaurentPoly]) -> PolyMatrix:
    """Circulant layout: entry (i, j) is ``blocks[((i - j) mod 7) + 1]``."""
    return PolyMatrix([[blocks[(i - j) % 7 + 1] for j in range(7)] for i in range(7)])


def build_matrix_A() -> PolyMatrix:
    return matrix_from_residue_blocks({t: build_A(t) for t in range(1, 8)})


def build_matrix_W() -> PolyMatrix:
    # W is the same circulant layout built from the four bracket terms
    # (offsets 0, 1, 2, 5), i.e. the degree-one analogue of A
    a, b, c, d = F1, -(Q * F2), -(Q ** 2), Q ** 5 * F3
    blocks = {t: ZERO for t in range(1, 8)}
    blocks[1], blocks[2], blocks[3], blocks[6] = a, b, c, d
    return matrix_from_residue_blocks(blocks)


def matrix_power(V: PolyMatrix, e: int) -> PolyMatrix:
    if e < 1:
        raise ValueError("matrix_power needs e >= 1")
    result = V
    for _ in range(e - 1):
        result = result @ V
    return result


def matrix_power_nested(V: PolyMatrix, ell: int, i: int, j: int) -> RingElem:
    """Entry (i, j) of ``V**ell`` by the explicit nested sum over index chains.

    ``sum over t_1..t_{ell-1}`` of ``v[i,t_{ell-1}] v[t_{ell-1},t_{ell-2}] ... v[t_1,j]``.
    Indices are 0-based. Exponential in ``ell``; meant for spot checks.
    """
    n = V.n
    if ell == 1:
        return V[i, j]
    acc = ZERO
    for chain in itertools.product(range(n), repeat=ell - 1):
        path = (i,) + chain + (j,)
        term = ONE
        for a, b in zip(path, path[1:]):
            x = V[a, b]
            if not _nonzero(x):
                term = ZERO
                break
            term = term * x
        if term:
            acc = acc + term
    return acc


def det5(M: PolyMatrix) -> RingElem:
    """Determinant of a 5x5 matrix by the staged cofactor expansion.

    The ten quantities ``a..j`` are the 3x3 minors of rows 3-5; rows 1 and 2
    are then expanded against them.
    """
    if M.n != 5:
        raise DimensionMismatch(f"det5 needs a 5x5 matrix, got {M.n}x{M.n}")

    def m(i, j):
        return M.rows[i - 1][j - 1]

    def d2(c1, c2):
        # 2x2 minor on rows 4-5
        return m(4, c1) * m(5, c2) - m(5, c1) * m(4, c2)

    def d3(c1, c2, c3):
        return m(3, c1) * d2(c2, c3) - m(3, c2) * d2(c1, c3) + m(3, c3) * d2(c1, c2)

    a = d3(3, 4, 5)
    b = d3(2, 4, 5)
    c = d3(2, 3, 5)
    d = d3(2, 3, 4)
    e = d3(1, 4, 5)
    f = d3(1, 3, 5)
    g = d3(1, 3, 4)
    h = d3(1, 2, 5)
    i = d3(1, 2, 4)
    j = d3(1, 2, 3)

    return (
        m(1, 1) * (m(2, 2) * a - m(2, 3) * b + m(2, 4) * c - m(2, 5) * d)
        - m(1, 2) * (m(2, 1) * a - m(2, 3) * e + m(2, 4) * f - m(2, 5) * g)
        + m(1, 3) * (m(2, 1) * b - m(2, 2) * e + m(2, 4) * h - m(2, 5) * i)
        - m(1, 4) * (m(2, 1) * c - m(2, 2) * f + m(2, 3) * h - m(2, 5) * j)
        + m(1, 5) * (m(2, 1) * d - m(2, 2) * g + m(2, 3) * i - m(2, 4) * j)
    )


def _perm_sign(p: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(p)
    for s in range(len(p)):
        if seen[s]:
            continue
        length = 0
        x = s
        while not seen[x]:
            seen[x] = True
            x = p[x]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def det_leibniz(M: PolyMatrix) -> RingElem:
    """Determinant as the signed sum over all permutations (test oracle)."""
    n = M.n
    total = 0
    for p in itertools.permutations(range(n)):
        term = _perm_sign(p)
        for i in range(n):
            term = term * M.rows[i][p[i]]
        total = total + term
    return total


def _det6_first_row(S: PolyMatrix, minor_map: Callable = map) -> RingElem:
    minors = list(minor_map(det5, [S.minor_matrix(0, j) for j in range(6)]))
    total = 0
    for j in range(6):
        x = S.rows[0][j]
        if not _nonzero(x):
            continue
        term = x * minors[j]
        total = total + term if j % 2 == 0 else total - term
    return total


def cofactor_first_row(A: PolyMatrix, col: int, minor_map: Callable = map) -> RingElem:
    """``CF_{1,col}`` of a 7x7 matrix, ``col`` counted from 1.

    The 6x6 minor is expanded along its first row into six ``det5`` calls;
    ``minor_map`` lets a caller farm those out (e.g. ``executor.map``).
    """
    if A.n != 7:
        raise DimensionMismatch(f"cofactor_first_row needs 7x7, got {A.n}x{A.n}")
    if not 1 <= col <= 7:
        raise IndexOutOfRange(f"column must be in 1..7, got {col}")
    sub = A.minor_matrix(0, col - 1)
    value = _det6_first_row(sub, minor_map)
    return value if col % 2 == 1 else -value


def det7(M: PolyMatrix, minor_map: Callable = map) -> RingElem:
    """Determinant of a 7x7 matrix expanded along the first row."""
    total = 0
    for col in range(1, 8):
        x = M.rows[0][col - 1]
        if _nonzero(x):
            total = total + x * cofactor_first_row(M, col, minor_map)
    return total


# ---------------------------------------------------------------------------
# normal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReducedForm:
    """``q**residue * poly`` with ``poly`` a Laurent polynomial in F1, F2 only."""

    residue: int
    poly: LaurentPoly

    def __post_init__(self):
        if not 0 <= self.residue < 7:
            raise ValueError("residue must be in 0..6")
        for (e1, e2, e3, eq), _ in self.poly.items():
            if e3 or eq:
                raise ValueError("a reduced polynomial involves F1 and F2 only")

    def embed(self) -> LaurentPoly:
        return self.poly * Q ** self.residue

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def coefficients(self) -> dict[tuple[int, int], int]:
        """``{(e1, e2): coeff}``."""
        return {(e[0], e[1]): c for e, c in self.poly.items()}


def _g_power(m: int) -> dict[int, int]:
    # (F1^3 F2 - F1^2 F2^3)^m = F1^(2m) F2^m (F1 - F2^2)^m
    out = {}
    for k in range(m + 1):
        out[pack((3 * m - k, m + 2 * k, 0, 0))] = comb(m, k) * (-1) ** k
    return out


def reduce(p: LaurentPoly) -> tuple[ReducedForm, ...]:
    """Normal form modulo the four relations, one entry per q-residue 0..6."""
    # group by (residue, q^7 power) after replacing F3 by 1/(F1 F2)
    groups: dict[tuple[int, int], dict[int, int]] = {}
    for (e1, e2, e3, eq), c in p.items():
        m, r = divmod(eq, 7)
        key = pack((e1 - e3, e2 - e3, 0, 0))
        g = groups.setdefault((r, m), {})
        g[key] = g.get(key, 0) + c
    parts: dict[int, dict[int, int]] = {r: {} for r in range(7)}
    gcache: dict[int, dict[int, int]] = {}
    for (r, m), terms in groups.items():
        if m not in gcache:
            gcache[m] = _g_power(m)
        acc = parts[r]
        for kg, cg in gcache[m].items():
            for kt, ct in terms.items():
                k = kg + kt
                acc[k] = acc.get(k, 0) + cg * ct
    return tuple(ReducedForm(r, LaurentPoly(parts[r])) for r in range(7))


def reduce_single(p: LaurentPoly) -> ReducedForm:
    """Normal form of a polynomial whose q-exponents share one residue mod 7."""
    forms = [f for f in reduce(p) if not f.is_zero()]
    if not forms:
        return ReducedForm(0, ZERO)
    if len(forms) > 1:
        raise ValueError(f"polynomial spans q-residues {[f.residue for f in forms]}")
    return forms[0]


# ---------------------------------------------------------------------------
# evaluation into series
# ---------------------------------------------------------------------------


class _PowerTable:
    """Cached integer powers, negative ones included, of a unit series."""

    def __init__(self, base: TruncatedSeries):
        self.cache = {0: TruncatedSeries.one(base.order), 1: base}
        self.base = base

    def get(self, e: int) -> TruncatedSeries:
        if e not in self.cache:
            if e == -1:
                self.cache[e] = inverse(self.base)
            else:
                half = self.get(int(e / 2))
                sq = mul(half, half)
                self.cache[e] = mul(sq, self.get(1 if e > 0 else -1)) if e % 2 else sq
        return self.cache[e]


def eval_poly(p: LaurentPoly, order: int, step: int = 7) -> TruncatedSeries:
    """Substitute ``F_j -> f_{j,7}(q**step)`` and expand as a series in q.

    ``step=7`` is the meaning of F1, F2, F3 throughout the derivation;
    ``step=1`` evaluates the witness polynomials at argument q.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    if step < 1:
        raise ValueError("step must be positive")
    inner = -(-order // step)
    tables = [_PowerTable(f_jk(j, 7, inner)) for j in (1, 2, 3)]
    acc = [[0] * inner for _ in range(step)]
    for (e1, e2, e3, eq), c in p.items():
        if eq >= order:
            continue
        m, r = divmod(eq, step)
        s = tables[0].get(e1)
        if e2:
            s = mul(s, tables[1].get(e2))
        if e3:
            s = mul(s, tables[2].get(e3))
        row = acc[r]
        sc = s.coeffs
        for i in range(inner - m):
            row[i + m] += c * sc[i]
    out = [0] * order
    for r in range(step):
        out[r::step] = acc[r][: len(range(r, order, step))]
    return TruncatedSeries(out)
