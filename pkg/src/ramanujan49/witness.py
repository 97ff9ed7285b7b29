"""Witness identities for p(49n+r), r in {19, 33, 40}.

Three jobs live here:

* hold the coefficient tables (``alpha``, ``beta``, ``gamma``, ``delta``)
  and check the identities they define against exact partition numbers;
* re-derive those tables from scratch through the circulant matrix of the
  7-dissection, cofactors and the normal form of :mod:`.symbolic`;
* cross-check every symbolic result against a plain series computation.

Index bookkeeping: ``49n + r = 7(7n + s) + 5`` with ``s = (r - 5) / 7``, so
the r-progression of ``p`` is the s-progression of ``sum p(7n+5) q^n``, which
splits as ``7 * p1 + 49 * p2`` with ``p1 = f7^3/f1^4`` and ``p2 = q f7^7/f1^8``.
The s-component of ``p1`` comes from the ``ell = 4`` power of the dissection
bracket, slot ``s``; that of ``p2`` from ``ell = 8``, slot ``s - 1`` (the
extra factor q shifts the residue by one).
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any, Optional, Union

from .errors import ParseError, PipelineMismatch, ScheduleMismatch, SchemaError
from .partition import partition_numbers_series
from .qseries import EtaQuotientSpec, eta, eval_eta_quotient
from .series import Comparison, TruncatedSeries, dissect, eq_upto, mul, power, shift
from .symbolic import (
    LaurentPoly,
    PolyMatrix,
    ReducedForm,
    build_A_ell,
    build_matrix_W,
    cofactor_first_row,
    eval_poly,
    matrix_from_residue_blocks,
    matrix_power,
    reduce_single,
)

__all__ = [
    "COLUMNS",
    "RESIDUES",
    "PROGRESSION_SLOT",
    "Schedule",
    "SCHEDULES",
    "WitnessTable",
    "Erratum",
    "load_tables",
    "load_errata",
    "dump_tables",
    "lhs_series",
    "rhs_series",
    "CheckReport",
    "verify_theorem",
    "verify_witness_7n5",
    "n_series",
    "n_prefactor",
    "DerivationResult",
    "cofactor_candidates",
    "derive_component",
    "split_columns",
    "component_identity",
    "regenerate_tables",
]

COLUMNS = ("alpha", "beta", "gamma", "delta")
RESIDUES = (19, 33, 40)
PROGRESSION_SLOT = {19: 2, 33: 4, 40: 5}
FORMAT_NAME = "ramanujan49-witness-tables"
FORMAT_VERSION = 1
DEFAULT_WORKING_ORDER = 400


@dataclass(frozen=True)
class Schedule:
    """Exponents of term ``j``: each of f1, f2, f3 is ``offset + slope*j``."""

    length: int
    f1: tuple[int, int]
    f2: tuple[int, int] = (0, 0)
    f3: tuple[int, int] = (0, 0)

    def exponents(self, j: int) -> tuple[int, int, int]:
        return tuple(o + s * j for o, s in (self.f1, self.f2, self.f3))

    def reduced_exponents(self, j: int) -> tuple[int, int]:
        # F3 = 1/(F1 F2)
        a, b, c = self.exponents(j)
        return a - c, b - c

    def as_dict(self) -> dict[str, list[int]]:
        return {"f1": list(self.f1), "f2": list(self.f2), "f3": list(self.f3)}


SCHEDULES: dict[int, dict[str, Schedule]] = {
    19: {
        "alpha": Schedule(17, (23, -1), (0, 2)),
        "beta": Schedule(3, (26, 3), f3=(2, 2)),
        "gamma": Schedule(34, (47, -1), (1, 2)),
        "delta": Schedule(7, (49, 3), f3=(1, 2)),
    },
    33: {
        "alpha": Schedule(17, (22, -1), (0, 2)),
        "beta": Schedule(3, (25, 3), f3=(2, 2)),
        "gamma": Schedule(34, (46, -1), (1, 2)),
        "delta": Schedule(7, (48, 3), f3=(1, 2)),
    },
    40: {
        "alpha": Schedule(16, (21, -1), (1, 2)),
        "beta": Schedule(4, (23, 3), f3=(1, 2)),
        "gamma": Schedule(34, (46, -1), (0, 2)),
        "delta": Schedule(7, (49, 3), f3=(2, 2)),
    },
}


@dataclass(frozen=True)
class WitnessTable:
    r: int
    alpha: tuple[int, ...]
    beta: tuple[int, ...]
    gamma: tuple[int, ...]
    delta: tuple[int, ...]

    def __post_init__(self):
        if self.r not in SCHEDULES:
            raise SchemaError(f"no witness schedule for r={self.r}")
        for name in COLUMNS:
            want = SCHEDULES[self.r][name].length
            got = len(getattr(self, name))
            if got != want:
                raise SchemaError(f"r={self.r} column {name}: expected {want} values, got {got}")

    def column(self, name: str) -> tuple[int, ...]:
        return getattr(self, name)

    def polynomial(self, part: str) -> LaurentPoly:
        """``p1`` gives the alpha/beta sum, ``p2`` the gamma/delta sum."""
        names = {"p1": ("alpha", "beta"), "p2": ("gamma", "delta")}[part]
        terms: dict[tuple[int, int, int, int], int] = {}
        for name in names:
            sched = SCHEDULES[self.r][name]
            for j, v in enumerate(self.column(name)):
                key = sched.exponents(j) + (0,)
                terms[key] = terms.get(key, 0) + v
        return LaurentPoly.from_terms(terms)

    def total(self) -> int:
        return sum(sum(self.column(c)) for c in COLUMNS)


@dataclass(frozen=True)
class Erratum:
    """A printed table entry that the derivation and series check both contradict."""

    r: int
    column: str
    j: int
    published: int
    value: int


Source = Union[str, Path, None]


def _read_document(source: Source) -> dict[str, Any]:
    try:
        if source is None:
            text = resources.files("ramanujan49").joinpath("data/witness_tables.json").read_text()
        else:
            text = Path(source).read_text()
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"table file is not valid JSON: {exc}") from exc


def _parse_int(raw: Any, where: str) -> int:
    if isinstance(raw, bool) or not isinstance(raw, (str, int)):
        raise ParseError(f"{where}: expected a decimal string, got {raw!r}")
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"{where}: {raw!r} is not an integer") from None


def load_errata(source: Source = None) -> list[Erratum]:
    doc = _read_document(source)
    out = []
    for i, e in enumerate(doc.get("errata", [])):
        where = f"errata[{i}]"
        out.append(
            Erratum(
                int(e["r"]),
                e["column"],
                int(e["j"]),
                _parse_int(e["published"], where),
                _parse_int(e["value"], where),
            )
        )
    return out


def load_tables(source: Source = None, *, published: bool = False) -> dict[int, WitnessTable]:
    """Read the witness tables.

    With ``published=True`` the entries listed under ``errata`` are put back
    to their printed values, giving the tables exactly as published.
    """
    doc = _read_document(source)
    if doc.get("format") != FORMAT_NAME:
        raise SchemaError(f"unexpected format tag {doc.get('format')!r}")
    if doc.get("version") != FORMAT_VERSION:
        raise SchemaError(f"unsupported table version {doc.get('version')!r}")
    tables = {}
    for entry in doc.get("tables", []):
        r = int(entry["r"])
        if r not in SCHEDULES:
            raise SchemaError(f"unexpected residue r={r}")
        cols = {}
        for name in COLUMNS:
            try:
                col = entry["columns"][name]
            except KeyError:
                raise SchemaError(f"r={r}: missing column {name}") from None
            sched = SCHEDULES[r][name]
            if col.get("schedule") != sched.as_dict():
                raise SchemaError(f"r={r} column {name}: schedule does not match the identity")
            values = [_parse_int(v, f"r={r} {name}[{j}]") for j, v in enumerate(col["values"])]
            if col.get("length") != len(values):
                raise SchemaError(f"r={r} column {name}: declared length disagrees with values")
            cols[name] = values
        tables[r] = cols
    if sorted(tables) != list(RESIDUES):
        raise SchemaError(f"expected tables for {RESIDUES}, found {sorted(tables)}")
    if published:
        for e in load_errata(source):
            if tables[e.r][e.column][e.j] != e.value:
                raise SchemaError(f"erratum for r={e.r} {e.column}[{e.j}] does not match table value")
            tables[e.r][e.column][e.j] = e.published
    return {r: WitnessTable(r, *(tuple(cols[c]) for c in COLUMNS)) for r, cols in tables.items()}


def dump_tables(tables: dict[int, WitnessTable], errata: Optional[list[Erratum]] = None) -> str:
    """Serialize to the on-disk JSON layout (integers as decimal strings)."""
    doc: dict[str, Any] = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "description": (
            "Coefficients of the mod-49 witness identities for p(49n+r), r in {19, 33, 40}. "
            "Term j of a column multiplies f_{1,7}^a f_{2,7}^b f_{3,7}^c with each exponent "
            "equal to offset + slope*j."
        ),
        "tables": [],
        "errata": [],
    }
    for r in sorted(tables):
        t = tables[r]
        doc["tables"].append(
            {
                "r": r,
                "columns": {
                    name: {
                        "length": len(t.column(name)),
                        "schedule": SCHEDULES[r][name].as_dict(),
                        "values": [str(v) for v in t.column(name)],
                    }
                    for name in COLUMNS
                },
            }
        )
    for e in errata or ():
        doc["errata"].append(
            {"r": e.r, "column": e.column, "j": e.j, "published": str(e.published), "value": str(e.value)}
        )
    return json.dumps(doc, indent=1) + "\n"


# ---------------------------------------------------------------------------
# verification of the identities
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckReport:
    name: str
    passed: bool
    order: int
    mismatch: Optional[Comparison] = None
    detail: dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed


def lhs_series(r: int, order: int) -> TruncatedSeries:
    """``sum p(49n + r) q^n`` from the inverse of ``f_1``."""
    p = partition_numbers_series(49 * (order - 1) + r + 1)
    return dissect(p, 49, r)


def rhs_series(r: int, order: int, tables: Optional[dict[int, WitnessTable]] = None) -> TruncatedSeries:
    """Right side of the witness identity for ``r``, f_{j,7} taken at argument q."""
    table = (tables or load_tables())[r]
    p1 = eval_poly(table.polynomial("p1"), order, step=1)
    p2 = eval_poly(table.polynomial("p2"), order, step=1)
    outer = eval_eta_quotient(EtaQuotientSpec.of((7, 28), (1, -29)), order)
    inner = eval_eta_quotient(EtaQuotientSpec.of((7, 28), (1, -28)), order)
    return mul(outer, p1 + mul(inner, p2)) * 49


def verify_theorem(r: int, order: int, tables: Optional[dict[int, WitnessTable]] = None) -> CheckReport:
    if r not in SCHEDULES:
        raise ValueError(f"r must be one of {RESIDUES}")
    lhs = lhs_series(r, order)
    rhs = rhs_series(r, order, tables)
    cmp = eq_upto(lhs, rhs, order)
    return CheckReport(f"theorem{r}", cmp.equal, order, None if cmp else cmp, {"constant_term": lhs[0]})


def verify_witness_7n5(order: int) -> CheckReport:
    """``sum p(7n+5) q^n = 7 f7^3/f1^4 + 49 q f7^7/f1^8``."""
    p = partition_numbers_series(7 * (order - 1) + 6)
    lhs = dissect(p, 7, 5)
    rhs = (
        eval_eta_quotient(EtaQuotientSpec.of((7, 3), (1, -4)), order) * 7
        + shift(eval_eta_quotient(EtaQuotientSpec.of((7, 7), (1, -8)), order), 1) * 49
    )
    cmp = eq_upto(lhs, rhs, order)
    return CheckReport("witness7n5", cmp.equal, order, None if cmp else cmp)


# ---------------------------------------------------------------------------
# derivation
# ---------------------------------------------------------------------------


def n_series(ell: int, order: int) -> TruncatedSeries:
    """``D^ell / f1^ell`` with ``D = f7^8 / f49``."""
    return eval_eta_quotient(EtaQuotientSpec.of((7, 8 * ell), (49, -ell), (1, -ell)), order)


def n_prefactor(ell: int) -> dict[str, int]:
    """Powers of D and f49 multiplying the cofactor in ``N_k``.

    ``N_k = M1 * CF / det(A)`` with ``M1 = D^ell / f49^ell`` and
    ``det(A) = det(W)^ell = (D / f49^7)^ell``.
    """
    m1 = {"D": ell, "f49": -ell}
    det_a = {"D": ell, "f49": -7 * ell}
    return {k: m1[k] - det_a[k] for k in m1}


@dataclass(frozen=True)
class Candidate:
    column: int
    cofactor_terms: int
    reduced: ReducedForm


def _cofactor_job(args: tuple[int, int]) -> tuple[int, int, ReducedForm]:
    ell, col = args
    cf = cofactor_first_row(_matrix(ell), col)
    return col, len(cf), reduce_single(cf)


@lru_cache(maxsize=None)
def _matrix(ell: int) -> PolyMatrix:
    A = matrix_from_residue_blocks(build_A_ell(ell))
    if matrix_power(build_matrix_W(), ell) != A:
        raise PipelineMismatch(f"W^{ell} differs from the grouped multinomial matrix")
    return A


_candidate_cache: dict[int, tuple[Candidate, ...]] = {}


def cofactor_candidates(ell: int, jobs: int = 1) -> tuple[Candidate, ...]:
    """All seven first-row cofactors of ``A^(ell)``, reduced to normal form."""
    if ell not in _candidate_cache:
        _matrix(ell)
        work = [(ell, col) for col in range(1, 8)]
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as ex:
                done = list(ex.map(_cofactor_job, work))
        else:
            done = [_cofactor_job(w) for w in work]
        _candidate_cache[ell] = tuple(Candidate(c, n, f) for c, n, f in done)
    return _candidate_cache[ell]


@dataclass(frozen=True)
class DerivationResult:
    ell: int
    residue_slot: int
    column: int
    symbolic: ReducedForm
    series: TruncatedSeries
    prefactor: dict[str, int]
    order: int
    rejected_columns: tuple[int, ...]


def derive_component(ell: int, residue: int, order: int = DEFAULT_WORKING_ORDER, jobs: int = 1) -> DerivationResult:
    """Derive ``N_residue`` for the ``ell``-th power of the dissection bracket.

    The cofactor is not picked by index convention: each of the seven
    first-row cofactors is evaluated and compared with the series
    dissection of ``D^ell / f1^ell``, and exactly one must match.
    """
    if ell < 1:
        raise ValueError("ell must be positive")
    if not 0 <= residue < 7:
        raise ValueError("residue must be in 0..6")
    pref = n_prefactor(ell)
    if pref["D"] != 0:
        raise PipelineMismatch("D does not cancel from the cofactor solution")
    f49_part = power(eta(49, order), pref["f49"])
    target = dissect(n_series(ell, order), 7, residue)
    matches, rejected = [], []
    for cand in cofactor_candidates(ell, jobs):
        symbolic = dissect(mul(eval_poly(cand.reduced.embed(), order), f49_part), 7, residue)
        if eq_upto(symbolic, target, target.order):
            matches.append(cand)
        else:
            rejected.append(cand.column)
    if len(matches) != 1:
        raise PipelineMismatch(
            f"ell={ell} residue={residue}: {len(matches)} cofactor columns match the series route"
        )
    chosen = matches[0]
    return DerivationResult(
        ell, residue, chosen.column, chosen.reduced, target, pref, order, tuple(rejected)
    )


def split_columns(form: ReducedForm, r: int, part: str) -> dict[str, tuple[int, ...]]:
    """Read ``alpha, beta`` (part ``p1``) or ``gamma, delta`` (``p2``) off a reduced form.

    For ``p1`` the reduced cofactor is ``7 q^s`` times the witness
    polynomial; for ``p2`` the q-shift is carried by the generating
    function, so the reduced cofactor is the polynomial itself.
    """
    names, scale = {"p1": (("alpha", "beta"), 7), "p2": (("gamma", "delta"), 1)}[part]
    slot = {}
    cols = {}
    for name in names:
        sched = SCHEDULES[r][name]
        cols[name] = [0] * sched.length
        for j in range(sched.length):
            slot[sched.reduced_exponents(j)] = (name, j)
    for exps, c in form.coefficients().items():
        if exps not in slot:
            raise ScheduleMismatch(f"r={r} {part}: monomial F1^{exps[0]} F2^{exps[1]} is off schedule")
        if c % scale:
            raise ScheduleMismatch(f"r={r} {part}: coefficient {c} of F1^{exps[0]} F2^{exps[1]} not divisible by {scale}")
        name, j = slot[exps]
        cols[name][j] = c // scale
    return {k: tuple(v) for k, v in cols.items()}


def component_identity(r: int, part: str, order: int, tables: Optional[dict[int, WitnessTable]] = None) -> CheckReport:
    """``sum p1(7n+s) q^n`` (or ``p2``) against its witness form at argument q."""
    s = PROGRESSION_SLOT[r]
    table = (tables or load_tables())[r]
    need = 7 * (order - 1) + s + 1
    if part == "p1":
        gf = eval_eta_quotient(EtaQuotientSpec.of((7, 3), (1, -4)), need)
        quot = eval_eta_quotient(EtaQuotientSpec.of((7, 28), (1, -29)), order) * 7
    else:
        gf = shift(eval_eta_quotient(EtaQuotientSpec.of((7, 7), (1, -8)), need), 1)
        quot = eval_eta_quotient(EtaQuotientSpec.of((7, 56), (1, -57)), order)
    lhs = dissect(gf, 7, s)
    rhs = mul(quot, eval_poly(table.polynomial(part), order, step=1))
    cmp = eq_upto(lhs, rhs, order)
    return CheckReport(f"component{r}{part}", cmp.equal, order, None if cmp else cmp)


def regenerate_tables(order: int = DEFAULT_WORKING_ORDER, jobs: int = 1) -> dict[int, WitnessTable]:
    """Rebuild all three witness tables from the matrix derivation."""
    out = {}
    for r in RESIDUES:
        s = PROGRESSION_SLOT[r]
        p1 = derive_component(4, s, order, jobs)
        p2 = derive_component(8, (s - 1) % 7, order, jobs)
        cols = split_columns(p1.symbolic, r, "p1")
        cols.update(split_columns(p2.symbolic, r, "p2"))
        out[r] = WitnessTable(r, *(cols[c] for c in COLUMNS))
    return out
