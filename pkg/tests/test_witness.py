import json

import pytest

from ramanujan49.errors import ParseError, ScheduleMismatch, SchemaError
from ramanujan49.partition import partition_numbers
from ramanujan49.qseries import EtaQuotientSpec, eta, eval_eta_quotient
from ramanujan49.series import dissect, eq_upto, mul, power, shift
from ramanujan49.symbolic import ReducedForm, LaurentPoly
from ramanujan49.witness import (
    COLUMNS,
    PROGRESSION_SLOT,
    SCHEDULES,
    WitnessTable,
    component_identity,
    derive_component,
    dump_tables,
    load_errata,
    load_tables,
    n_prefactor,
    rhs_series,
    split_columns,
    verify_theorem,
    verify_witness_7n5,
)


@pytest.fixture(scope="module")
def tables():
    return load_tables()


@pytest.fixture(scope="module")
def document():
    from importlib import resources

    return json.loads(resources.files("ramanujan49").joinpath("data/witness_tables.json").read_text())


def write(tmp_path, doc):
    path = tmp_path / "tables.json"
    path.write_text(json.dumps(doc))
    return path


# --- loading --------------------------------------------------------------


def test_table_spot_values(tables):
    assert tables[19].alpha[0] == -532544
    assert tables[19].gamma[0] == 402306358809680
    assert tables[40].delta[6] == -8
    assert tables[33].beta == (-78156, 3731, -36)
    assert tables[40].gamma[33] == 192


@pytest.mark.parametrize(
    "r,lengths",
    [(19, (17, 3, 34, 7)), (33, (17, 3, 34, 7)), (40, (16, 4, 34, 7))],
)
def test_column_lengths(tables, r, lengths):
    assert tuple(len(tables[r].column(c)) for c in COLUMNS) == lengths


def test_total_value_count(tables):
    # alpha 17+17+16, beta 3+3+4, gamma 34*3, delta 7*3
    assert sum(len(t.column(c)) for t in tables.values() for c in COLUMNS) == 50 + 10 + 102 + 21


def test_wrong_length_is_schema_error(tables):
    t = tables[19]
    with pytest.raises(SchemaError):
        WitnessTable(19, t.alpha[:-1], t.beta, t.gamma, t.delta)


def test_schema_error_on_disk(tmp_path, document):
    doc = json.loads(json.dumps(document))
    col = doc["tables"][0]["columns"]["beta"]
    col["values"].pop()
    col["length"] -= 1
    with pytest.raises(SchemaError):
        load_tables(write(tmp_path, doc))


def test_length_field_mismatch(tmp_path, document):
    doc = json.loads(json.dumps(document))
    doc["tables"][0]["columns"]["beta"]["length"] = 99
    with pytest.raises(SchemaError):
        load_tables(write(tmp_path, doc))


def test_schedule_mismatch_on_disk(tmp_path, document):
    doc = json.loads(json.dumps(document))
    doc["tables"][1]["columns"]["gamma"]["schedule"]["f1"] = [47, -1]
    with pytest.raises(SchemaError):
        load_tables(write(tmp_path, doc))


def test_missing_table(tmp_path, document):
    doc = json.loads(json.dumps(document))
    doc["tables"].pop()
    with pytest.raises(SchemaError):
        load_tables(write(tmp_path, doc))


def test_bad_format_tag(tmp_path, document):
    doc = dict(document, format="something-else")
    with pytest.raises(SchemaError):
        load_tables(write(tmp_path, doc))


@pytest.mark.parametrize("bad", ["12x", "1.5", 1.5, None, True])
def test_non_integer_is_parse_error(tmp_path, document, bad):
    doc = json.loads(json.dumps(document))
    doc["tables"][2]["columns"]["alpha"]["values"][3] = bad
    with pytest.raises(ParseError):
        load_tables(write(tmp_path, doc))


def test_invalid_json(tmp_path):
    path = tmp_path / "t.json"
    path.write_text("{not json")
    with pytest.raises(ParseError):
        load_tables(path)


def test_dump_roundtrip(tmp_path, tables):
    errata = load_errata()
    path = tmp_path / "t.json"
    path.write_text(dump_tables(tables, errata))
    assert load_tables(path) == tables
    assert load_errata(path) == errata
    assert load_tables(path, published=True) == load_tables(published=True)


def test_errata_contents():
    errata = {(e.r, e.column, e.j): (e.published, e.value) for e in load_errata()}
    assert errata == {
        (19, "gamma", 8): (-1701256373500039024, 1701256373500039024),
        (19, "delta", 1): (-4126733575196, 4126733575196),
    }


def test_published_view_differs_only_at_errata(tables):
    published = load_tables(published=True)
    diffs = []
    for r in tables:
        for c in COLUMNS:
            for j, (a, b) in enumerate(zip(tables[r].column(c), published[r].column(c))):
                if a != b:
                    diffs.append((r, c, j))
    assert sorted(diffs) == [(19, "delta", 1), (19, "gamma", 8)]


# --- identities -----------------------------------------------------------


@pytest.mark.parametrize("r", [19, 33, 40])
def test_rhs_constant_term(tables, r):
    p = partition_numbers(r)
    assert 49 * tables[r].total() == p[r]
    assert rhs_series(r, 1)[0] == p[r]


def test_p19_is_490(tables):
    assert rhs_series(19, 1)[0] == 490


@pytest.mark.parametrize("r", [19, 33, 40])
def test_theorem_low_order(r):
    rep = verify_theorem(r, 80)
    assert rep.passed, rep.mismatch


def test_theorem_fails_with_printed_signs():
    rep = verify_theorem(19, 5, load_tables(published=True))
    assert not rep.passed
    assert rep.mismatch.index == 0
    assert rep.mismatch.left == 490


def test_theorem_33_and_40_agree_with_printed_tables():
    published = load_tables(published=True)
    for r in (33, 40):
        assert verify_theorem(r, 40, published).passed


def test_witness_7n5_order_500():
    assert verify_witness_7n5(500).passed


def test_witness_7n5_first_term():
    assert partition_numbers(5)[5] == 7
    assert verify_witness_7n5(2).passed


def test_step1_reduction_of_7n5_rhs():
    n = 300
    rhs = (
        eval_eta_quotient(EtaQuotientSpec.of((7, 3), (1, -4)), n) * 7
        + shift(eval_eta_quotient(EtaQuotientSpec.of((7, 7), (1, -8)), n), 1) * 49
    )
    p1 = eval_eta_quotient(EtaQuotientSpec.of((7, 3), (1, -4)), n) * 7
    assert (rhs % 49) == (p1 % 49)


@pytest.mark.parametrize("s", [2, 4, 5])
def test_f1_cubed_has_no_terms_at_2_4_5(s):
    assert dissect(power(eta(1, 1400), 3), 7, s).is_zero()


@pytest.mark.parametrize("r", [19, 33, 40])
@pytest.mark.parametrize("part", ["p1", "p2"])
def test_component_identities(r, part):
    assert component_identity(r, part, 60).passed


@pytest.mark.parametrize("r", [19, 33, 40])
def test_assembly_identity(tables, r):
    # 7 * (p1 component) + 49 * (p2 component) is the full right side
    n = 60
    s = PROGRESSION_SLOT[r]
    need = 7 * (n - 1) + s + 1
    p1 = dissect(eval_eta_quotient(EtaQuotientSpec.of((7, 3), (1, -4)), need), 7, s)
    p2 = dissect(shift(eval_eta_quotient(EtaQuotientSpec.of((7, 7), (1, -8)), need), 1), 7, s)
    assert eq_upto(p1 * 7 + p2 * 49, rhs_series(r, n, tables), n)


# --- derivation -----------------------------------------------------------


def test_prefactor_bookkeeping():
    assert n_prefactor(4) == {"D": 0, "f49": 24}
    assert n_prefactor(8) == {"D": 0, "f49": 48}


def test_derive_ell4_residue2():
    res = derive_component(4, 2)
    assert res.column == 3
    assert res.symbolic.residue == 2
    assert res.symbolic.coefficients()[(23, 0)] == 7 * -532544
    assert res.prefactor["f49"] == 24
    assert len(res.rejected_columns) == 6
    assert res.order == 400


def test_derive_ell8_residue1_gives_gamma_delta(tables):
    res = derive_component(8, 1)
    cols = split_columns(res.symbolic, 19, "p2")
    assert cols["gamma"] == tables[19].gamma
    assert cols["delta"] == tables[19].delta


@pytest.mark.parametrize("ell,residue,column", [(4, 4, 5), (4, 5, 6)])
def test_derive_selected_columns(ell, residue, column):
    assert derive_component(ell, residue).column == column


def test_derive_bad_residue():
    with pytest.raises(ValueError):
        derive_component(4, 7)


def test_split_columns_off_schedule():
    form = ReducedForm(2, LaurentPoly.monomial(7, f1=1))
    with pytest.raises(ScheduleMismatch):
        split_columns(form, 19, "p1")


def test_split_columns_indivisible():
    form = ReducedForm(2, LaurentPoly.monomial(5, f1=23))
    with pytest.raises(ScheduleMismatch):
        split_columns(form, 19, "p1")


def test_regenerated_equals_shipped(regenerated, tables):
    assert regenerated == tables


def test_regenerated_spot_values(regenerated):
    assert regenerated[40].gamma[33] == 192
    assert regenerated[33].beta == (-78156, 3731, -36)
    assert len(regenerated[19].alpha) == 17


def test_schedules_match_reduced_exponent_families():
    # alpha/beta and gamma/delta never collide after F3 -> 1/(F1 F2)
    for r, cols in SCHEDULES.items():
        for pair in (("alpha", "beta"), ("gamma", "delta")):
            keys = [cols[c].reduced_exponents(j) for c in pair for j in range(cols[c].length)]
            assert len(keys) == len(set(keys))
