import json
from dataclasses import replace

import pytest

import published_tables
from weakspt.abgroup import FGAbelianGroup, cokernel, parse_group
from weakspt.kcoeff import point_coefficient
from weakspt.strongf2i import (
    DataError,
    SolveError,
    TableEntry,
    TableRow,
    default_table,
    load_table,
    parse_table,
    realize_map,
    solve_point_data,
    strong_record,
)
from weakspt.tenfold import LABELS, lookup

# Point data peeled by hand from the weak tables: (free, interacting, kernel, cokernel) for m = 0..3.
EXPECTED = {
    "AII": [("Z", "Z", "0", "0"), ("0", "0", "0", "0"), ("Z2", "Z2", "0", "0"), ("Z2", "Z2^3", "0", "Z2^2")],
    "D": [("Z2", "Z2", "0", "0"), ("Z2", "Z2", "0", "0"), ("Z", "Z", "0", "0"), ("0", "0", "0", "0")],
    "BDI": [("Z2", "Z2", "0", "0"), ("Z", "Z8", "8Z", "0"), ("0", "0", "0", "0"), ("0", "0", "0", "0")],
    "AI": [("Z", "Z", "0", "0"), ("0", "Z2", "0", "Z2"), ("0", "0", "0", "0"), ("0", "Z2", "0", "Z2")],
    "CI": [("0", "0", "0", "0"), ("0", "Z2", "0", "Z2"), ("0", "0", "0", "0"), ("Z", "Z4 ⊕ Z2", "4Z", "Z2")],
    "C": [("0", "0", "0", "0"), ("0", "0", "0", "0"), ("Z", "Z^2", "0", "Z"), ("0", "0", "0", "0")],
    "CII": [("0", "0", "0", "0"), ("Z", "Z2", "2Z", "0"), ("0", "0", "0", "0"), ("Z2", "Z2^3", "0", "Z2^2")],
    "DIII": [("0", "0", "0", "0"), ("Z2", "Z2", "0", "0"), ("Z2", "Z2", "0", "0"), ("Z", "Z16", "16Z", "0")],
    "A": [("Z", "Z", "0", "0"), ("0", "0", "0", "0"), ("Z", "Z^2", "0", "Z"), ("0", "0", "0", "0")],
    "AIII": [("0", "0", "0", "0"), ("Z", "Z4", "4Z", "0"), ("0", "0", "0", "0"), ("Z", "Z8 ⊕ Z2", "8Z", "Z2")],
}


@pytest.mark.parametrize("label", LABELS)
def test_stored_records_match_hand_derivation(label):
    for m, (free, inter, ker, coker) in enumerate(EXPECTED[label]):
        r = strong_record(label, m)
        assert r.free == parse_group(free)
        assert r.interacting == parse_group(inter)
        assert r.kernel.index_description == ker
        assert r.cokernel == parse_group(coker)
        assert r.free == point_coefficient(r.az.flavor, m + r.az.s - 2)
        assert r.provenance


def test_record_examples():
    r = strong_record("DIII", 3)
    assert (str(r.free), str(r.interacting), r.matrix_rows()) == ("Z", "Z16", [[1]])
    r = strong_record("AII", 3)
    assert r.kernel.abstract.is_trivial and r.cokernel == parse_group("Z2^2")
    r = strong_record("BDI", 0)
    assert (str(r.free), str(r.interacting), r.matrix_rows()) == ("Z2", "Z2", [[1]])
    r = strong_record("D", 2)
    assert (str(r.free), str(r.interacting), r.matrix_rows()) == ("Z", "Z", [[1]])


def test_minimal_realizations():
    # canonical coordinates list Z2 before Z4, so (x mod 4, 0) reads [[0], [1]]
    assert strong_record("CI", 3).matrix_rows() == [[0], [1]]
    assert strong_record("C", 2).matrix_rows() == [[1], [0]]
    assert strong_record("AII", 3).matrix_rows() == [[1], [0], [0]]
    assert strong_record("AIII", 3).matrix_rows() == [[0], [1]]


def test_realize_map_none_when_impossible():
    # Z2 -> Z8 can never have trivial cokernel
    assert realize_map(parse_group("Z2"), parse_group("Z8"), FGAbelianGroup(), FGAbelianGroup()) is None


def test_diii_surjective_in_dimensions_zero_and_three():
    for m in (0, 3):
        assert cokernel(strong_record("DIII", m).map).is_trivial


def test_out_of_range_dimension():
    with pytest.raises(ValueError, match="0..3"):
        strong_record("AII", 4)


@pytest.mark.parametrize("label", LABELS)
def test_solve_round_trip(label):
    solved = solve_point_data(label, published_tables.rows(label))
    for m, r in enumerate(solved):
        stored = strong_record(label, m)
        assert (r.free, r.interacting, r.map, r.cokernel) == (
            stored.free, stored.interacting, stored.map, stored.cokernel)
        assert r.kernel.index_description == stored.kernel.index_description


def test_solve_interacting_examples():
    got = [r.interacting for r in solve_point_data("AII", published_tables.rows("AII"))]
    assert got == [parse_group(x) for x in ("Z", "0", "Z2", "Z2^3")]
    got = [r.interacting for r in solve_point_data("CI", published_tables.rows("CI"))]
    assert got == [parse_group(x) for x in ("0", "Z2", "0", "Z4 ⊕ Z2")]


@pytest.mark.parametrize("label", ["AI", "CI"])
def test_totals_alone_are_ambiguous(label):
    rows = [TableRow.plain(r.d, r.free.total, r.interacting.total, r.kernel.total, r.cokernel.total)
            for r in published_tables.rows(label)]
    with pytest.raises(SolveError, match="2 distinct"):
        solve_point_data(label, rows)


@pytest.mark.parametrize("label", ["AII", "D", "BDI", "C", "CII", "DIII", "A", "AIII"])
def test_totals_alone_suffice_elsewhere(label):
    rows = [TableRow.plain(r.d, r.free.total, r.interacting.total, r.kernel.total, r.cokernel.total)
            for r in published_tables.rows(label)]
    assert [r.interacting for r in solve_point_data(label, rows)] == \
        [strong_record(label, m).interacting for m in range(4)]


def test_zero_free_column_fails():
    rows = [replace(r, free=TableEntry(FGAbelianGroup())) for r in published_tables.rows("AII")]
    with pytest.raises(SolveError, match="d=1"):
        solve_point_data("AII", rows)


def test_inconsistent_interacting_names_dimension():
    rows = published_tables.rows("BDI")
    rows[1] = replace(rows[1], interacting=TableEntry(parse_group("Z8")))
    with pytest.raises(SolveError, match="d=2"):
        solve_point_data("BDI", rows)


def test_wrong_kernel_description_fails():
    rows = published_tables.rows("BDI")
    rows[0] = replace(rows[0], kernel_description="4Z")
    with pytest.raises(SolveError, match="d=1"):
        solve_point_data("BDI", rows)


def test_missing_rows():
    with pytest.raises(SolveError, match="1..3"):
        solve_point_data("A", published_tables.rows("A")[:2])


# -- data file -------------------------------------------------------------


def _doc():
    return default_table().to_json()


def test_table_json_round_trip():
    doc = _doc()
    assert parse_table(json.loads(json.dumps(doc))).to_json() == doc


def test_load_from_path(tmp_path):
    p = tmp_path / "t.json"
    p.write_text(json.dumps(_doc()), encoding="utf-8")
    t = load_table(p)
    assert t.record("BDI", 1).kernel.index_description == "8Z"


def _tamper(fn):
    doc = _doc()
    rec = next(r for r in doc["records"] if (r["class"], r["m"]) == ("BDI", 1))
    fn(doc, rec)
    return doc


@pytest.mark.parametrize("mutate, message", [
    (lambda d, r: r.update(matrix=[[2]]), "kernel"),
    (lambda d, r: r.update(cokernel="Z2"), "cokernel"),
    (lambda d, r: r.update(free="Z2"), "free group"),
    (lambda d, r: r.update(interacting="Z3", matrix=[[1]]), "kernel"),
    (lambda d, r: r.update(interacting="Z2", matrix=[[1], [0]]), "shape"),
    (lambda d, r: d.update(version=99), "version"),
    (lambda d, r: d["records"].remove(r), "missing"),
    (lambda d, r: d["records"].append(dict(r)), "duplicate"),
    (lambda d, r: r.pop("matrix"), "malformed"),
])
def test_tampered_tables_rejected(mutate, message):
    with pytest.raises(DataError, match=message):
        parse_table(_tamper(mutate))


def test_shipped_file_is_one_record_per_line():
    from importlib import resources
    text = resources.files("weakspt").joinpath("data/strong_f2i.json").read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln.strip().startswith('{"class"')]
    assert len(lines) == 40
    assert lookup("A")  # registry untouched by loading
