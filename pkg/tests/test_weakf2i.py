import json
from math import comb

import pytest

import published_tables
from weakspt.abgroup import FGAbelianGroup, cokernel, direct_sum, kernel, parse_group
from weakspt.kcoeff import Role, t_dual_free_degree, torus_group
from weakspt.strongf2i import strong_record
from weakspt.tenfold import LABELS, lookup
from weakspt.weakf2i import classify, dislocation_pairing, render_table

CASES = [(c, d) for c in LABELS for d in (1, 2, 3)]


@pytest.mark.parametrize("label, d", CASES)
def test_matches_published_row(label, d):
    r, want = classify(label, d), published_tables.plain(label, d)
    assert r.kernel.index_description == want["kernel"]
    assert r.free.total == parse_group(want["free"])
    assert r.interacting.total == parse_group(want["interacting"])
    assert r.cokernel == parse_group(want["cokernel"])


@pytest.mark.parametrize("label, d", CASES)
def test_colored_parts_match_blocks(label, d):
    row = published_tables.rows(label)[d - 1]
    r = classify(label, d)
    strong, band = r.block(Role.STRONG).record, r.block(Role.BAND_COUNT).record
    for entry, have_s, have_b in ((row.free, strong.free, band.free),
                                  (row.interacting, strong.interacting, band.interacting),
                                  (row.cokernel, strong.cokernel, band.cokernel)):
        if entry.strong is not None:
            assert entry.strong == have_s
        if entry.band is not None:
            assert entry.band == have_b


def test_classify_examples():
    r = classify("AII", 3)
    assert r.free.total == parse_group("Z ⊕ Z2^3 ⊕ Z2")
    assert r.interacting.total == parse_group("Z ⊕ Z2^3 ⊕ Z2^3")
    assert r.kernel.abstract.is_trivial and r.cokernel == parse_group("Z2^2")
    r = classify("AIII", 3)
    assert r.kernel.index_description == "8Z ⊕ (4Z)^3" and r.cokernel == parse_group("Z2")
    r = classify("C", 1)
    assert r.free.total.is_trivial and r.interacting.total.is_trivial
    assert r.kernel.abstract.is_trivial and r.cokernel.is_trivial


@pytest.mark.parametrize("label, d", CASES)
def test_block_formula_equals_assembled_snf(label, d):
    r = classify(label, d)
    strong = [strong_record(label, m) for m in range(d + 1)]
    block_ker = direct_sum([kernel(strong[d - k].map).abstract.times(comb(d, k)) for k in range(d + 1)])
    block_coker = direct_sum([cokernel(strong[d - k].map).times(comb(d, k)) for k in range(d + 1)])
    assert kernel(r.map).abstract == block_ker == r.kernel.abstract
    assert cokernel(r.map) == block_coker == r.cokernel
    assert sum(s.multiplicity for s in r.free.summands) == 2 ** d
    assert sum(s.multiplicity for s in r.interacting.summands) == 2 ** d
    assert sum(b.multiplicity for b in r.blocks) == 2 ** d


@pytest.mark.parametrize("label, d", CASES)
def test_strong_block_embeds(label, d):
    r = classify(label, d)
    b = r.blocks[0]
    assert (b.cell_dim, b.multiplicity, b.strong_dim, b.role) == (0, 1, d, Role.STRONG)
    assert b.record == strong_record(label, d)


@pytest.mark.parametrize("label, d", CASES)
def test_free_side_is_t_dual(label, d):
    az = lookup(label)
    assert classify(label, d).free.total == torus_group(az.flavor, t_dual_free_degree(az.s, d), d).total


def test_block_ordering_and_roles():
    r = classify("BDI", 3)
    assert [(b.cell_dim, b.role) for b in r.blocks] == [
        (0, Role.STRONG), (1, Role.WEAK), (2, Role.WEAK), (3, Role.BAND_COUNT)]
    assert r.blocks[1].cells == ((1,), (2,), (3,))
    assert r.blocks[2].cells == ((1, 2), (1, 3), (2, 3))
    # cells (k ascending, lexicographic): only the three 1-cells and the top cell carry generators
    assert r.map.matrix.rows == 3 + 1 and r.map.matrix.cols == 3 + 1


def test_assembled_matrix_is_block_diagonal_copy():
    r = classify("AIII", 3)
    # order: strong Z -> Z2+Z8 (two rows), then three Z -> Z4 blocks from 2-cells
    assert r.map.matrix.to_lists() == [
        [0, 0, 0, 0], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]


def test_dimension_out_of_range():
    with pytest.raises(ValueError, match="1..3"):
        classify("A", 4)
    with pytest.raises(ValueError):
        classify("A", 0)


def test_render_markdown_bdi():
    text = render_table("BDI", range(1, 4), "markdown")
    lines = text.strip().splitlines()
    assert lines[0] == "| d | ker(F2I) | KO^{d-1}(T^d) | ℧^{d+2}_{Pin^-}(T^d) | coker(F2I) | roles |"
    assert len(lines) == 5
    cells = [[c.strip() for c in ln.strip("|").split("|")] for ln in lines[2:]]
    for d, row in enumerate(cells, start=1):
        want = published_tables.plain("BDI", d)
        assert row[1] == want["kernel"]
        assert parse_group(row[2]) == parse_group(want["free"])
        assert parse_group(row[3]) == parse_group(want["interacting"])
        assert parse_group(row[4]) == parse_group(want["cokernel"])


def test_render_json_a_d1():
    doc = json.loads(render_table("A", range(1, 2), "json"))
    assert doc["schema"] == "weakspt.weak_table" and doc["version"] == 1
    (row,) = doc["rows"]
    assert list(row) == ["class", "d", "free", "interacting", "kernel", "cokernel", "blocks"]
    assert row["free"]["total"]["text"] == "Z"
    nonzero = [s for s in row["free"]["summands"] if s["group"]["text"] != "0"]
    assert [s["role"] for s in nonzero] == ["band_count"]


def test_render_empty_range_is_header_only():
    md = render_table("D", [], "markdown").splitlines()
    assert len(md) == 2 and md[0].startswith("| d |")
    assert json.loads(render_table("D", [], "json"))["rows"] == []
    assert render_table("D", [], "csv").splitlines() == ["class,d,kernel,kernel_abstract,free,interacting,cokernel,roles"]


def test_render_csv_rows():
    lines = render_table("AIII", [1, 3], "csv").splitlines()
    assert lines[1].startswith("AIII,1,4Z,Z,Z,Z4,0,")
    assert lines[2].startswith("AIII,3,8Z ⊕ (4Z)^3,Z^4,Z^4,")


def test_render_rejects_unknown_format():
    with pytest.raises(ValueError, match="format"):
        render_table("A", [1], "yaml")


def test_dislocation_pairing():
    assert not dislocation_pairing("AII", 3, [1, 0, 0], [1, 0, 0]).is_zero
    assert dislocation_pairing("AII", 3, [1, 0, 0], [0, 0, 0]).is_zero
    el = dislocation_pairing("AII", 3, [1, 1, 0], [1, 1, 0])
    assert el.is_zero and el.group == FGAbelianGroup(0, (2,))
    assert str(dislocation_pairing("AII", 3, [[1], [0], [1]], [1, 2, 3])) == "0 in Z2"


def test_dislocation_pairing_validation():
    with pytest.raises(ValueError):
        dislocation_pairing("AII", 3, [1, 0], [1, 0, 0])
    with pytest.raises(ValueError):
        dislocation_pairing("AII", 3, [[1, 0], [0, 0], [0, 0]], [1, 0, 0])
