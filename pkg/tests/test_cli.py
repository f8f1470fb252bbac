import io
import json
import subprocess
import sys

import pytest

import published_tables
from weakspt.abgroup import parse_group
from weakspt.cli import UsageError, parse_range, parse_vector, run
from weakspt.strongf2i import default_table
from weakspt.tenfold import LABELS
from weakspt.weakf2i import dump_json


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_parse_range():
    assert parse_range("1..3") == (1, 2, 3)
    assert parse_range("2") == (2,)
    assert parse_range("-4..-1") == (-4, -3, -2, -1)
    assert parse_range("3..1") == ()
    with pytest.raises(UsageError):
        parse_range("1-3")


def test_parse_vector():
    assert parse_vector("1,0,0", "--M") == [[1], [0], [0]]
    assert parse_vector("1:0,0:1", "--M") == [[1, 0], [0, 1]]
    with pytest.raises(UsageError, match="--M"):
        parse_vector("1,x", "--M")


def test_table_aii_markdown():
    code, out, _ = call("table", "--class", "AII", "--format", "markdown")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 5
    for d, ln in enumerate(lines[2:], start=1):
        cells = [c.strip() for c in ln.strip("|").split("|")]
        want = published_tables.plain("AII", d)
        assert cells[0] == str(d)
        assert cells[1] == want["kernel"]
        assert parse_group(cells[2]) == parse_group(want["free"])
        assert parse_group(cells[3]) == parse_group(want["interacting"])
        assert parse_group(cells[4]) == parse_group(want["cokernel"])


def test_all_classes_markdown_has_headings():
    code, out, _ = call("table")
    assert code == 0
    assert [ln for ln in out.splitlines() if ln.startswith("## ")] == [
        f"## {c} (s = {s})" for c, s in (
            ("A", 0), ("AIII", 1), ("CII", -3), ("AII", -2), ("DIII", -1),
            ("D", 0), ("BDI", 1), ("AI", 2), ("CI", 3), ("C", 4))]


def test_all_classes_json_and_csv():
    code, out, _ = call("table", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["schema"] == "weakspt.weak_tables"
    assert [t["class"] for t in doc["tables"]] == list(LABELS)
    code, out, _ = call("table", "--format", "csv")
    assert code == 0 and len(out.strip().splitlines()) == 1 + 30


@pytest.mark.parametrize("fmt", ["markdown", "json", "csv"])
def test_deterministic_output(fmt):
    a = call("table", "--format", fmt)[1]
    b = call("table", "--format", fmt)[1]
    assert a == b


def test_json_round_trip_is_byte_identical():
    _, out, _ = call("table", "--class", "CI", "--format", "json")
    assert dump_json(json.loads(out)) == out


def test_appendix_summary():
    code, out, _ = call("appendix")
    assert code == 0
    assert out.strip().splitlines()[-1] == "3/3 generators independent; 2/2 exactness joints pass"
    code, out, _ = call("appendix", "--format", "json")
    assert code == 0 and json.loads(out)["summary"].endswith("2/2 exactness joints pass")


def test_appendix_failing_catalog_exits_1(tmp_path):
    from importlib import resources
    doc = json.loads(resources.files("weakspt").joinpath("data/appendix.json").read_text(encoding="utf-8"))
    gen = next(g for g in doc["generators"] if g["name"] == "CP2")
    gen["sm_V"] = [0, 1, 0]
    p = tmp_path / "cat.json"
    p.write_text(json.dumps(doc), encoding="utf-8")
    code, out, _ = call("appendix", "--data", str(p))
    assert code == 1 and "1/2 exactness joints pass" in out


def test_unknown_class():
    code, out, err = call("table", "--class", "XYZ")
    assert code == 2 and out == ""
    assert "XYZ" in err and all(lab in err for lab in LABELS)


def test_bad_dims():
    code, _, err = call("table", "--dims", "0..2")
    assert code == 2 and "dims" in err and "1..3" in err
    code, _, err = call("table", "--dims", "one")
    assert code == 2 and "malformed dims" in err
    code, _, err = call("strong", "--dims", "0..4")
    assert code == 2 and "0..3" in err


def test_malformed_vectors():
    code, _, err = call("pairing", "--class", "AII", "--d", "3", "--M", "1,a,0", "--B", "1,0,0")
    assert code == 2 and "malformed vector for --M" in err
    code, _, err = call("pairing", "--class", "AII", "--d", "3", "--M", "1,0", "--B", "1,0,0")
    assert code == 2 and "malformed vectors" in err
    code, _, err = call("pairing", "--class", "AII", "--d", "3", "--M", "1,0,0", "--B", "1:1,0,0")
    assert code == 2 and "--B" in err


def test_distinct_messages():
    errs = {call("table", "--class", "XYZ")[2], call("table", "--dims", "9")[2],
            call("pairing", "--class", "AII", "--d", "3", "--M", "x", "--B", "1")[2]}
    assert len(errs) == 3


def test_unknown_flag_is_usage_error():
    code, _, err = call("table", "--colour")
    assert code == 2 and err.startswith("weakspt: error:")


def test_pairing():
    code, out, _ = call("pairing", "--class", "AII", "--d", "3", "--M", "1,0,0", "--B", "1,0,0")
    assert code == 0 and out == "1 in Z2 (nonzero)\n"
    code, out, _ = call("pairing", "--class", "AII", "--d", "3", "--M", "1,1,0", "--B", "1,1,0")
    assert code == 0 and out == "0 in Z2 (zero)\n"
    code, _, err = call("pairing", "--class", "AII", "--d", "4", "--M", "1", "--B", "1")
    assert code == 2 and "1..3" in err


def test_coeffs():
    code, out, _ = call("coeffs", "--degrees=-4..-1")
    assert code == 0
    rows = [[c.strip() for c in ln.strip("|").split("|")] for ln in out.strip().splitlines()[2:]]
    assert rows == [["-4", "Z", "Z"], ["-3", "0", "0"], ["-2", "Z2", "Z"], ["-1", "Z2", "0"]]
    code, out, _ = call("coeffs", "--format", "json")
    assert [r["KO"] for r in json.loads(out)["rows"]] == ["Z", "0", "0", "0", "Z", "0", "Z2", "Z2"]


def test_strong_formats():
    code, out, _ = call("strong", "--class", "DIII", "--dims", "3", "--format", "json")
    (rec,) = json.loads(out)["records"]
    assert code == 0 and (rec["free"], rec["interacting"], rec["matrix"]) == ("Z", "Z16", [[1]])
    code, out, _ = call("strong", "--format", "csv")
    assert code == 0 and len(out.strip().splitlines()) == 1 + 40


def test_output_file(tmp_path):
    p = tmp_path / "aiii.csv"
    code, out, _ = call("table", "--class", "AIII", "--format", "csv", "--output", str(p))
    assert code == 0 and out == ""
    assert p.read_text(encoding="utf-8") == call("table", "--class", "AIII", "--format", "csv")[1]


def test_data_override(tmp_path):
    doc = default_table().to_json()
    p = tmp_path / "strong.json"
    p.write_text(json.dumps(doc), encoding="utf-8")
    assert call("table", "--data", str(p))[1] == call("table")[1]
    rec = next(r for r in doc["records"] if (r["class"], r["m"]) == ("DIII", 3))
    rec["matrix"] = [[2]]
    p.write_text(json.dumps(doc), encoding="utf-8")
    code, out, err = call("table", "--data", str(p))
    assert code == 2 and out == "" and "bad data file" in err


def test_missing_data_file(tmp_path):
    code, _, err = call("table", "--data", str(tmp_path / "nope.json"))
    assert code == 2 and "nope.json" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "weakspt", "table", "--class", "BDI"],
                          capture_output=True, text=True, encoding="utf-8")
    assert proc.returncode == 0
    assert proc.stdout == call("table", "--class", "BDI")[1]
    proc = subprocess.run([sys.executable, "-m", "weakspt", "table", "--class", "XYZ"],
                          capture_output=True, text=True)
    assert proc.returncode == 2 and "weakspt: error:" in proc.stderr
