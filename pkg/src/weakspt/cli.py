"""Command-line interface: ``weakspt {table,strong,coeffs,appendix,pairing}``.

All state comes from flags.  Usage errors exit with status 2 and a
diagnostic on stderr; failed appendix checks exit with status 1.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, TextIO

from . import charclass, strongf2i, weakf2i
from .abgroup import render_group
from .kcoeff import KFlavor, point_coefficient
from .strongf2i import MAX_DIM, DataError
from .tenfold import LABELS, UnknownClassError, lookup

COMMANDS = ("table", "strong", "coeffs", "appendix", "pairing")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class CliConfig:
    command: str
    classes: tuple[str, ...]
    dims: tuple[int, ...]
    format: str
    output: Path | None
    data: Path | None


def parse_range(text: str, what: str = "dims") -> tuple[int, ...]:
    """``"1..3"``, ``"2"`` or ``"-7..0"``; an empty range like ``"3..1"`` is allowed."""
    m = re.fullmatch(r"\s*(-?\d+)\s*(?:\.\.\s*(-?\d+)\s*)?", text)
    if not m:
        raise UsageError(f"malformed {what} range {text!r}; expected N or A..B")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) is not None else lo
    return tuple(range(lo, hi + 1))


def parse_vector(text: str, what: str) -> list[list[int]]:
    """Comma-separated entries, each a colon-separated coordinate tuple."""
    try:
        return [[int(x) for x in item.split(":")] for item in text.split(",")]
    except ValueError:
        raise UsageError(f"malformed vector for {what}: {text!r}; use e.g. 1,0,0 or 1:0,0:1") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # keep argparse's exit status, route through UsageError
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="weakspt", description="Weak free-to-interacting SPT classification tables.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, dims_default: str | None, data_help: str) -> None:
        sp.add_argument("--class", dest="label", help="class label (default: all ten)")
        if dims_default is not None:
            sp.add_argument("--dims", default=dims_default, help=f"range A..B (default {dims_default})")
        sp.add_argument("--format", default="markdown", choices=("markdown", "json", "csv"))
        sp.add_argument("--output", type=Path, help="write here instead of stdout")
        sp.add_argument("--data", type=Path, help=data_help)

    strong_help = "strong table JSON to use instead of the shipped copy"
    common(sub.add_parser("table", help="weak classification tables"), "1..3", strong_help)
    common(sub.add_parser("strong", help="strong point data records"), "0..3", strong_help)
    cp = sub.add_parser("coeffs", help="point coefficients of KO and K")
    cp.add_argument("--degrees", default="0..7", help="range A..B (default 0..7)")
    cp.add_argument("--format", default="markdown", choices=("markdown", "json", "csv"))
    cp.add_argument("--output", type=Path)
    ap = sub.add_parser("appendix", help="characteristic-number and exactness checks")
    ap.add_argument("--format", default="markdown", choices=("markdown", "json"))
    ap.add_argument("--output", type=Path)
    ap.add_argument("--data", type=Path, help="manifold catalog JSON to use instead of the shipped copy")
    pp = sub.add_parser("pairing", help="dislocation pairing of weak indices with a Burgers vector")
    pp.add_argument("--class", dest="label", required=True)
    pp.add_argument("--d", type=int, required=True, help="spatial dimension 1..3")
    pp.add_argument("--M", required=True, help="codimension-one weak indices, one per axis, e.g. 1,0,0")
    pp.add_argument("--B", required=True, help="Burgers vector, e.g. 1,0,0")
    pp.add_argument("--output", type=Path)
    pp.add_argument("--data", type=Path, help=strong_help)
    return p


def _classes(label: str | None) -> tuple[str, ...]:
    if label is None:
        return LABELS
    try:
        return (lookup(label).label,)
    except UnknownClassError as exc:
        raise UsageError(str(exc)) from None


def _dims(text: str, lo: int, hi: int) -> tuple[int, ...]:
    dims = parse_range(text)
    bad = [d for d in dims if not lo <= d <= hi]
    if bad:
        raise UsageError(f"dims {text!r} outside the supported range {lo}..{hi}")
    return dims


def _table(ns, table) -> str:
    classes = _classes(ns.label)
    dims = _dims(ns.dims, 1, MAX_DIM)
    if ns.label is not None:
        return weakf2i.render_table(classes[0], dims, ns.format, table)
    results = {c: [weakf2i.classify(c, d, table) for d in dims] for c in classes}
    if ns.format == "json":
        return weakf2i.dump_json({
            "schema": weakf2i.SCHEMA + "s", "version": weakf2i.SCHEMA_VERSION,
            "tables": [weakf2i.table_json(c, rs) for c, rs in results.items()]})
    if ns.format == "csv":
        return weakf2i.write_csv(row for rs in results.values() for row in weakf2i.csv_rows(rs))
    return "\n".join(f"## {c} (s = {lookup(c).s})\n\n{weakf2i.markdown_table(c, rs)}"
                     for c, rs in results.items())


STRONG_COLUMNS = ("class", "m", "free", "interacting", "matrix", "kernel", "cokernel", "provenance")


def _strong(ns, table) -> str:
    classes = _classes(ns.label)
    dims = _dims(ns.dims, 0, MAX_DIM)
    recs = [strongf2i.strong_record(c, m, table) for c in classes for m in dims]
    docs = [strongf2i.record_to_json(r) for r in recs]
    if ns.format == "json":
        return weakf2i.dump_json({"schema": strongf2i.SCHEMA, "version": strongf2i.SCHEMA_VERSION,
                                  "records": docs})
    cells = [[str(doc[k]) if k != "matrix" else json.dumps(doc[k]) for k in STRONG_COLUMNS] for doc in docs]
    if ns.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(STRONG_COLUMNS)
        w.writerows(cells)
        return buf.getvalue()
    lines = ["| " + " | ".join(STRONG_COLUMNS) + " |", "|" + "---|" * len(STRONG_COLUMNS)]
    lines += ["| " + " | ".join(c) + " |" for c in cells]
    return "\n".join(lines) + "\n"


def _coeffs(ns) -> str:
    degrees = parse_range(ns.degrees, "degrees")
    rows = [(n, render_group(point_coefficient(KFlavor.KO, n)), render_group(point_coefficient(KFlavor.K, n)))
            for n in degrees]
    if ns.format == "json":
        return weakf2i.dump_json({"schema": "weakspt.coefficients", "version": 1,
                                  "rows": [{"n": n, "KO": ko, "K": k} for n, ko, k in rows]})
    if ns.format == "csv":
        return "n,KO,K\n" + "".join(f"{n},{ko},{k}\n" for n, ko, k in rows)
    return "| n | KO^n(pt) | K^n(pt) |\n|---|---|---|\n" + "".join(
        f"| {n} | {ko} | {k} |\n" for n, ko, k in rows)


def _appendix(ns) -> tuple[str, int]:
    cat = charclass.load_catalog(ns.data)
    rep = charclass.appendix_report(cat)
    if ns.format == "json":
        doc = {
            "schema": "weakspt.appendix_report", "version": 1,
            "integrals": rep.integrals,
            "basis": {"invariants": list(rep.basis.invariants), "manifolds": list(rep.basis.manifolds),
                      "matrix": [list(r) for r in rep.basis.matrix], "rank": rep.basis.rank},
            "joints": [{"name": j.name, "passed": j.passed, "detail": j.detail} for j in rep.exactness.joints],
            "abs_factorizes": rep.abs_factorizes, "phi3_agrees": rep.phi3_agrees,
            "phi_rank": rep.phi_rank, "wu": rep.wu, "summary": rep.summary(),
        }
        text = weakf2i.dump_json(doc)
    else:
        text = charclass.format_report(rep)
    return text, 0 if rep.ok else 1


def _pairing(ns, table) -> str:
    label = _classes(ns.label)[0]
    if not 1 <= ns.d <= MAX_DIM:
        raise UsageError(f"--d {ns.d} outside the supported range 1..{MAX_DIM}")
    M = parse_vector(ns.M, "--M")
    B = [v[0] if len(v) == 1 else None for v in parse_vector(ns.B, "--B")]
    if None in B:
        raise UsageError(f"malformed vector for --B: {ns.B!r}; the Burgers vector has integer entries")
    try:
        el = weakf2i.dislocation_pairing(label, ns.d, M, B, table)
    except ValueError as exc:
        raise UsageError(f"malformed vectors: {exc}") from None
    return f"{el} ({'zero' if el.is_zero else 'nonzero'})\n"


def run(argv: Sequence[str], stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    status = 0
    try:
        ns = build_parser().parse_args(list(argv))
        table = strongf2i.load_table(ns.data) if getattr(ns, "data", None) and ns.command != "appendix" else None
        if ns.command == "table":
            text = _table(ns, table)
        elif ns.command == "strong":
            text = _strong(ns, table)
        elif ns.command == "coeffs":
            text = _coeffs(ns)
        elif ns.command == "appendix":
            text, status = _appendix(ns)
        else:
            text = _pairing(ns, table)
    except UsageError as exc:
        print(f"weakspt: error: {exc}", file=stderr)
        return 2
    except (DataError, charclass.CatalogError) as exc:
        print(f"weakspt: error: bad data file: {exc}", file=stderr)
        return 2
    if ns.output is not None:
        ns.output.write_text(text, encoding="utf-8")
    else:
        stdout.write(text)
    return status


def main() -> None:
    sys.exit(run(sys.argv[1:]))
