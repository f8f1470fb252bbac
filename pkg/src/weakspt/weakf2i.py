"""Weak free-to-interacting maps on the spatial torus T^d, d = 1..3.

The weak map is block diagonal: each cell S^I of T^d with |I| = k carries
a copy of the strong map in dimension d - k.  Blocks are ordered by k and
then lexicographically by cell.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence

from .abgroup import (
    FGAbelianGroup,
    GroupHom,
    KernelRecord,
    cokernel,
    direct_sum,
    kernel,
    render_group,
)
from .kcoeff import Role, TorusDecomposition, cell_role, cells, split_torus, t_dual_free_degree
from .strongf2i import (
    MAX_DIM,
    StrongRecord,
    StrongTable,
    default_table,
    interacting_theory_name,
    weak_kernel_description,
)
from .tenfold import AZClass, header_offset, lookup

SCHEMA = "weakspt.weak_table"
SCHEMA_VERSION = 1
FORMATS = ("markdown", "json", "csv")


@dataclass(frozen=True)
class Block:
    cell_dim: int
    multiplicity: int
    strong_dim: int
    record: StrongRecord
    role: Role
    cells: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class WeakResult:
    az: AZClass
    d: int
    free: TorusDecomposition
    interacting: TorusDecomposition
    map: GroupHom
    kernel: KernelRecord
    cokernel: FGAbelianGroup
    blocks: tuple[Block, ...]

    @property
    def label(self) -> str:
        return self.az.label

    def block(self, role: Role) -> Block | None:
        return next((b for b in self.blocks if b.role is role), None)

    def to_json(self) -> dict:
        return {
            "class": self.label,
            "d": self.d,
            "free": _decomposition_json(self.free),
            "interacting": _decomposition_json(self.interacting),
            "kernel": {"abstract": _group_json(self.kernel.abstract),
                       "description": self.kernel.index_description},
            "cokernel": _group_json(self.cokernel),
            "blocks": [
                {
                    "cell_dim": b.cell_dim,
                    "multiplicity": b.multiplicity,
                    "strong_dim": b.strong_dim,
                    "role": b.role.value,
                    "free": _group_json(b.record.free),
                    "interacting": _group_json(b.record.interacting),
                    "matrix": b.record.matrix_rows(),
                    "kernel": b.record.kernel.index_description,
                    "cokernel": _group_json(b.record.cokernel),
                }
                for b in self.blocks
            ],
        }


def _group_json(g: FGAbelianGroup) -> dict:
    return {"text": render_group(g), "free_rank": g.free_rank, "torsion": list(g.torsion)}


def _decomposition_json(t: TorusDecomposition) -> dict:
    return {
        "theory": t.theory,
        "degree": t.degree,
        "total": _group_json(t.total),
        "summands": [
            {"cell_dim": s.cell_dim, "multiplicity": s.multiplicity, "point_degree": s.point_degree,
             "group": _group_json(s.group), "role": s.role.value}
            for s in t.summands
        ],
    }


def classify(label: str, d: int, table: StrongTable | None = None) -> WeakResult:
    az = lookup(label)
    if not 1 <= d <= MAX_DIM:
        raise ValueError(f"weak tables are available for d = 1..{MAX_DIM} (strong data stops at "
                         f"dimension {MAX_DIM}), got d={d}")
    table = table or default_table()
    strong = [table.record(az.label, m) for m in range(d + 1)]

    free = split_torus(az.flavor.value, t_dual_free_degree(az.s, d), d,
                       lambda k: strong[d - k].free, az.flavor)
    interacting = split_torus(interacting_theory_name(az, str(d + 2)), d + 2, d,
                              lambda k: strong[d - k].interacting)

    all_cells = cells(d)
    blocks = tuple(
        Block(k, comb(d, k), d - k, strong[d - k], cell_role(k, d),
              tuple(c for c in all_cells if len(c) == k))
        for k in range(d + 1)
    )
    h = direct_sum([strong[d - len(c)].map for c in all_cells])
    ker = kernel(h)
    ker = KernelRecord(ker.subgroup_generators, ker.abstract, weak_kernel_description(strong, d))
    return WeakResult(az, d, free, interacting, h, ker, cokernel(h), blocks)


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def _degree(offset: int) -> str:
    return "d" if offset == 0 else f"d{offset:+d}"


def column_headers(label: str) -> tuple[str, ...]:
    az = lookup(label)
    free = f"{az.flavor.value}^{{{_degree(header_offset(az))}}}(T^d)"
    inter = f"{interacting_theory_name(az, 'd+2')}(T^d)"
    return ("d", "ker(F2I)", free, inter, "coker(F2I)", "roles")


def roles_text(r: WeakResult) -> str:
    parts = []
    for b in r.blocks:
        if b.role is Role.WEAK or (b.record.free.is_trivial and b.record.interacting.is_trivial):
            continue
        tag = "strong" if b.role is Role.STRONG else "band"
        parts.append(f"{tag}: {render_group(b.record.free)} → {render_group(b.record.interacting)}")
    return "; ".join(parts)


def _row_cells(r: WeakResult) -> list[str]:
    return [str(r.d), r.kernel.index_description, render_group(r.free.total),
            render_group(r.interacting.total), render_group(r.cokernel), roles_text(r)]


def _check_format(fmt: str) -> None:
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; use one of {', '.join(FORMATS)}")


def markdown_table(label: str, results: Sequence[WeakResult]) -> str:
    head = column_headers(label)
    lines = ["| " + " | ".join(head) + " |", "|" + "---|" * len(head)]
    lines += ["| " + " | ".join(_row_cells(r)) + " |" for r in results]
    return "\n".join(lines) + "\n"


def table_json(label: str, results: Sequence[WeakResult]) -> dict:
    return {"schema": SCHEMA, "version": SCHEMA_VERSION, "class": label,
            "rows": [r.to_json() for r in results]}


CSV_COLUMNS = ("class", "d", "kernel", "kernel_abstract", "free", "interacting", "cokernel", "roles")


def csv_rows(results: Iterable[WeakResult]) -> list[list[str]]:
    return [[r.label, str(r.d), r.kernel.index_description, render_group(r.kernel.abstract),
             render_group(r.free.total), render_group(r.interacting.total),
             render_group(r.cokernel), roles_text(r)] for r in results]


def write_csv(rows: Iterable[Sequence[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    w.writerows(rows)
    return buf.getvalue()


def dump_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def render_table(label: str, dims: Iterable[int], fmt: str = "markdown",
                 table: StrongTable | None = None) -> str:
    _check_format(fmt)
    az = lookup(label)
    results = [classify(az.label, d, table) for d in dims]
    if fmt == "markdown":
        return markdown_table(az.label, results)
    if fmt == "json":
        return dump_json(table_json(az.label, results))
    return write_csv(csv_rows(results))


# ---------------------------------------------------------------------------
# Dislocations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupElement:
    group: FGAbelianGroup
    coords: tuple[int, ...]

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    def __str__(self) -> str:
        body = self.coords[0] if len(self.coords) == 1 else "(" + ", ".join(map(str, self.coords)) + ")"
        return f"{body} in {render_group(self.group)}"


def dislocation_pairing(label: str, d: int, M: Sequence[Sequence[int] | int], B: Sequence[int],
                        table: StrongTable | None = None) -> GroupElement:
    """Σ_i B_i M_i for codimension-one weak indices M_i and Burgers vector B.

    Each M_i lies in the strong interacting group in dimension d - 1, given
    in its standard coordinates (an int is accepted for cyclic groups).
    """
    if not 1 <= d <= MAX_DIM:
        raise ValueError(f"d must lie in 1..{MAX_DIM}, got {d}")
    group = (table or default_table()).record(label, d - 1).interacting
    if len(M) != d or len(B) != d:
        raise ValueError(f"need {d} weak indices and a Burgers vector of length {d}, "
                         f"got {len(M)} and {len(B)}")
    n = group.generators
    vecs = [(m,) if isinstance(m, int) else tuple(m) for m in M]
    if any(len(v) != n for v in vecs):
        raise ValueError(f"each weak index needs {n} coordinate(s) in {render_group(group)}")
    total = [sum(b * v[j] for b, v in zip(B, vecs)) for j in range(n)]
    mods = group.cyclic_orders()
    return GroupElement(group, tuple(x % q if q else x for x, q in zip(total, mods)))
