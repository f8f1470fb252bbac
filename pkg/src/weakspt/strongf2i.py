"""Strong free-to-interacting maps in spatial dimensions 0..3.

The shipped table (``data/strong_f2i.json``) stores, per class and
dimension, the free point group, the interacting point group
℧^{m+2}_H(pt), an integer matrix for the map, and the kernel and
cokernel that matrix must have.  Free groups and the expected kernel and
cokernel are re-derived on load; a record that disagrees is rejected.

:func:`solve_point_data` recovers the same table from weak totals over
T^1, T^2, T^3 by peeling off binomial multiplicities.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from math import comb
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .abgroup import (
    FGAbelianGroup,
    GroupHom,
    KernelRecord,
    cokernel,
    from_primary,
    kernel,
    parse_group,
    primary_counter,
    render_group,
)
from .kcoeff import point_coefficient, t_dual_free_degree, torus_group
from .tenfold import LABELS, AZClass, lookup

MAX_DIM = 3
SCHEMA = "weakspt.strong_f2i"
SCHEMA_VERSION = 1


class DataError(ValueError):
    """A data table is malformed or internally inconsistent."""


class SolveError(ValueError):
    """Table rows admit no strong point data, or more than one."""


@dataclass(frozen=True)
class StrongRecord:
    az: AZClass
    m: int
    free: FGAbelianGroup
    interacting: FGAbelianGroup
    map: GroupHom
    kernel: KernelRecord
    cokernel: FGAbelianGroup
    provenance: str = ""

    @property
    def label(self) -> str:
        return self.az.label

    def matrix_rows(self) -> list[list[int]]:
        return self.map.matrix.to_lists()


def free_point_group(az: AZClass, m: int) -> FGAbelianGroup:
    return point_coefficient(az.flavor, t_dual_free_degree(az.s, m))


def interacting_theory_name(az: AZClass, degree: str) -> str:
    return f"℧^{{{degree}}}_{{{az.structure_group_name}}}"


# ---------------------------------------------------------------------------
# Minimal realizations
# ---------------------------------------------------------------------------


def _column_candidates(codomain: FGAbelianGroup, bound: int) -> list[tuple[int, ...]]:
    ranges = [range(bound + 1)] * codomain.free_rank + [range(q) for q in codomain.torsion]
    cands = list(itertools.product(*ranges))
    cands.sort(key=lambda c: (sum(c), tuple(reversed(c))))
    return cands


def realize_map(free: FGAbelianGroup, interacting: FGAbelianGroup,
                kernel_group: FGAbelianGroup, cokernel_group: FGAbelianGroup) -> GroupHom | None:
    """Smallest matrix (L1 norm, then colex) with the given kernel and cokernel.

    Matrices are taken between standard presentations.  Returns None when no
    candidate in the search box works.
    """
    bound = max([2, *cokernel_group.torsion])
    cols = _column_candidates(interacting, bound)
    n = free.generators
    combos = itertools.product(cols, repeat=n)
    if n > 1:
        combos = sorted(combos, key=lambda cs: (sum(map(sum, cs)), tuple(reversed(sum(cs, ())))))
    for cs in combos:
        rows = [[c[i] for c in cs] for i in range(interacting.generators)]
        try:
            h = GroupHom.between(free, interacting, rows)
        except ValueError:
            continue
        if cokernel(h) == cokernel_group and kernel(h).abstract == kernel_group:
            return h
    return None


@lru_cache(maxsize=None)
def _realize_cached(free, interacting, kernel_group, cokernel_group):
    return realize_map(free, interacting, kernel_group, cokernel_group)


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StrongTable:
    records: Mapping[tuple[str, int], StrongRecord]
    source: str = "<memory>"

    def record(self, label: str, m: int) -> StrongRecord:
        az = lookup(label)
        if not 0 <= m <= MAX_DIM:
            raise ValueError(
                f"strong data is tabulated for dimensions 0..{MAX_DIM} only, got m={m}")
        try:
            return self.records[(az.label, m)]
        except KeyError:
            raise DataError(f"table {self.source} has no record for {az.label}, m={m}") from None

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "version": SCHEMA_VERSION,
            "records": [record_to_json(self.records[k]) for k in sorted(
                self.records, key=lambda k: (LABELS.index(k[0]), k[1]))],
        }


def record_to_json(r: StrongRecord) -> dict:
    return {
        "class": r.label,
        "m": r.m,
        "free": render_group(r.free),
        "interacting": render_group(r.interacting),
        "matrix": r.matrix_rows(),
        "kernel": r.kernel.index_description,
        "cokernel": render_group(r.cokernel),
        "provenance": r.provenance,
    }


def build_record(az: AZClass, m: int, interacting: FGAbelianGroup, rows: Sequence[Sequence[int]],
                 provenance: str = "") -> StrongRecord:
    free = free_point_group(az, m)
    h = GroupHom.between(free, interacting, rows)
    return StrongRecord(az, m, free, interacting, h, kernel(h), cokernel(h), provenance)


def parse_table(doc: Mapping, source: str = "<memory>") -> StrongTable:
    if doc.get("schema") != SCHEMA:
        raise DataError(f"{source}: expected schema {SCHEMA!r}, got {doc.get('schema')!r}")
    if doc.get("version") != SCHEMA_VERSION:
        raise DataError(f"{source}: unsupported schema version {doc.get('version')!r}")
    records: dict[tuple[str, int], StrongRecord] = {}
    for i, raw in enumerate(doc.get("records", [])):
        where = f"{source}: record {i}"
        try:
            az = lookup(raw["class"])
            m = int(raw["m"])
            if not 0 <= m <= MAX_DIM:
                raise DataError(f"{where}: m={m} outside 0..{MAX_DIM}")
            if parse_group(raw["free"]) != free_point_group(az, m):
                raise DataError(f"{where}: free group {raw['free']!r} disagrees with "
                                f"{az.flavor.value}^{t_dual_free_degree(az.s, m)}(pt)")
            rec = build_record(az, m, parse_group(raw["interacting"]), raw["matrix"],
                               raw.get("provenance", ""))
        except (KeyError, TypeError) as exc:
            raise DataError(f"{where}: malformed record ({exc})") from None
        except ValueError as exc:
            if isinstance(exc, DataError):
                raise
            raise DataError(f"{where}: {exc}") from None
        if rec.kernel.index_description != raw["kernel"]:
            raise DataError(f"{where}: matrix has kernel {rec.kernel.index_description}, "
                            f"record claims {raw['kernel']}")
        if rec.cokernel != parse_group(raw["cokernel"]):
            raise DataError(f"{where}: matrix has cokernel {render_group(rec.cokernel)}, "
                            f"record claims {raw['cokernel']}")
        if (az.label, m) in records:
            raise DataError(f"{where}: duplicate record for {az.label}, m={m}")
        records[(az.label, m)] = rec
    missing = [(c, m) for c in LABELS for m in range(MAX_DIM + 1) if (c, m) not in records]
    if missing:
        raise DataError(f"{source}: missing records {missing}")
    return StrongTable(records, source)


def load_table(path: str | Path | None = None) -> StrongTable:
    """Load a strong table; ``None`` means the copy shipped with the package."""
    if path is None:
        return default_table()
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read strong table {path}: {exc}") from None
    return parse_table(doc, str(path))


@lru_cache(maxsize=1)
def default_table() -> StrongTable:
    text = resources.files("weakspt").joinpath("data/strong_f2i.json").read_text(encoding="utf-8")
    return parse_table(json.loads(text), "strong_f2i.json")


def strong_record(label: str, m: int, table: StrongTable | None = None) -> StrongRecord:
    return (table or default_table()).record(label, m)


# ---------------------------------------------------------------------------
# Solving from weak totals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TableEntry:
    """One cell of a weak table.

    ``strong`` and ``band`` hold the parts a table marks as coming from the
    0-cell and from the top cell respectively, when it marks them at all.
    """

    total: FGAbelianGroup
    strong: FGAbelianGroup | None = None
    band: FGAbelianGroup | None = None


@dataclass(frozen=True)
class TableRow:
    d: int
    free: TableEntry
    interacting: TableEntry
    kernel: TableEntry
    cokernel: TableEntry
    kernel_description: str | None = None

    @classmethod
    def plain(cls, d: int, free, interacting, kern, coker) -> TableRow:
        wrap = lambda g: g if isinstance(g, TableEntry) else TableEntry(g)  # noqa: E731
        return cls(d, wrap(free), wrap(interacting), wrap(kern), wrap(coker))


@dataclass
class _Multiset:
    free: int
    parts: Counter = field(default_factory=Counter)

    @classmethod
    def of(cls, g: FGAbelianGroup) -> _Multiset:
        return cls(*primary_counter(g))

    def scaled(self, n: int) -> _Multiset:
        return _Multiset(self.free * n, Counter({k: v * n for k, v in self.parts.items()}))

    def plus(self, other: _Multiset) -> _Multiset:
        return _Multiset(self.free + other.free, self.parts + other.parts)

    def minus(self, other: _Multiset) -> _Multiset | None:
        if other.free > self.free or any(self.parts[k] < v for k, v in other.parts.items()):
            return None
        return _Multiset(self.free - other.free, self.parts - other.parts)

    def group(self) -> FGAbelianGroup:
        return from_primary(self.free, self.parts)

    def submultisets(self) -> Iterable[_Multiset]:
        keys = sorted(self.parts)
        for f in range(self.free + 1):
            for counts in itertools.product(*(range(self.parts[k] + 1) for k in keys)):
                yield _Multiset(f, Counter({k: c for k, c in zip(keys, counts) if c}))


def _peel(totals: Mapping[int, FGAbelianGroup]) -> tuple[list[tuple[FGAbelianGroup, ...]], int]:
    """Point groups X_0..X_3 with total(T^d) = ⊕_k C(d,k) X_{d-k}.

    Returns the candidates and the first dimension at which every attempt
    failed (MAX_DIM + 1 when some candidate survived).
    """
    out, furthest = [], 1
    t1 = _Multiset.of(totals[1])
    for x0 in t1.submultisets():
        xs = [x0, t1.minus(x0)]
        ok = True
        for d in range(2, MAX_DIM + 1):
            lower = _Multiset(0)
            for k in range(1, d + 1):
                lower = lower.plus(xs[d - k].scaled(comb(d, k)))
            xd = _Multiset.of(totals[d]).minus(lower)
            if xd is None:
                furthest = max(furthest, d)
                ok = False
                break
            xs.append(xd)
        if ok:
            out.append(tuple(x.group() for x in xs))
            furthest = MAX_DIM + 1
    return out, furthest


def _annotated(cands: list[tuple[FGAbelianGroup, ...]], entries: Mapping[int, TableEntry]):
    keep = []
    for xs in cands:
        if all((e.strong is None or xs[d] == e.strong) and (e.band is None or xs[0] == e.band)
               for d, e in entries.items()):
            keep.append(xs)
    return keep


def weak_kernel_description(records: Sequence[StrongRecord], d: int) -> str:
    """Kernel of the assembled weak map written as a sum of subgroup blocks.

    ``records[m]`` is the strong record in dimension m.
    """
    parts: list[tuple[str, int]] = []
    for k in range(d + 1):
        desc = records[d - k].kernel.index_description
        if desc == "0":
            continue
        n = comb(d, k)
        if parts and parts[-1][0] == desc:
            parts[-1] = (desc, parts[-1][1] + n)
        else:
            parts.append((desc, n))
    if not parts:
        return "0"

    def power(desc: str, n: int) -> str:
        if n == 1:
            return desc
        return f"{desc}^{n}" if desc == "Z" else f"({desc})^{n}"

    return " ⊕ ".join(power(desc, n) for desc, n in parts)


def solve_point_data(label: str, rows: Sequence[TableRow]) -> list[StrongRecord]:
    """Recover strong records for m = 0..3 from weak rows for d = 1..3."""
    az = lookup(label)
    by_d = {r.d: r for r in rows}
    if sorted(by_d) != list(range(1, MAX_DIM + 1)):
        raise SolveError(f"{label}: need exactly one row for each d in 1..{MAX_DIM}, got {sorted(by_d)}")

    for d in range(1, MAX_DIM + 1):
        expect = torus_group(az.flavor, t_dual_free_degree(az.s, d), d).total
        if by_d[d].free.total != expect:
            raise SolveError(
                f"{label}: no solution at d={d}: free column {render_group(by_d[d].free.total)} "
                f"disagrees with {az.flavor.value}^{t_dual_free_degree(az.s, d)}(T^{d}) = "
                f"{render_group(expect)}")
    free = tuple(free_point_group(az, m) for m in range(MAX_DIM + 1))
    for d in range(1, MAX_DIM + 1):
        e = by_d[d].free
        if (e.strong is not None and e.strong != free[d]) or (e.band is not None and e.band != free[0]):
            raise SolveError(f"{label}: no solution at d={d}: free column annotations disagree "
                             "with the point coefficients")

    column_cands = {}
    for name in ("interacting", "kernel", "cokernel"):
        entries = {d: getattr(by_d[d], name) for d in by_d}
        cands, furthest = _peel({d: e.total for d, e in entries.items()})
        if not cands:
            raise SolveError(f"{label}: no solution at d={furthest}: {name} column cannot be "
                             "split into binomial multiples of point groups")
        cands = _annotated(cands, entries)
        if not cands:
            raise SolveError(f"{label}: no solution at d=1: {name} column annotations rule out "
                             "every splitting")
        column_cands[name] = cands

    solutions = []
    deepest = 0
    for ints, kers, cokers in itertools.product(
            column_cands["interacting"], column_cands["kernel"], column_cands["cokernel"]):
        maps = []
        for m in range(MAX_DIM + 1):
            h = _realize_cached(free[m], ints[m], kers[m], cokers[m])
            if h is None:
                break
            maps.append(h)
        deepest = max(deepest, len(maps))
        if len(maps) == MAX_DIM + 1:
            solutions.append((ints, maps))
    if not solutions:
        raise SolveError(f"{label}: no solution at d={max(deepest, 1)}: no homomorphism of "
                         "point groups has the required kernel and cokernel")
    if len(solutions) > 1:
        raise SolveError(f"{label}: rows admit {len(solutions)} distinct strong data; "
                         "add strong or band-count annotations to pin them down")

    ints, maps = solutions[0]
    note = ("solved from weak tables over T^1..T^3; matrix is the minimal realization "
            "of the forced kernel and cokernel, not a verified elementwise formula")
    records = [StrongRecord(az, m, free[m], ints[m], h, kernel(h), cokernel(h), note)
               for m, h in enumerate(maps)]
    for d in range(1, MAX_DIM + 1):
        want = by_d[d].kernel_description
        if want is not None and weak_kernel_description(records, d) != want:
            raise SolveError(f"{label}: no solution at d={d}: kernel would read "
                             f"{weak_kernel_description(records, d)}, row says {want}")
    return records
