"""Finitely generated abelian groups and homomorphisms over the integers.

Everything here is exact: entries are Python ints, and every structural
question (isomorphism type, kernel, cokernel, subgroup membership) is
answered through a Smith normal form.

>>> g = canonical_form(PresentedGroup(2, IntMatrix.from_rows([[2, 0], [0, 3]])))
>>> g.torsion
(6,)
>>> render_group(FGAbelianGroup(1, (2, 2, 2)))
'Z ⊕ Z2^3'
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from itertools import groupby
from typing import Iterable, Sequence


class GroupError(ValueError):
    """Raised for malformed groups, presentations or homomorphisms."""


# ---------------------------------------------------------------------------
# Integer matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix with explicit shape (so 0xN and Nx0 work)."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise GroupError("matrix shape must be nonnegative")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise GroupError(f"entries do not match shape {self.rows}x{self.cols}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(len(data), cols, data)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> IntMatrix:
        return cls.from_rows([[c[i] for c in columns] for i in range(rows)], len(columns))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def diagonal(cls, values: Sequence[int], rows: int | None = None, cols: int | None = None) -> IntMatrix:
        rows = len(values) if rows is None else rows
        cols = len(values) if cols is None else cols
        return cls(rows, cols, tuple(
            tuple(values[i] if i == j and i < len(values) else 0 for j in range(cols))
            for i in range(rows)
        ))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> IntMatrix:
        return IntMatrix.from_columns(self.entries, self.cols) if self.rows else IntMatrix.zeros(self.cols, 0)

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise GroupError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        ocols = other.columns()
        return IntMatrix(self.rows, other.cols, tuple(
            tuple(sum(a * b for a, b in zip(r, c)) for c in ocols) for r in self.entries
        ))

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.cols:
            raise GroupError(f"vector of length {len(v)} does not fit {self.cols} columns")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.entries)

    def hstack(self, other: IntMatrix) -> IntMatrix:
        if self.rows != other.rows:
            raise GroupError("hstack needs equal row counts")
        return IntMatrix(self.rows, self.cols + other.cols,
                         tuple(a + b for a, b in zip(self.entries, other.entries)))

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise GroupError("determinant of a non-square matrix")
        n = self.rows
        a = [list(r) for r in self.entries]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k]), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1

    def is_diagonal(self) -> bool:
        return all(x == 0 for i, r in enumerate(self.entries) for j, x in enumerate(r) if i != j)

    def diagonal_entries(self) -> list[int]:
        return [self.entries[i][i] for i in range(min(self.rows, self.cols))]

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


def block_diagonal(blocks: Sequence[IntMatrix]) -> IntMatrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = [[0] * cols for _ in range(rows)]
    r0 = c0 = 0
    for b in blocks:
        for i, row in enumerate(b.entries):
            out[r0 + i][c0:c0 + b.cols] = row
        r0 += b.rows
        c0 += b.cols
    return IntMatrix(rows, cols, tuple(tuple(r) for r in out))


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


def _pivot(a: list[list[int]], t: int) -> tuple[int, int] | None:
    best = None
    for i in range(t, len(a)):
        for j in range(t, len(a[i])):
            x = abs(a[i][j])
            if x and (best is None or x < best[0]):
                best = (x, i, j)
    return None if best is None else (best[1], best[2])


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, D, V) with U @ m @ V == D in Smith normal form.

    The pivot is always the smallest nonzero absolute value in the active
    submatrix, ties broken by row-major position, so the output is a
    deterministic function of the input.
    """
    nr, nc = m.rows, m.cols
    a = [list(r) for r in m.entries]
    u = [[int(i == j) for j in range(nr)] for i in range(nr)]
    v = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def swap_rows(i: int, k: int) -> None:
        a[i], a[k] = a[k], a[i]
        u[i], u[k] = u[k], u[i]

    def swap_cols(j: int, k: int) -> None:
        for row in a:
            row[j], row[k] = row[k], row[j]
        for row in v:
            row[j], row[k] = row[k], row[j]

    def add_row(dst: int, src: int, q: int) -> None:  # row dst += q * row src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst: int, src: int, q: int) -> None:
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    for t in range(min(nr, nc)):
        while True:
            pos = _pivot(a, t)
            if pos is None:
                break
            swap_rows(t, pos[0])
            swap_cols(t, pos[1])
            p = a[t][t]
            clean = True
            for i in range(t + 1, nr):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    clean = clean and a[i][t] == 0
            for j in range(t + 1, nc):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    clean = clean and a[t][j] == 0
            if not clean:
                continue
            bad = next((i for i in range(t + 1, nr)
                        for j in range(t + 1, nc) if a[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        if _pivot(a, t) is None:
            break

    as_m = lambda rows, c: IntMatrix(len(rows), c, tuple(tuple(r) for r in rows))  # noqa: E731
    return as_m(u, nr), as_m(a, nc), as_m(v, nc)


def _rank_of_diag(d: IntMatrix) -> int:
    return sum(1 for x in d.diagonal_entries() if x)


def integer_nullspace(m: IntMatrix) -> IntMatrix:
    """Columns form a Z-basis of {x : m x = 0}."""
    _, d, v = smith_normal_form(m)
    r = _rank_of_diag(d)
    return IntMatrix.from_columns([v.column(j) for j in range(r, m.cols)], m.cols)


def in_lattice(vec: Sequence[int], lattice: IntMatrix) -> bool:
    """Is ``vec`` an integer combination of the columns of ``lattice``?"""
    if len(vec) != lattice.rows:
        raise GroupError("vector length does not match lattice ambient rank")
    u, d, _ = smith_normal_form(lattice)
    w = u.apply(vec)
    diag = d.diagonal_entries()
    for i, x in enumerate(w):
        di = diag[i] if i < len(diag) else 0
        if di == 0:
            if x:
                return False
        elif x % di:
            return False
    return True


# ---------------------------------------------------------------------------
# Groups
# ---------------------------------------------------------------------------


def _prime_powers(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            q = 1
            while n % p == 0:
                n //= p
                q *= p
            out.append(q)
        p += 1
    if n > 1:
        out.append(n)
    return out


def _invariant_factors(prime_powers: Iterable[int]) -> tuple[int, ...]:
    by_prime: dict[int, list[int]] = {}
    for q in prime_powers:
        p = next(p for p in range(2, q + 1) if q % p == 0)
        by_prime.setdefault(p, []).append(q)
    columns = [sorted(v, reverse=True) for v in by_prime.values()]
    width = max((len(c) for c in columns), default=0)
    factors = []
    for i in range(width):
        factors.append(math.prod(c[i] for c in columns if i < len(c)))
    return tuple(sorted(factors))


@dataclass(frozen=True)
class FGAbelianGroup:
    """Z^free_rank ⊕ Z/d1 ⊕ ... ⊕ Z/dk with d1 | d2 | ... | dk, each di >= 2."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "torsion", tuple(int(t) for t in self.torsion))
        if self.free_rank < 0:
            raise GroupError("free rank must be nonnegative")
        if any(t < 2 for t in self.torsion):
            raise GroupError(f"invariant factors must be >= 2, got {self.torsion}")
        if any(b % a for a, b in zip(self.torsion, self.torsion[1:])):
            raise GroupError(f"invariant factors must form a divisibility chain, got {self.torsion}")

    @classmethod
    def from_cyclic(cls, orders: Iterable[int]) -> FGAbelianGroup:
        """Direct sum of cyclic groups Z/n; n = 0 means Z and n = 1 is dropped."""
        free, pp = 0, []
        for n in orders:
            n = abs(int(n))
            if n == 0:
                free += 1
            else:
                pp.extend(_prime_powers(n))
        return cls(free, _invariant_factors(pp))

    @classmethod
    def trivial(cls) -> FGAbelianGroup:
        return cls()

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    def order(self) -> int | None:
        """Cardinality, or None for infinite groups."""
        return math.prod(self.torsion) if self.is_finite else None

    @property
    def generators(self) -> int:
        return self.free_rank + len(self.torsion)

    def primary_parts(self) -> tuple[int, ...]:
        """Sorted prime-power orders of the primary decomposition."""
        return tuple(sorted(q for t in self.torsion for q in _prime_powers(t)))

    def cyclic_orders(self) -> tuple[int, ...]:
        """Orders of the standard cyclic generators (0 for each Z), free first."""
        return (0,) * self.free_rank + self.torsion

    def standard_presentation(self) -> PresentedGroup:
        n = self.generators
        cols = [tuple(t if i == self.free_rank + j else 0 for i in range(n))
                for j, t in enumerate(self.torsion)]
        return PresentedGroup(n, IntMatrix.from_columns(cols, n))

    def times(self, n: int) -> FGAbelianGroup:
        """Direct sum of ``n`` copies."""
        return direct_sum([self] * n)

    def __add__(self, other: FGAbelianGroup) -> FGAbelianGroup:
        return direct_sum([self, other])

    def __str__(self) -> str:
        return render_group(self)


@dataclass(frozen=True)
class PresentedGroup:
    """Z^generators modulo the span of the columns of ``relations``."""

    generators: int
    relations: IntMatrix

    def __post_init__(self) -> None:
        if self.relations.rows != self.generators:
            raise GroupError(
                f"relation matrix has {self.relations.rows} rows for {self.generators} generators")

    @classmethod
    def free(cls, n: int) -> PresentedGroup:
        return cls(n, IntMatrix.zeros(n, 0))

    def contains_zero(self, vec: Sequence[int]) -> bool:
        """Does ``vec`` represent the identity element?"""
        return in_lattice(vec, self.relations)

    def reduce(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Reduce modulo diagonal relations when the presentation is diagonal."""
        if not self.relations.is_diagonal() and self.relations.cols:
            return tuple(vec)
        out = list(vec)
        for j in range(min(self.relations.rows, self.relations.cols)):
            d = abs(self.relations[j, j])
            if d:
                out[j] %= d
        return tuple(out)


def canonical_form(g: PresentedGroup) -> FGAbelianGroup:
    _, d, _ = smith_normal_form(g.relations)
    diag = [x for x in d.diagonal_entries() if x]
    return FGAbelianGroup(g.generators - len(diag), tuple(x for x in diag if x > 1))


def subgroup_generated(g: PresentedGroup, gens: IntMatrix) -> FGAbelianGroup:
    """Isomorphism type of the subgroup of ``g`` spanned by the columns of ``gens``."""
    k = gens.cols
    syz = integer_nullspace(gens.hstack(g.relations))
    rel = IntMatrix.from_rows([r for r in syz.entries[:k]], syz.cols) if k else IntMatrix.zeros(0, syz.cols)
    return canonical_form(PresentedGroup(k, rel))


def subgroup_contains(g: PresentedGroup, gens: IntMatrix, vec: Sequence[int]) -> bool:
    return in_lattice(vec, gens.hstack(g.relations))


def same_subgroup(g: PresentedGroup, a: IntMatrix, b: IntMatrix) -> bool:
    """Do the column spans of ``a`` and ``b`` agree inside ``g``?"""
    return (all(subgroup_contains(g, b, c) for c in a.columns())
            and all(subgroup_contains(g, a, c) for c in b.columns()))


# ---------------------------------------------------------------------------
# Homomorphisms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupHom:
    """Column j of ``matrix`` is the image of domain generator j."""

    domain: PresentedGroup
    codomain: PresentedGroup
    matrix: IntMatrix

    def __post_init__(self) -> None:
        if (self.matrix.rows, self.matrix.cols) != (self.codomain.generators, self.domain.generators):
            raise GroupError(
                f"matrix shape {self.matrix.rows}x{self.matrix.cols} does not fit "
                f"{self.domain.generators} -> {self.codomain.generators} generators")
        for j, rel in enumerate(self.domain.relations.columns()):
            image = self.matrix.apply(rel)
            if not in_lattice(image, self.codomain.relations):
                raise GroupError(
                    f"not well defined: domain relator {j} {list(rel)} maps to {list(image)}, "
                    "outside the codomain relation lattice")

    @classmethod
    def between(cls, domain: FGAbelianGroup, codomain: FGAbelianGroup,
                rows: Sequence[Sequence[int]]) -> GroupHom:
        """Hom between standard presentations of two canonical groups."""
        return cls(domain.standard_presentation(), codomain.standard_presentation(),
                   IntMatrix.from_rows(rows, domain.generators))

    def __call__(self, vec: Sequence[int]) -> tuple[int, ...]:
        return self.codomain.reduce(self.matrix.apply(vec))

    def compose(self, first: GroupHom) -> GroupHom:
        """self ∘ first."""
        return GroupHom(first.domain, self.codomain, self.matrix @ first.matrix)


@dataclass(frozen=True)
class KernelRecord:
    subgroup_generators: IntMatrix
    abstract: FGAbelianGroup
    index_description: str


def kernel(h: GroupHom) -> KernelRecord:
    n = h.domain.generators
    syz = integer_nullspace(h.matrix.hstack(h.codomain.relations))
    gens = IntMatrix.from_rows(syz.entries[:n], syz.cols) if n else IntMatrix.zeros(0, syz.cols)
    abstract = subgroup_generated(h.domain, gens)
    return KernelRecord(gens, abstract, _describe_kernel(h, gens, abstract))


def _describe_kernel(h: GroupHom, gens: IntMatrix, abstract: FGAbelianGroup) -> str:
    dom = canonical_form(h.domain)
    if abstract.is_trivial:
        return "0"
    if h.domain.generators == 1 and dom.free_rank == 1:
        mult = math.gcd(*gens.entries[0])
        return "Z" if mult == 1 else f"{mult}Z"
    if abstract == dom and all(subgroup_contains(h.domain, gens, e)
                               for e in IntMatrix.identity(h.domain.generators).columns()):
        return render_group(dom)
    return f"{render_group(abstract)} inside {render_group(dom)}"


def cokernel(h: GroupHom) -> FGAbelianGroup:
    return canonical_form(PresentedGroup(
        h.codomain.generators, h.codomain.relations.hstack(h.matrix)))


def image(h: GroupHom) -> FGAbelianGroup:
    return subgroup_generated(h.codomain, h.matrix)


def direct_sum(items: Sequence[FGAbelianGroup] | Sequence[GroupHom]):
    """Direct sum of groups, or block-diagonal sum of homomorphisms."""
    items = list(items)
    if not items or isinstance(items[0], FGAbelianGroup):
        if not all(isinstance(x, FGAbelianGroup) for x in items):
            raise GroupError("direct_sum mixes groups and homomorphisms")
        return FGAbelianGroup.from_cyclic(o for g in items for o in g.cyclic_orders())
    if not all(isinstance(x, GroupHom) for x in items):
        raise GroupError("direct_sum mixes groups and homomorphisms")

    def pres(ps: list[PresentedGroup]) -> PresentedGroup:
        return PresentedGroup(sum(p.generators for p in ps), block_diagonal([p.relations for p in ps]))

    return GroupHom(pres([h.domain for h in items]), pres([h.codomain for h in items]),
                    block_diagonal([h.matrix for h in items]))


# ---------------------------------------------------------------------------
# Rendering and parsing
# ---------------------------------------------------------------------------

_STYLES = {
    "unicode": ("Z", " ⊕ ", lambda n: f"Z{n}", lambda body, k: f"{body}^{k}"),
    "ascii": ("Z", " + ", lambda n: f"Z{n}", lambda body, k: f"{body}^{k}"),
    "latex": (r"\mathbb{Z}", r" \oplus ", lambda n: rf"\mathbb{{Z}}_{{{n}}}", lambda body, k: f"{body}^{{{k}}}"),
}


def render_group(g: FGAbelianGroup, style: str = "unicode") -> str:
    """Human-readable form; equal invariant factors are grouped as powers."""
    try:
        free_sym, sep, cyc, power = _STYLES[style]
    except KeyError:
        raise GroupError(f"unknown render style {style!r}; use one of {sorted(_STYLES)}") from None
    if g.is_trivial:
        return "0"
    parts = []
    if g.free_rank:
        parts.append(free_sym if g.free_rank == 1 else power(free_sym, g.free_rank))
    for n, run in groupby(g.torsion):
        k = len(list(run))
        parts.append(cyc(n) if k == 1 else power(cyc(n), k))
    return sep.join(parts)


_SUBSCRIPTS = str.maketrans("₀₁₂₃₄₅₆₇₈₉", "0123456789")
_SUPERSCRIPTS = str.maketrans("⁰¹²³⁴⁵⁶⁷⁸⁹", "0123456789")
_TERM = re.compile(r"^\(?\s*Z(?:_?\{?(\d+)\}?)?\s*\)?(?:\^\{?(\d+)\}?)?$")


def parse_group(text: str) -> FGAbelianGroup:
    """Inverse of :func:`render_group` (unicode/ascii), tolerant of Z₂³ style."""
    orders: list[int] = []
    for raw in re.split(r"⊕|\+|\\oplus", text):
        term = raw.strip().translate(_SUBSCRIPTS)
        term = re.sub(r"([⁰¹²³⁴⁵⁶⁷⁸⁹]+)$", lambda mm: "^" + mm.group(1).translate(_SUPERSCRIPTS), term)
        term = term.replace(r"\mathbb{Z}", "Z").replace("ℤ", "Z").replace(" ", "")
        if term == "0":
            continue
        mm = _TERM.match(term)
        if not mm:
            raise GroupError(f"cannot parse group term {raw.strip()!r} in {text!r}")
        n = int(mm.group(1)) if mm.group(1) else 0
        orders.extend([n] * (int(mm.group(2)) if mm.group(2) else 1))
    return FGAbelianGroup.from_cyclic(orders)


def primary_counter(g: FGAbelianGroup) -> tuple[int, Counter]:
    """(free rank, multiset of prime powers) for sub-multiset arithmetic."""
    return g.free_rank, Counter(g.primary_parts())


def from_primary(free_rank: int, parts: Counter) -> FGAbelianGroup:
    return FGAbelianGroup(free_rank, _invariant_factors(parts.elements()))
