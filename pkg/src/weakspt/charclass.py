"""Mod-2 characteristic numbers and the Pin^{c̃+} appendix checks.

Cohomology rings are truncated polynomial algebras over F2, e.g.
H*(RP^4) = F2[a]/(a^5) with |a| = 1.  A total Stiefel-Whitney class is a
polynomial with constant term 1; its degree-k part is w_k.  Integration
reads off the coefficient of the top monomial.

The catalog (``data/appendix.json``) lists the manifolds, their auxiliary
bundles and the bordism data that no cohomology computation can supply:
Arf invariants, the sphere-bundle Smith values and the twisted ABS values.
Each such datum carries a citation string.

>>> m = total_sw("RP(4)")
>>> str(m.w(1)), str(m.w(2))
('a', '0')
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .abgroup import FGAbelianGroup, GroupHom, IntMatrix, PresentedGroup, kernel, parse_group, same_subgroup

SCHEMA = "weakspt.appendix"
SCHEMA_VERSION = 1
MAX_N = 4


class CatalogError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Rings and polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GradedF2Ring:
    generators: tuple[tuple[str, int], ...]
    truncations: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        names = [g for g, _ in self.generators]
        if len(set(names)) != len(names):
            raise CatalogError(f"duplicate generator names {names}")
        if [t for t, _ in self.truncations] != names:
            raise CatalogError("every generator needs exactly one truncation, in order")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(g for g, _ in self.generators)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(d for _, d in self.generators)

    @property
    def caps(self) -> tuple[int, ...]:
        return tuple(p for _, p in self.truncations)

    @property
    def top_monomial(self) -> tuple[int, ...]:
        return tuple(p - 1 for p in self.caps)

    @property
    def top_degree(self) -> int:
        return self.degree_of(self.top_monomial)

    def degree_of(self, mono: Sequence[int]) -> int:
        return sum(e * d for e, d in zip(mono, self.degrees))

    def poly(self, monos: Iterable[Sequence[int]]) -> GradedF2Poly:
        """Sum of monomials (mod 2); monomials past a truncation vanish."""
        terms: set[tuple[int, ...]] = set()
        for mono in monos:
            mono = tuple(mono)
            if all(e < p for e, p in zip(mono, self.caps)):
                terms ^= {mono}
        return GradedF2Poly(self, frozenset(terms))

    def one(self) -> GradedF2Poly:
        return self.poly([(0,) * len(self.generators)])

    def zero(self) -> GradedF2Poly:
        return self.poly([])

    def gen(self, name: str) -> GradedF2Poly:
        try:
            i = self.names.index(name)
        except ValueError:
            raise CatalogError(f"no generator {name!r} in ring with {self.names}") from None
        return self.poly([tuple(int(j == i) for j in range(len(self.names)))])

    def parse(self, text: str) -> GradedF2Poly:
        """Parse e.g. ``"1 + a + a^4"`` or ``"b1*b2"``."""
        out = self.zero()
        for term in text.split("+"):
            term = term.strip()
            if term in ("0", ""):
                if term == "" and len(text.split("+")) > 1:
                    raise CatalogError(f"empty term in polynomial {text!r}")
                continue
            mono = self.one()
            if term != "1":
                for factor in term.split("*"):
                    m = re.fullmatch(r"\s*([A-Za-z]\w*)\s*(?:\^\s*(\d+))?\s*", factor)
                    if not m:
                        raise CatalogError(f"cannot parse factor {factor!r} in {text!r}")
                    mono = mono * self.gen(m.group(1)) ** int(m.group(2) or 1)
            out = out + mono
        return out


@dataclass(frozen=True)
class GradedF2Poly:
    ring: GradedF2Ring
    terms: frozenset[tuple[int, ...]]

    def _check(self, other: GradedF2Poly) -> None:
        if other.ring != self.ring:
            raise CatalogError("polynomials live in different rings")

    def __add__(self, other: GradedF2Poly) -> GradedF2Poly:
        self._check(other)
        return GradedF2Poly(self.ring, self.terms ^ other.terms)

    def __mul__(self, other: GradedF2Poly) -> GradedF2Poly:
        return poly_mul(self, other)

    def __pow__(self, n: int) -> GradedF2Poly:
        out = self.ring.one()
        for _ in range(n):
            out = out * self
        return out

    def homogeneous(self, k: int) -> GradedF2Poly:
        return GradedF2Poly(self.ring, frozenset(t for t in self.terms if self.ring.degree_of(t) == k))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return not self.is_zero

    def __str__(self) -> str:
        if not self.terms:
            return "0"

        def mono(t: tuple[int, ...]) -> str:
            fs = [n if e == 1 else f"{n}^{e}" for n, e in zip(self.ring.names, t) if e]
            return "*".join(fs) or "1"

        order = sorted(self.terms, key=lambda t: (self.ring.degree_of(t), tuple(-e for e in t)))
        return " + ".join(mono(t) for t in order)


def poly_mul(p: GradedF2Poly, q: GradedF2Poly) -> GradedF2Poly:
    p._check(q)
    return p.ring.poly(tuple(a + b for a, b in zip(s, t)) for s in p.terms for t in q.terms)


# ---------------------------------------------------------------------------
# Manifolds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Bundle:
    rank: int
    total_sw: GradedF2Poly
    citation: str = ""

    def w(self, k: int) -> GradedF2Poly:
        return self.total_sw.homogeneous(k)


@dataclass(frozen=True)
class ManifoldModel:
    name: str
    dim: int
    ring: GradedF2Ring
    tangent_total_sw: GradedF2Poly
    bundles: Mapping[str, Bundle] = field(default_factory=dict)

    def w(self, k: int) -> GradedF2Poly:
        return self.tangent_total_sw.homogeneous(k)

    def bundle(self, name: str) -> Bundle:
        try:
            return self.bundles[name]
        except KeyError:
            raise CatalogError(f"{self.name} has no bundle {name!r}; known: {sorted(self.bundles)}") from None

    def with_bundle(self, name: str, bundle: Bundle) -> ManifoldModel:
        return replace(self, bundles={**self.bundles, name: bundle})


_FAMILY = re.compile(r"(RP|CP)\((\d+)\)")


def _projective(kind: str, n: int, suffix: str = "") -> ManifoldModel:
    if not 1 <= n <= MAX_N:
        raise CatalogError(f"{kind}({n}) is outside the catalog (n must be 1..{MAX_N})")
    gen, deg = ("a", 1) if kind == "RP" else ("b", 2)
    ring = GradedF2Ring(((gen + suffix, deg),), ((gen + suffix, n + 1),))
    tangent = (ring.one() + ring.gen(gen + suffix)) ** (n + 1)
    return ManifoldModel(f"{kind}{n}", deg * n, ring, tangent)


def pullback(p: GradedF2Poly, target: GradedF2Ring, offset: int) -> GradedF2Poly:
    """Push exponents of ``p`` into ``target`` starting at generator ``offset``."""
    width = len(target.generators)
    k = len(p.ring.generators)
    return target.poly((0,) * offset + t + (0,) * (width - offset - k) for t in p.terms)


def total_sw(family: str) -> ManifoldModel:
    """Model of ``RP(n)``, ``CP(n)`` or a binary product such as ``CP(1)xCP(1)``."""
    factors = [f.strip() for f in family.split("x")]
    if len(factors) > 2:
        raise CatalogError(f"only binary products are supported, got {family!r}")
    parsed = []
    for f in factors:
        m = _FAMILY.fullmatch(f)
        if not m:
            raise CatalogError(f"unknown manifold family {f!r}; use RP(n), CP(n) or a binary product")
        parsed.append((m.group(1), int(m.group(2))))
    if len(parsed) == 1:
        return _projective(*parsed[0])
    parts = [_projective(kind, n, str(i + 1)) for i, (kind, n) in enumerate(parsed)]
    ring = GradedF2Ring(sum((p.ring.generators for p in parts), ()),
                        sum((p.ring.truncations for p in parts), ()))
    tangent = pullback(parts[0].tangent_total_sw, ring, 0) * pullback(parts[1].tangent_total_sw, ring, 1)
    return ManifoldModel("x".join(p.name for p in parts), sum(p.dim for p in parts), ring, tangent)


def integrate(m: ManifoldModel, c: GradedF2Poly) -> int:
    if c.ring != m.ring:
        raise CatalogError("class does not live in the manifold's cohomology ring")
    return int(m.ring.top_monomial in c.terms)


def xi_invariant(m: ManifoldModel, bundle_name: str) -> int:
    """∫ w2(E)^2 for the auxiliary rank-2 bundle E."""
    return integrate(m, m.bundle(bundle_name).w(2) ** 2)


def wu_check(m: ManifoldModel) -> GradedF2Poly:
    """v2 = w2 + w1^2, which vanishes on every closed surface."""
    if m.dim != 2:
        raise CatalogError(f"wu_check needs a surface, {m.name} has dimension {m.dim}")
    return m.w(2) + m.w(1) ** 2


def f2_rank(rows: Sequence[Sequence[int]]) -> int:
    work = [[x % 2 for x in r] for r in rows]
    rank, cols = 0, len(work[0]) if work else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(work)) if work[i][c]), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        for i in range(len(work)):
            if i != rank and work[i][c]:
                work[i] = [x ^ y for x, y in zip(work[i], work[rank])]
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------


def _bundle_from_spec(m: ManifoldModel, spec: Mapping) -> Bundle:
    if "total_sw" in spec:
        total = m.ring.parse(spec["total_sw"])
    elif "c1" in spec:
        # complex line bundle: w2 = c1 mod 2
        total = m.ring.one()
        for g, coeff in spec["c1"].items():
            if m.ring.degrees[m.ring.names.index(g)] != 2:
                raise CatalogError(f"c1 must be written in degree-2 generators, {g!r} is not")
            if coeff % 2:
                total = total + m.ring.gen(g)
    else:
        raise CatalogError(f"bundle {spec.get('name')!r} needs total_sw or c1")
    if (0,) * len(m.ring.generators) not in total.terms:
        raise CatalogError(f"bundle {spec.get('name')!r} has no unit constant term")
    return Bundle(int(spec["rank"]), total, spec.get("citation", ""))


@dataclass(frozen=True)
class Generator:
    name: str
    manifold: str
    bundle: str
    abs_minus2: int
    citation: str


@dataclass(frozen=True)
class SurfaceGenerator:
    name: str
    manifold: str
    bundle: str
    phi: tuple[int, int, int]
    citation: str


@dataclass(frozen=True)
class AppendixChainData:
    """Smith sequence Ω4^{Pin+} → Ω4^{Pin^{c̃+}} → Ω2^{Spin}(BO(2)) → Ω3^{Pin+}.

    Ω4^{Pin^{c̃+}} is written in the basis of ``generators`` and the spin
    bordism of BO(2) in the (φ1, φ2, φ3) basis.
    """

    groups: Mapping[str, FGAbelianGroup]
    i: GroupHom
    sm_V: GroupHom
    delta: GroupHom
    generators: tuple[Generator, ...]
    surfaces: tuple[SurfaceGenerator, ...]

    @property
    def phi_values(self) -> tuple[tuple[int, int, int], ...]:
        return tuple(s.phi for s in self.surfaces)

    @property
    def abs_values(self) -> dict[str, int]:
        return {g.name: g.abs_minus2 for g in self.generators}

    def with_sm_V_column(self, generator: str, image: Sequence[int]) -> AppendixChainData:
        j = [g.name for g in self.generators].index(generator)
        rows = [list(r) for r in self.sm_V.matrix.entries]
        for r, x in zip(rows, image):
            r[j] = x
        return replace(self, sm_V=GroupHom(self.sm_V.domain, self.sm_V.codomain, IntMatrix.from_rows(rows)))


@dataclass(frozen=True)
class Catalog:
    manifolds: Mapping[str, ManifoldModel]
    chain: AppendixChainData
    source: str = "<memory>"

    def manifold(self, name: str) -> ManifoldModel:
        try:
            return self.manifolds[name]
        except KeyError:
            raise CatalogError(f"{name!r} is not in the closed manifold catalog; "
                               f"known: {', '.join(self.manifolds)}") from None

    def surfaces(self) -> list[ManifoldModel]:
        return [m for m in self.manifolds.values() if m.dim == 2]


def _hom(groups: Mapping[str, FGAbelianGroup], src: str, dst: str, rows) -> GroupHom:
    return GroupHom.between(groups[src], groups[dst], rows)


def parse_catalog(doc: Mapping, source: str = "<memory>") -> Catalog:
    if doc.get("schema") != SCHEMA or doc.get("version") != SCHEMA_VERSION:
        raise CatalogError(f"{source}: expected {SCHEMA} version {SCHEMA_VERSION}, got "
                           f"{doc.get('schema')!r} version {doc.get('version')!r}")
    try:
        manifolds: dict[str, ManifoldModel] = {}
        for entry in doc["manifolds"]:
            m = replace(total_sw(entry["family"]), name=entry["name"])
            for b in entry.get("bundles", []):
                m = m.with_bundle(b["name"], _bundle_from_spec(m, b))
            manifolds[entry["name"]] = m
        ch = doc["chain"]
        groups = {k: parse_group(v) for k, v in ch["groups"].items()}
        gens = tuple(Generator(g["name"], g["manifold"], g["bundle"], int(g["abs_minus2"]),
                               g.get("citation", "")) for g in doc["generators"])
        surfs = tuple(SurfaceGenerator(s["name"], s["manifold"], s["bundle"],
                                       tuple(int(x) for x in s["phi"]), s.get("citation", ""))
                      for s in doc["surface_generators"])
        sm_cols = [g["sm_V"] for g in doc["generators"]]
        sm_rows = [[c[i] for c in sm_cols] for i in range(groups["Omega2_Spin_BO2"].generators)]
        chain = AppendixChainData(
            groups,
            _hom(groups, "Omega4_Pin+", "Omega4_Pinc+", ch["i"]),
            _hom(groups, "Omega4_Pinc+", "Omega2_Spin_BO2", sm_rows),
            _hom(groups, "Omega2_Spin_BO2", "Omega3_Pin+", ch["delta"]),
            gens, surfs,
        )
    except (KeyError, TypeError, IndexError) as exc:
        raise CatalogError(f"{source}: malformed catalog ({exc!r})") from None
    cat = Catalog(manifolds, chain, source)
    for g in gens:
        cat.manifold(g.manifold).bundle(g.bundle)
    for s in surfs:
        cat.manifold(s.manifold).bundle(s.bundle)
    return cat


def load_catalog(path: str | Path | None = None) -> Catalog:
    if path is None:
        return default_catalog()
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CatalogError(f"cannot read catalog {path}: {exc}") from None
    return parse_catalog(doc, str(path))


@lru_cache(maxsize=1)
def default_catalog() -> Catalog:
    text = resources.files("weakspt").joinpath("data/appendix.json").read_text(encoding="utf-8")
    return parse_catalog(json.loads(text), "appendix.json")


# ---------------------------------------------------------------------------
# Appendix checks
# ---------------------------------------------------------------------------


def abs_minus2(generator: str, catalog: Catalog | None = None,
               chain: AppendixChainData | None = None) -> int:
    """Encoded twisted ABS value, checked against φ1 ∘ sm_V."""
    cat = catalog or default_catalog()
    chain = chain or cat.chain
    names = [g.name for g in chain.generators]
    if generator not in names:
        raise CatalogError(f"unknown generator {generator!r}; use one of {', '.join(names)}")
    j = names.index(generator)
    value = chain.generators[j].abs_minus2 % 2
    via_smith = chain.sm_V.matrix[0, j] % 2
    if value != via_smith:
        raise CatalogError(f"ABS value {value} on {generator} disagrees with φ1(sm_V) = {via_smith}")
    return value


@dataclass(frozen=True)
class BasisReport:
    invariants: tuple[str, ...]
    manifolds: tuple[str, ...]
    matrix: tuple[tuple[int, ...], ...]
    rank: int

    @property
    def independent(self) -> bool:
        return self.rank == len(self.manifolds)


def invariant_matrix(catalog: Catalog | None = None) -> tuple[tuple[str, ...], tuple[str, ...], list[list[int]]]:
    cat = catalog or default_catalog()
    gens = cat.chain.generators
    rows = {
        "xi": [xi_invariant(cat.manifold(g.manifold), g.bundle) for g in gens],
        "w1^4": [integrate(cat.manifold(g.manifold), cat.manifold(g.manifold).w(1) ** 4) for g in gens],
        "ABS": [abs_minus2(g.name, cat) for g in gens],
    }
    return tuple(rows), tuple(g.name for g in gens), list(rows.values())


def verify_generator_basis(catalog: Catalog | None = None,
                           drop_invariant: str | None = None,
                           drop_manifold: str | None = None) -> BasisReport:
    inv, mans, rows = invariant_matrix(catalog)
    keep_r = [i for i, n in enumerate(inv) if n != drop_invariant]
    keep_c = [j for j, n in enumerate(mans) if n != drop_manifold]
    mat = tuple(tuple(rows[i][j] for j in keep_c) for i in keep_r)
    return BasisReport(tuple(inv[i] for i in keep_r), tuple(mans[j] for j in keep_c), mat, f2_rank(mat))


@dataclass(frozen=True)
class Joint:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class ExactnessReport:
    joints: tuple[Joint, ...]

    @property
    def passed(self) -> int:
        return sum(j.passed for j in self.joints)


def verify_smith_exactness(chain: AppendixChainData | None = None) -> ExactnessReport:
    chain = chain or default_catalog().chain
    joints = []
    for name, into, out in (("Omega4_Pinc+", chain.i, chain.sm_V),
                            ("Omega2_Spin_BO2", chain.sm_V, chain.delta)):
        middle: PresentedGroup = out.domain
        ker = kernel(out).subgroup_generators
        ok = same_subgroup(middle, into.matrix, ker)
        detail = (f"im = span{_cols(into.matrix, middle)}, ker = span{_cols(ker, middle)}")
        joints.append(Joint(name, ok, detail))
    return ExactnessReport(tuple(joints))


def _cols(m: IntMatrix, g: PresentedGroup) -> str:
    cols = sorted({g.reduce(c) for c in m.columns()} - {(0,) * g.generators})
    return "{" + ", ".join("(" + ",".join(map(str, c)) + ")" for c in cols) + "}"


def phi3(catalog: Catalog, surface: SurfaceGenerator) -> int:
    """φ3 = ∫ w2(E), the one φ-coordinate computable from cohomology."""
    m = catalog.manifold(surface.manifold)
    return integrate(m, m.bundle(surface.bundle).w(2))


@dataclass(frozen=True)
class AppendixReport:
    integrals: dict[str, int]
    basis: BasisReport
    exactness: ExactnessReport
    abs_factorizes: bool
    phi3_agrees: bool
    phi_rank: int
    wu: dict[str, str]

    @property
    def ok(self) -> bool:
        return (self.basis.independent and self.exactness.passed == len(self.exactness.joints)
                and self.abs_factorizes and self.phi3_agrees and self.phi_rank == 3
                and all(v == "0" for v in self.wu.values()))

    def summary(self) -> str:
        return (f"{self.basis.rank}/{len(self.basis.manifolds)} generators independent; "
                f"{self.exactness.passed}/{len(self.exactness.joints)} exactness joints pass")


def appendix_report(catalog: Catalog | None = None, chain: AppendixChainData | None = None) -> AppendixReport:
    cat = catalog or default_catalog()
    if chain is not None:
        cat = replace(cat, chain=chain)
    rp4, cp2, cp11 = (cat.manifold(n) for n in ("RP4", "CP2", "CP1xCP1"))
    integrals = {
        "RP4: w1^4": integrate(rp4, rp4.w(1) ** 4),
        "CP2: w2^2": integrate(cp2, cp2.w(2) ** 2),
    }
    for g in cat.chain.generators:
        integrals[f"{g.name}: xi"] = xi_invariant(cat.manifold(g.manifold), g.bundle)
    try:
        for g in cat.chain.generators:
            abs_minus2(g.name, cat)
        factorizes = True
    except CatalogError:
        factorizes = False
    try:
        basis = verify_generator_basis(cat)
    except CatalogError:
        basis = BasisReport((), tuple(g.name for g in cat.chain.generators), (), 0)
    phi3_ok = all(phi3(cat, s) == s.phi[2] for s in cat.chain.surfaces)
    return AppendixReport(
        integrals, basis, verify_smith_exactness(cat.chain), factorizes, phi3_ok,
        f2_rank(cat.chain.phi_values), {m.name: str(wu_check(m)) for m in cat.surfaces()},
    )


def format_report(r: AppendixReport) -> str:
    mark = lambda ok: "ok" if ok else "FAIL"  # noqa: E731
    lines = ["# Pin^{c̃+} appendix checks", "", "## Characteristic numbers"]
    lines += [f"- {k} = {v}" for k, v in r.integrals.items()]
    lines += ["", "## Generator basis (rows: invariants, columns: manifolds)",
              "| invariant | " + " | ".join(r.basis.manifolds) + " |",
              "|---|" + "---|" * len(r.basis.manifolds)]
    lines += [f"| {n} | " + " | ".join(map(str, row)) + " |"
              for n, row in zip(r.basis.invariants, r.basis.matrix)]
    lines += [f"- F2 rank: {r.basis.rank}", "", "## Smith long exact sequence"]
    lines += [f"- joint at {j.name}: {mark(j.passed)} ({j.detail})" for j in r.exactness.joints]
    lines += ["", "## Consistency",
              f"- ABS factors through φ1 ∘ sm_V: {mark(r.abs_factorizes)}",
              f"- computed φ3 = ∫w2(E) matches encoded φ3: {mark(r.phi3_agrees)}",
              f"- φ matrix F2 rank: {r.phi_rank}"]
    lines += [f"- Wu class v2 on {name}: {v}" for name, v in r.wu.items()]
    lines += ["", r.summary()]
    return "\n".join(lines) + "\n"
