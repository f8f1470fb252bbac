"""Point coefficients of KO and K, James splitting of tori, T-duality degrees.

Degrees are cohomological: ``KO^n(pt) = KO_{-n}(pt)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Callable

from .abgroup import FGAbelianGroup, direct_sum


class KFlavor(enum.Enum):
    KO = "KO"
    K = "K"

    @property
    def period(self) -> int:
        return 8 if self is KFlavor.KO else 2


class Role(enum.Enum):
    STRONG = "strong"
    WEAK = "weak"
    BAND_COUNT = "band_count"


_Z, _Z2, _0 = FGAbelianGroup(1), FGAbelianGroup(0, (2,)), FGAbelianGroup()
_KO_TABLE = (_Z, _0, _0, _0, _Z, _0, _Z2, _Z2)


def point_coefficient(flavor: KFlavor, n: int) -> FGAbelianGroup:
    if flavor is KFlavor.KO:
        return _KO_TABLE[n % 8]
    return _Z if n % 2 == 0 else _0


def cell_role(k: int, d: int) -> Role:
    if k == 0:
        return Role.STRONG
    if k == d:
        return Role.BAND_COUNT
    return Role.WEAK


def cells(d: int) -> list[tuple[int, ...]]:
    """All cells of T^d as index subsets, by size then lexicographically."""
    return [c for k in range(d + 1) for c in combinations(range(1, d + 1), k)]


@dataclass(frozen=True)
class Summand:
    cell_dim: int
    multiplicity: int
    point_degree: int
    group: FGAbelianGroup
    role: Role


@dataclass(frozen=True)
class TorusDecomposition:
    """E^degree(T^dim) split over the cells of the torus.

    ``flavor`` is None when the theory is not K-theory (the interacting side);
    ``theory`` is a display name either way.
    """

    flavor: KFlavor | None
    theory: str
    degree: int
    dim: int
    summands: tuple[Summand, ...]
    total: FGAbelianGroup


def split_torus(theory: str, degree: int, d: int,
                point_group: Callable[[int], FGAbelianGroup],
                flavor: KFlavor | None = None) -> TorusDecomposition:
    """James splitting: E^m(T^d) = ⊕_k C(d,k) E^{m-k}(pt).

    ``point_group`` receives the cell dimension k.
    """
    if d < 0:
        raise ValueError(f"torus dimension must be nonnegative, got {d}")
    summands = tuple(
        Summand(k, comb(d, k), degree - k, point_group(k), cell_role(k, d))
        for k in range(d + 1)
    )
    total = direct_sum([s.group.times(s.multiplicity) for s in summands])
    return TorusDecomposition(flavor, theory, degree, d, summands, total)


def torus_group(flavor: KFlavor, m: int, d: int) -> TorusDecomposition:
    return split_torus(flavor.value, m, d, lambda k: point_coefficient(flavor, m - k), flavor)


def t_dual_free_degree(s: int, d: int) -> int:
    """Degree of spatial-torus K-theory carrying the free weak phases.

    This is d + s - 2.  One display in the source material prints d - s - 2;
    every table header agrees with d + s - 2 instead.
    """
    return d + s - 2


def dual_cell(cell: frozenset[int] | set[int] | tuple[int, ...], d: int) -> frozenset[int]:
    """T-duality pairs the cell S^I with its complement."""
    cell = frozenset(cell)
    if not cell <= set(range(1, d + 1)):
        raise ValueError(f"cell {sorted(cell)} is not a subset of 1..{d}")
    return frozenset(range(1, d + 1)) - cell
