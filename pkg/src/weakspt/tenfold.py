"""The ten Altland-Zirnbauer classes."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .kcoeff import KFlavor


class Field(enum.Enum):
    REAL = "Real"
    COMPLEX = "Complex"


@dataclass(frozen=True)
class AZClass:
    label: str
    field: Field
    s: int
    clifford_name: str
    fermionic_group_name: str
    structure_group_name: str

    @property
    def flavor(self) -> KFlavor:
        return KFlavor.KO if self.field is Field.REAL else KFlavor.K


_ROWS = (
    AZClass("A", Field.COMPLEX, 0, "C", "U(1)", "Spin^c"),
    AZClass("AIII", Field.COMPLEX, 1, "Cl_1⊗C", "U(1)×Z₂", "Pin^c"),
    AZClass("CII", Field.REAL, -3, "Cl_{-3}", "Pin^-(3)", "Pin^{h-}"),
    AZClass("AII", Field.REAL, -2, "Cl_{-2}", "Pin^-(2)", "Pin^{c̃+}"),
    AZClass("DIII", Field.REAL, -1, "Cl_{-1}", "Pin^-(1)", "Pin^+"),
    AZClass("D", Field.REAL, 0, "R", "Spin(1)", "Spin"),
    AZClass("BDI", Field.REAL, 1, "Cl_1", "Pin^+(1)", "Pin^-"),
    AZClass("AI", Field.REAL, 2, "Cl_2", "Pin^+(2)", "Pin^{c̃-}"),
    AZClass("CI", Field.REAL, 3, "Cl_3", "Pin^+(3)", "Pin^{h+}"),
    AZClass("C", Field.REAL, 4, "Cl_4", "Spin(3)", "Spin^h"),
)

REGISTRY: dict[str, AZClass] = {c.label: c for c in _ROWS}
LABELS: tuple[str, ...] = tuple(REGISTRY)


class UnknownClassError(KeyError):
    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return self.args[0]


def lookup(label: str) -> AZClass:
    try:
        return REGISTRY[label]
    except KeyError:
        raise UnknownClassError(
            f"unknown class label {label!r}; valid labels: {', '.join(LABELS)}") from None


def clifford_shift(i: int, k: int) -> int:
    """K_i(A ⊗ Cl_k) ≅ K_{i-k}(A)."""
    return i - k


def header_offset(az: AZClass) -> int:
    """Representative of s - 2 used in table headers, e.g. CII reads d+3."""
    period = az.flavor.period
    lo = -4 if az.flavor is KFlavor.KO else -1
    return (az.s - 2 - lo) % period + lo
