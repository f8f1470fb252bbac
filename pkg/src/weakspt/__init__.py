"""Exact classification of weak SPT phases across the tenfold way."""

from .abgroup import FGAbelianGroup, GroupHom, IntMatrix, PresentedGroup, render_group
from .strongf2i import solve_point_data, strong_record
from .tenfold import lookup
from .weakf2i import classify, dislocation_pairing, render_table

__all__ = [
    "FGAbelianGroup", "GroupHom", "IntMatrix", "PresentedGroup", "render_group",
    "classify", "dislocation_pairing", "render_table", "lookup", "solve_point_data",
    "strong_record",
]
__version__ = "0.1.0"
