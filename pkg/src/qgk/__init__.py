"""Finite computation with augmented bilinear maps over F_p."""

from .bilform import AugBilinearMap, Morphism, validate
from .graphs import SimplicialGraph, decompose, find_forbidden, graph_bilinear, parse_graph
from .kernels import BACKEND
from .slot import has_common_slot, has_common_slot_naive

__version__ = "0.1.0"

__all__ = [
    "AugBilinearMap",
    "BACKEND",
    "Morphism",
    "SimplicialGraph",
    "decompose",
    "find_forbidden",
    "graph_bilinear",
    "has_common_slot",
    "has_common_slot_naive",
    "parse_graph",
    "validate",
]
