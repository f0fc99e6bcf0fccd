"""Exact computations with quasi-coherent sheaves on P^n and finite Gorenstein rings."""

from .cech import cohomology_table, ext_twists, sheaf_cohomology
from .exact_linalg import QQ, PrimeField, field_from_name
from .proj_quiver import TwistPresentation, Vertex, vertices
from .sheaf_functors import LocalModule, decomposition_sequence

__version__ = "0.1.0"

__all__ = [
    "QQ", "PrimeField", "field_from_name", "TwistPresentation", "Vertex", "vertices",
    "sheaf_cohomology", "ext_twists", "cohomology_table", "LocalModule", "decomposition_sequence",
]
