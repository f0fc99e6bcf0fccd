"""Finite commutative rings: resolutions, Ext, Tate cohomology, Gorenstein predicates."""

from .functors import (
    ModuleCochain,
    UnsupportedRingError,
    am_sequence_check,
    ext_dim,
    ext_table,
    gext_dim,
    tate_ext_dim,
    tate_table,
)
from .modules import FinModule, parse_module, residue_module
from .predicates import EnumerationBoundError, enumerate_universe, gorenstein_predicates, injdim, projdim
from .resolutions import (
    CompleteResolution,
    NotSelfInjectiveError,
    ProjResolution,
    complete_resolution,
    proj_resolution,
)
from .rings import FiniteRing, RingSpecError, parse_ring, truncated_polynomial_ring

__all__ = [
    "FiniteRing", "parse_ring", "truncated_polynomial_ring", "RingSpecError",
    "FinModule", "parse_module", "residue_module",
    "ProjResolution", "CompleteResolution", "proj_resolution", "complete_resolution",
    "NotSelfInjectiveError", "UnsupportedRingError", "ModuleCochain",
    "ext_dim", "ext_table", "tate_ext_dim", "tate_table", "gext_dim", "am_sequence_check",
    "enumerate_universe", "gorenstein_predicates", "projdim", "injdim", "EnumerationBoundError",
]
