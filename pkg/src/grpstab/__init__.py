"""Exact computations with finite groups: series, H_1/H_2, classes of maps and
quotient-witness stabilization of series."""

from __future__ import annotations

from .builders import build_group, load_group, load_homomorphism
from .classes import MapClassSpec, check_membership, is_member
from .config import RunConfig, using
from .errors import CapExceeded, InputError
from .groups import FiniteGroup, Homomorphism, Subgroup
from .homology import homology_group, induced_map
from .rings import QQ, ZZ, CoeffRing
from .series import SeriesKind, gamma, series_chain, series_term
from .stability import monomorphism_check, quotient_stabilization

__version__ = "0.1.0"

__all__ = [
    "CapExceeded", "CoeffRing", "FiniteGroup", "Homomorphism", "InputError", "MapClassSpec",
    "QQ", "RunConfig", "SeriesKind", "Subgroup", "ZZ", "build_group", "check_membership",
    "gamma", "homology_group", "induced_map", "is_member", "load_group", "load_homomorphism",
    "monomorphism_check", "quotient_stabilization", "series_chain", "series_term", "using",
]
