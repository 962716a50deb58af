"""Exact combinatorics of reflexive polytopes, toric divisors and their mirrors."""

from .cones import RationalCone, cone_interior_disjoint, dual_cone
from .divisors import (
    DivisorLattice,
    build_divisor_lattice,
    canonical_section_count,
    is_convex_divisor,
    is_strictly_convex_divisor,
    kahler_cone,
    section_space,
)
from .mirror import (
    classify_degeneration,
    deformation_dim,
    degeneration_cone,
    flop_mirror_report,
    mirror_check,
    orbit_closure_data,
    picard_dim,
)
from .polytope import LatticePolytope, dual_polytope, from_vertices, is_reflexive, lattice_points
from .triangulation import Triangulation, apply_flop, build_triangulation, check_spanning, flop_candidates

__version__ = "0.1.0"

__all__ = [
    "RationalCone",
    "cone_interior_disjoint",
    "dual_cone",
    "DivisorLattice",
    "build_divisor_lattice",
    "canonical_section_count",
    "is_convex_divisor",
    "is_strictly_convex_divisor",
    "kahler_cone",
    "section_space",
    "classify_degeneration",
    "deformation_dim",
    "degeneration_cone",
    "flop_mirror_report",
    "mirror_check",
    "orbit_closure_data",
    "picard_dim",
    "LatticePolytope",
    "dual_polytope",
    "from_vertices",
    "is_reflexive",
    "lattice_points",
    "Triangulation",
    "apply_flop",
    "build_triangulation",
    "check_spanning",
    "flop_candidates",
]
