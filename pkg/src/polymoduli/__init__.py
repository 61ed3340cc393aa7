"""Moduli of triangulated polyhedra through face and dihedral angles."""

from .build import (
    PolyhedronEmbedding,
    extract_angles,
    reconstruct,
    rigid_motion_from_point_triples,
    similarity_compare,
)
from .coloring import DualColoring, find_epc_coloring, is_admissible
from .complex import Combinatoric, build_complex, disc_growth_order, dual_graph, genus
from .cones import ConeAngles, ConeChart, g_n, lift_cone, realize_cone
from .errors import PolymoduliError
from .euclid import g_delta, solve_triangle_from_lengths
from .intrinsic import check_in_membership, g_in, propagate_lengths
from .moduli import (
    ModuliPoint,
    check_membership,
    g_full,
    g_full_reduced,
    numeric_nullity,
    verify_dimensions,
)
from .sphere import Branch, g_three

__all__ = [
    "Branch", "Combinatoric", "ConeAngles", "ConeChart", "DualColoring", "ModuliPoint",
    "PolyhedronEmbedding", "PolymoduliError", "build_complex", "check_in_membership",
    "check_membership", "disc_growth_order", "dual_graph", "extract_angles",
    "find_epc_coloring", "g_delta", "g_full", "g_full_reduced", "g_in", "g_n", "g_three",
    "genus", "is_admissible", "lift_cone", "numeric_nullity", "propagate_lengths",
    "realize_cone", "reconstruct", "rigid_motion_from_point_triples", "similarity_compare",
    "solve_triangle_from_lengths", "verify_dimensions",
]
