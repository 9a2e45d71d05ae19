"""Reversible nets of convex polyhedra: unfolding, hinged chains, cut loci and tilings."""

from .dissection import (DissectionTree, TreeEdge, TreeNode, analyze_crossing, crossing, edge_spanning_tree,
                         skeleton_tree, tree_in_net, tree_length, validate_tree)
from .errors import (ChainError, CrossingTreesError, GeodesicError, MeshValidationError, OffParseError,
                     RevnetsError, TilingError, TreeError, UnfoldError, WindowTooLargeError)
from .geodesic import cut_locus, geodesic_star, shortest_path, source_unfold, star_tree, star_unfold
from .isotess import isotetra_from_triangle, tile_patch, verify_tiling
from .mesh import (PolyhedronMesh, SurfacePoint, convex_hull, load_off, make_dihedron, random_sphere_hull,
                   regular_tetrahedron, unit_cube, write_off)
from .reversible import (animate_chain, build_double_chain, cut_net_along_tree, reassemble,
                         separating_cycle, verify_reversibility)
from .unfold import Net, cut_and_unfold, net_area, net_perimeter, self_overlaps

__all__ = [
    "ChainError", "CrossingTreesError", "DissectionTree", "GeodesicError", "MeshValidationError", "Net",
    "OffParseError", "PolyhedronMesh", "RevnetsError", "SurfacePoint", "TilingError", "TreeEdge", "TreeError",
    "TreeNode", "UnfoldError", "WindowTooLargeError", "analyze_crossing", "animate_chain",
    "build_double_chain", "convex_hull", "crossing", "cut_and_unfold", "cut_locus", "cut_net_along_tree",
    "edge_spanning_tree", "geodesic_star", "isotetra_from_triangle", "load_off", "make_dihedron", "net_area",
    "net_perimeter", "random_sphere_hull", "reassemble", "regular_tetrahedron", "self_overlaps",
    "separating_cycle", "shortest_path", "skeleton_tree", "source_unfold", "star_tree", "star_unfold",
    "tile_patch", "tree_in_net", "tree_length", "unit_cube", "validate_tree", "verify_reversibility",
    "verify_tiling", "write_off",
]
