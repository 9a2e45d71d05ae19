"""Shared mesh and tree constructions for the test-suite."""

from __future__ import annotations

import numpy as np

from revnets import DissectionTree, SurfacePoint, TreeEdge, TreeNode, random_sphere_hull, skeleton_tree, unit_cube

# A winding cut on the cube's 1/3 grid: one long band of cuts snaking through
# all eight corners, with a single branch at grid point 203.  Points are
# integer grid coordinates ijk, meaning (i, j, k) / 3.
SPIRAL_BAND = [
    "000 001 002 102 101 100 110 120 220 210 200 300",
    "300 310 311 321 331 330",
    "330 230 231 131 031 030",
    "030 020 010 011 012 022 023 033",
    "033 133 233 232 332 333",
    "333 323 313 312 302 301 201 202 203",
    "203 103 113 013 003",
    "203 303",
]

# cube vertex index = 4x + 2y + z
CROSS_PAIRS = [(0, 2), (1, 3), (2, 3), (2, 6), (4, 6), (5, 7), (6, 7)]


def grid_tree(mesh, paths, n=3) -> DissectionTree:
    """Tree from grid paths whose end points are cube corners or Steiner nodes."""
    def xyz(tok):
        return np.array([int(c) for c in tok], dtype=float) / n

    ends = []
    for p in paths:
        toks = p.split()
        for t in (toks[0], toks[-1]):
            if t not in ends:
                ends.append(t)

    def vertex_of(tok):
        p = xyz(tok)
        if all(c in (0.0, 1.0) for c in p):
            return int(np.argmin(np.linalg.norm(mesh.vertices - p, axis=1)))
        return None

    corners = sorted((t for t in ends if vertex_of(t) is not None), key=vertex_of)
    steiner = [t for t in ends if vertex_of(t) is None]
    order = corners + steiner
    nid = {t: i for i, t in enumerate(order)}
    nodes = []
    for t in order:
        v = vertex_of(t)
        pt = mesh.vertex_point(v) if v is not None else mesh.polyline_from_3d([xyz(t), xyz(t)])[0]
        nodes.append(TreeNode(nid[t], pt, v))
    edges = []
    for p in paths:
        toks = p.split()
        edges.append(TreeEdge(nid[toks[0]], nid[toks[-1]], tuple(mesh.polyline_from_3d([xyz(t) for t in toks]))))
    return DissectionTree(nodes, edges)


def spiral_band_tree():
    m = unit_cube()
    return m, grid_tree(m, SPIRAL_BAND)


def cross_tree():
    m = unit_cube()
    return m, skeleton_tree(m, CROSS_PAIRS)


def random_case(seed: int, lo: int = 6, hi: int = 12):
    """Random convex hull of ``lo..hi`` sphere points."""
    rng = np.random.default_rng(seed)
    return random_sphere_hull(int(rng.integers(lo, hi + 1)), rng)


def interior_point(mesh, rng) -> SurfacePoint:
    t = int(rng.integers(len(mesh.triangles)))
    b = rng.dirichlet([2.0, 2.0, 2.0])
    return SurfacePoint(t, tuple(float(x) for x in b))


def straight_tree(mesh, pairs) -> DissectionTree:
    """Tree of straight in-face segments between vertices; pairs may be face diagonals."""
    nodes = [TreeNode(v, mesh.vertex_point(v), v) for v in range(mesh.n_vertices)]
    edges = [TreeEdge(a, b, tuple(mesh.polyline_from_3d([mesh.vertices[a], mesh.vertices[b]]))) for a, b in pairs]
    return DissectionTree(nodes, edges)
