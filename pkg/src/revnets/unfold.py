"""Cutting a surface along a dissection tree and developing it into the plane."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np
import shapely
from shapely.geometry import Polygon

from . import geometry as geo
from .complex import SurfaceComplex
from .dissection import DissectionTree, analyze_crossing
from .errors import CrossingTreesError, UnfoldError
from .mesh import PolyhedronMesh, SurfacePoint

CUT, MARK = 1, 2


@dataclass
class BoundarySegment:
    halfedge: int
    start: np.ndarray
    end: np.ndarray
    edge: int
    side: str
    point: int  # complex point id at ``start``

    @property
    def length(self) -> float:
        return float(np.linalg.norm(self.end - self.start))


def develop(cx: SurfaceComplex, cut_tag: int, root: int = 0) -> list[np.ndarray]:
    """Breadth-first placement of every cell across uncut edges.

    Returns one 3x3 motion per cell mapping its triangle chart to the plane.
    """
    motions: list[np.ndarray | None] = [None] * cx.n_cells
    motions[root] = np.eye(3)
    queue = deque([root])
    while queue:
        c = queue.popleft()
        for h in cx.cell_halfedges(c):
            if cx.has_tag(h, cut_tag):
                continue
            g = cx.he_twin[h]
            d = cx.he_cell[g]
            if motions[d] is None:
                motions[d] = motions[c] @ cx.crossing_transform(h)
                queue.append(d)
    missing = [c for c, m in enumerate(motions) if m is None]
    if missing:
        raise UnfoldError(f"cells {missing[:5]} unreachable: the cut disconnects the surface")
    return motions


class Net:
    """Planar development of a surface cut along a tree.

    ``cells`` are the placed polygons of the refined complex; the boundary is
    the closed counterclockwise walk of cut half-edges.  When the complex also
    carries a second tree, its image is available as ``interior_marks``.
    """

    def __init__(self, cx: SurfaceComplex, cut_tag: int = CUT, motions=None, root: int = 0,
                 check: bool = True):
        self.complex = cx
        self.mesh: PolyhedronMesh = cx.mesh
        self.cut_tag = cut_tag
        self.tree: DissectionTree = cx.trees[cut_tag]
        self.motions = develop(cx, cut_tag, root) if motions is None else list(motions)
        self.cells = [geo.apply(self.motions[c], cx.cell_chart(c)) for c in range(cx.n_cells)]
        self.seam_error = self._seam_error()
        if check and self.seam_error > 1e-6 * self.mesh.diameter:
            raise UnfoldError(f"development inconsistent across uncut edges (error {self.seam_error:.3g})")
        self._walk_boundary()
        mark_tags = [t for t in cx.trees if t != cut_tag]
        self.mark_tag = mark_tags[0] if mark_tags else None
        self.interior_marks = self._marks() if self.mark_tag is not None else None

    # -- construction -----------------------------------------------------

    def is_cut(self, h: int) -> bool:
        return self.complex.has_tag(h, self.cut_tag)

    def placed(self, h: int) -> tuple[np.ndarray, np.ndarray]:
        cx = self.complex
        c = cx.he_cell[h]
        m = self.motions[c]
        t = cx.cell_tri[c]
        return (geo.apply(m, cx.point_chart(cx.he_origin[h], t)),
                geo.apply(m, cx.point_chart(cx.he_dest(h), t)))

    def _seam_error(self) -> float:
        cx = self.complex
        worst = 0.0
        for h, g in cx.edge_he:
            if cx.has_tag(h, self.cut_tag):
                continue
            a0, b0 = self.placed(h)
            a1, b1 = self.placed(g)
            worst = max(worst, float(np.linalg.norm(a0 - b1)), float(np.linalg.norm(b0 - a1)))
        return worst

    def _walk_boundary(self):
        cx = self.complex
        cut = [h for h in range(len(cx.he_origin)) if self.is_cut(h)]
        if not cut:
            raise UnfoldError("tree has no edges to cut")
        start = cut[0]
        walk = []
        h = start
        while True:
            a, b = self.placed(h)
            ei, side = cx.label(h, self.cut_tag)
            walk.append(BoundarySegment(h, a, b, ei, side, cx.he_origin[h]))
            e = cx.he_next[h]
            guard = 0
            while not self.is_cut(e):
                e = cx.he_next[cx.he_twin[e]]
                guard += 1
                if guard > len(cx.he_origin):
                    raise UnfoldError("boundary walk does not close")
            h = e
            if h == start:
                break
            if len(walk) > len(cut):
                raise UnfoldError("boundary walk does not close")
        if len(walk) != len(cut):
            raise UnfoldError(f"boundary walk covers {len(walk)} of {len(cut)} cut half-edges")
        self.boundary = walk
        nv = self.mesh.n_vertices
        self.vertex_images: dict[int, list[tuple[int, np.ndarray]]] = {}
        for i, s in enumerate(walk):
            if s.point < nv:
                self.vertex_images.setdefault(s.point, []).append((i, s.start))
        self.node_images: dict[int, list[tuple[int, np.ndarray]]] = {}
        pid_node = {self.node_pid(n.id): n.id for n in self.tree.nodes}
        for i, s in enumerate(walk):
            if s.point in pid_node:
                self.node_images.setdefault(pid_node[s.point], []).append((i, s.start))

    def node_pid(self, node: int, tree: DissectionTree | None = None) -> int:
        tree = self.tree if tree is None else tree
        n = tree.nodes[node]
        if n.vertex is not None:
            return n.vertex
        return self.complex.pid_of(n.point)

    def _marks(self) -> dict[int, np.ndarray]:
        cx = self.complex
        tag = self.mark_tag
        tree = cx.trees[tag]
        nxt: dict[int, dict[int, tuple[int, int]]] = {}
        for h in range(len(cx.he_origin)):
            if not cx.has_tag(h, tag):
                continue
            ei, side = cx.label(h, tag)
            if side != "left":
                continue
            nxt.setdefault(ei, {})[cx.he_origin[h]] = (cx.he_dest(h), h)
        marks = {}
        for ei, e in enumerate(tree.edges):
            p = self.node_pid(e.a, tree)
            end = self.node_pid(e.b, tree)
            pts = []
            chain = nxt.get(ei, {})
            guard = 0
            while p != end:
                q, h = chain[p]
                a, b = self.placed(h)
                if not pts:
                    pts.append(a)
                pts.append(b)
                p = q
                guard += 1
                if guard > len(cx.he_origin):
                    raise UnfoldError(f"marked edge {ei} does not chain")
            marks[ei] = np.array(pts)
        return marks

    # -- queries ------------------------------------------------------------

    def real_cells(self) -> list[int]:
        return [c for c in range(len(self.cells)) if not self.complex.is_digon(c)]

    def area(self) -> float:
        return float(sum(geo.polygon_area(self.cells[c]) for c in self.real_cells()))

    def perimeter(self) -> float:
        return float(sum(s.length for s in self.boundary))

    def centroid(self) -> np.ndarray:
        acc, tot = np.zeros(2), 0.0
        for c in self.real_cells():
            a = geo.polygon_area(self.cells[c])
            acc += a * geo.polygon_centroid(self.cells[c])
            tot += a
        return acc / tot

    def boundary_polygon(self) -> np.ndarray:
        return np.array([s.start for s in self.boundary])

    def diameter(self) -> float:
        p = self.boundary_polygon()
        return float(np.max(np.linalg.norm(p[:, None] - p[None], axis=-1)))

    def bounds(self):
        p = np.vstack([self.cells[c] for c in self.real_cells()])
        return p.min(axis=0), p.max(axis=0)

    def shapes(self) -> list[Polygon]:
        return [Polygon(self.cells[c]) for c in self.real_cells()]

    def wedge_cells(self, i: int) -> list[int]:
        """Cells incident to the boundary corner at the start of walk segment ``i``."""
        cx = self.complex
        h = self.boundary[i].halfedge
        cells = [cx.he_cell[h]]
        g = cx.he_prev(h)
        while not self.is_cut(g):
            h = cx.he_twin[g]
            cells.append(cx.he_cell[h])
            g = cx.he_prev(h)
        return cells

    def surface_point(self, c: int, xy) -> SurfacePoint:
        """Fold a planar point lying in placed cell ``c`` back onto the surface."""
        local = geo.apply(geo.invert(self.motions[c]), xy)
        return self.mesh.chart_point(self.complex.cell_tri[c], local)

    def image_of(self, p: SurfacePoint) -> list[np.ndarray]:
        """All planar images of a surface point (several when it lies on the cut)."""
        cx = self.complex
        x = self.mesh.point(p)
        out = []
        for c in range(cx.n_cells):
            t = cx.cell_tri[c]
            if t not in self.mesh.location_tris(self.mesh.locate(p)):
                continue
            xy = self.mesh.to_chart(t, x)
            if geo.point_in_polygon(xy, cx.cell_chart(c), 1e-9 * self.mesh.diameter):
                q = geo.apply(self.motions[c], xy)
                if all(np.linalg.norm(q - o) > 1e-9 * self.mesh.diameter for o in out):
                    out.append(q)
        return out

    def boundary_multiplicity(self, node: int) -> int:
        return len(self.node_images.get(node, []))


# -- operations ----------------------------------------------------------------

def cut_and_unfold(mesh: PolyhedronMesh, tree: DissectionTree, root: int = 0) -> Net:
    """Net obtained by cutting along ``tree`` (root cell placed in its own chart)."""
    cx = SurfaceComplex(mesh, {CUT: tree})
    return Net(cx, CUT, root=root)


def joint_complex(mesh: PolyhedronMesh, d1: DissectionTree, d2: DissectionTree) -> SurfaceComplex:
    """Refinement by two non-crossing trees (tags 1 and 2); shared edges become digons."""
    rep = analyze_crossing(mesh, d1, d2)
    if rep.crossing:
        raise CrossingTreesError(rep.witness)
    sides = {}
    for (i, _j), side in rep.coincident.items():
        sides[(CUT, i)] = side
    return SurfaceComplex(mesh, {CUT: d1, MARK: d2}, sides=sides)


def draw_tree_in_net(net: Net, d2: DissectionTree) -> Net:
    """Net ``net`` redeveloped with the image of ``d2`` recorded as interior marks."""
    cx = joint_complex(net.mesh, net.tree, d2)
    return Net(cx, CUT)


def net_area(net: Net) -> float:
    return net.area()


def net_perimeter(net: Net) -> float:
    return net.perimeter()


@dataclass
class OverlapReport:
    overlaps: bool
    witness: tuple[int, int] | None = None
    area: float = 0.0
    polygon: object = None

    def __bool__(self):
        return self.overlaps


def self_overlaps(net: Net, rel_tol: float = 1e-10) -> OverlapReport:
    """Whether two placed cells overlap with positive area."""
    cells = net.real_cells()
    # snapping makes shared edges exactly coincident; GEOS misreports near-coincident ones
    grid = 1e-9 * net.diameter()
    polys = [shapely.set_precision(Polygon(net.cells[c]), grid) for c in cells]
    tol = rel_tol * net.area()
    tree = shapely.STRtree(polys)
    left, right = tree.query(polys, predicate="intersects")
    best = None
    for i, j in sorted(zip(left.tolist(), right.tolist())):
        if i >= j:
            continue
        inter = polys[i].intersection(polys[j])
        if inter.area > tol:
            best = (cells[i], cells[j], inter.area, inter)
            break
    if best is None:
        return OverlapReport(False)
    return OverlapReport(True, (best[0], best[1]), best[2], best[3])
