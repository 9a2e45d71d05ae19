"""Refinement of a mesh by embedded polylines.

Given one or more dissection trees, every triangle is split along the tree
segments that cross it, producing a polygonal complex whose cells each lie
inside a single triangle and whose edges include every tree segment.  The
complex carries half-edge connectivity, so cutting, development and piece
extraction become combinatorial walks.
"""

from __future__ import annotations

import math
from collections import defaultdict

import numpy as np

from . import geometry as geo
from .dissection import DissectionTree, segment_tris
from .errors import UnfoldError
from .mesh import Location, PolyhedronMesh, SurfacePoint


class SurfaceComplex:
    """Cells, points and half-edges of a refined surface.

    ``trees`` maps an integer tag to a dissection tree.  ``sides`` resolves
    edges shared by two trees: key ``(tag, tree_edge)`` -> ``"left"`` or
    ``"right"``, the side of that tree edge on which its own copy lies.  A
    zero-area two-sided cell (digon) is inserted between the two copies.
    """

    def __init__(self, mesh: PolyhedronMesh, trees: dict[int, DissectionTree], sides=None):
        self.mesh = mesh
        self.trees = dict(trees)
        self.eps = 1e-9 * mesh.diameter
        self.points: list[Location] = []
        self.xyz: list[np.ndarray] = []
        self._edge_pts: dict[int, list[tuple[float, int]]] = defaultdict(list)
        self._face_pts: dict[int, list[tuple[np.ndarray, int]]] = defaultdict(list)
        for v in range(mesh.n_vertices):
            self.points.append(Location("v", v))
            self.xyz.append(mesh.vertices[v].copy())
        self._tri_segs: dict[int, list[tuple[int, int]]] = defaultdict(list)
        self._curve_segs = []  # (tag, tree edge, ("edge", e, pid_a, pid_b) | ("tri", t, pid_a, pid_b))
        for tag in sorted(self.trees):
            for ei, e in enumerate(self.trees[tag].edges):
                self._add_curve(tag, ei, e.polyline)
        self._build_cells()
        self._build_halfedges()
        self._apply_labels()
        self._insert_digons(sides or {})

    # -- point registry --------------------------------------------------

    def _register(self, loc: Location) -> int:
        m = self.mesh
        if loc.kind == "v":
            return loc.index
        if loc.kind == "e":
            tol = self.eps / max(m.edge_length(loc.index), 1e-300)
            lst = self._edge_pts[loc.index]
            for s, pid in lst:
                if abs(s - loc.param) <= tol:
                    return pid
            pid = len(self.points)
            lst.append((float(loc.param), pid))
            self.points.append(loc)
            self.xyz.append(m.location_point(loc))
            return pid
        t = loc.index
        xy = np.asarray(loc.param) @ m.tri_chart[t]
        for q, pid in self._face_pts[t]:
            if np.linalg.norm(q - xy) <= self.eps:
                return pid
        pid = len(self.points)
        self._face_pts[t].append((xy, pid))
        self.points.append(loc)
        self.xyz.append(m.location_point(loc))
        return pid

    def pid_of(self, p: SurfacePoint) -> int:
        """Id of an existing point at ``p``; raises KeyError when absent."""
        m = self.mesh
        loc = m.locate(p)
        if loc.kind == "v":
            return loc.index
        if loc.kind == "e":
            tol = self.eps / max(m.edge_length(loc.index), 1e-300)
            for s, pid in self._edge_pts[loc.index]:
                if abs(s - loc.param) <= tol:
                    return pid
        else:
            xy = np.asarray(loc.param) @ m.tri_chart[loc.index]
            for q, pid in self._face_pts[loc.index]:
                if np.linalg.norm(q - xy) <= self.eps:
                    return pid
        raise KeyError(f"no complex point at {p}")

    def _add_curve(self, tag, ei, polyline):
        m = self.mesh
        locs = [m.locate(q) for q in polyline]
        pids = [self._register(l) for l in locs]
        for k in range(len(locs) - 1):
            la, lb = locs[k], locs[k + 1]
            a, b = pids[k], pids[k + 1]
            if a == b:
                raise UnfoldError(f"tree {tag} edge {ei}: degenerate segment {k}")
            tris = segment_tris(m, la, lb)
            if not tris:
                raise UnfoldError(f"tree {tag} edge {ei}: segment {k} is not on the surface")
            if len(tris) == 2 and la.kind != "f" and lb.kind != "f":
                e = self._common_edge(la, lb)
                self._curve_segs.append((tag, ei, ("edge", e, a, b)))
            else:
                t = tris[0]
                self._tri_segs[t].append((a, b))
                self._curve_segs.append((tag, ei, ("tri", t, a, b)))

    def _common_edge(self, la, lb) -> int:
        m = self.mesh
        if la.kind == "e":
            return la.index
        if lb.kind == "e":
            return lb.index
        return m.edge_index(la.index, lb.index)

    def edge_param(self, pid: int, e: int) -> float:
        loc = self.points[pid]
        if loc.kind == "e":
            return float(loc.param)
        lo, hi = (int(x) for x in self.mesh.edges[e])
        return 0.0 if loc.index == lo else 1.0

    def point_chart(self, pid: int, t: int) -> np.ndarray:
        """Coordinates of a point in the chart of triangle ``t``."""
        m = self.mesh
        loc = self.points[pid]
        tri = [int(x) for x in m.triangles[t]]
        if loc.kind == "v" and loc.index in tri:
            return m.tri_chart[t][tri.index(loc.index)].copy()
        if loc.kind == "e":
            lo, hi = (int(x) for x in m.edges[loc.index])
            if lo in tri and hi in tri:
                c = m.tri_chart[t]
                return (1 - loc.param) * c[tri.index(lo)] + loc.param * c[tri.index(hi)]
        if loc.kind == "f" and loc.index == t:
            return np.asarray(loc.param) @ m.tri_chart[t]
        return m.to_chart(t, self.xyz[pid])

    def surface_point(self, pid: int) -> SurfacePoint:
        return self.mesh.location_surface_point(self.points[pid])

    # -- cells -------------------------------------------------------------

    def _tri_boundary(self, t):
        m = self.mesh
        tri = [int(x) for x in m.triangles[t]]
        ring = []
        for k in range(3):
            a, b = tri[k], tri[(k + 1) % 3]
            e = m.edge_index(a, b)
            pts = sorted(self._edge_pts.get(e, []))
            if a > b:
                pts = pts[::-1]
            ring.append(a)
            ring.extend(pid for _, pid in pts)
        return ring

    def _build_cells(self):
        m = self.mesh
        self.cells: list[list[int]] = []
        self.cell_tri: list[int] = []
        for t in range(len(m.triangles)):
            ring = self._tri_boundary(t)
            segs = self._tri_segs.get(t, [])
            if not segs:
                self.cells.append(ring)
                self.cell_tri.append(t)
                continue
            und = set()
            for i in range(len(ring)):
                a, b = ring[i], ring[(i + 1) % len(ring)]
                und.add((min(a, b), max(a, b)))
            for a, b in segs:
                und.add((min(a, b), max(a, b)))
            nodes = sorted({x for e in und for x in e})
            xy = {p: self.point_chart(p, t) for p in nodes}
            out = defaultdict(list)
            for a, b in und:
                out[a].append(b)
                out[b].append(a)
            order = {}
            for a, nb in out.items():
                nb.sort(key=lambda b: math.atan2(xy[b][1] - xy[a][1], xy[b][0] - xy[a][0]))
                order[a] = {b: i for i, b in enumerate(nb)}
            seen = set()
            total = 0.0
            for a, b in sorted((a, b) for e in und for a, b in (e, e[::-1])):
                if (a, b) in seen:
                    continue
                cyc = []
                u, v = a, b
                while (u, v) not in seen:
                    seen.add((u, v))
                    cyc.append(u)
                    nb = out[v]
                    w = nb[(order[v][u] - 1) % len(nb)]
                    u, v = v, w
                area = geo.polygon_area([xy[p] for p in cyc])
                if area > 0:
                    self.cells.append(cyc)
                    self.cell_tri.append(t)
                    total += area
            if abs(total - m.tri_area[t]) > 1e-9 * m.tri_area[t] + 1e-14:
                raise UnfoldError(f"triangle {t}: tree segments do not form a connected arrangement "
                                  f"(cell area {total:.6g} vs {m.tri_area[t]:.6g})")

    def _build_halfedges(self):
        self.he_origin: list[int] = []
        self.he_cell: list[int] = []
        self.he_next: list[int] = []
        self.cell_he: list[int] = []
        key = {}
        for c, cyc in enumerate(self.cells):
            base = len(self.he_origin)
            self.cell_he.append(base)
            n = len(cyc)
            for i in range(n):
                self.he_origin.append(cyc[i])
                self.he_cell.append(c)
                self.he_next.append(base + (i + 1) % n)
                k = (cyc[i], cyc[(i + 1) % n])
                if k in key:
                    raise UnfoldError(f"directed edge {k} appears twice in the refined surface")
                key[k] = base + i
        self.he_twin = [-1] * len(self.he_origin)
        self.he_edge = [-1] * len(self.he_origin)
        self.edge_he: list[tuple[int, int]] = []
        for (a, b), h in key.items():
            g = key.get((b, a))
            if g is None:
                raise UnfoldError(f"refined edge ({a}, {b}) has no twin")
            self.he_twin[h] = g
            if self.he_edge[h] < 0:
                self.he_edge[h] = self.he_edge[g] = len(self.edge_he)
                self.edge_he.append((h, g))
        self._key = key
        # labels per refined edge: tag -> (tree edge, forward origin point)
        self.edge_labels: list[dict[int, tuple[int, int]]] = [dict() for _ in self.edge_he]

    def _label(self, a, b, tag, ei):
        h = self._key.get((a, b))
        if h is None:
            raise UnfoldError(f"tree {tag} edge {ei}: segment ({a}, {b}) missing from refinement")
        lab = self.edge_labels[self.he_edge[h]]
        if tag in lab and lab[tag][0] != ei:
            raise UnfoldError(f"tree {tag}: edges {lab[tag][0]} and {ei} overlap")
        lab[tag] = (ei, a)

    def _apply_labels(self):
        for tag, ei, (kind, where, a, b) in self._curve_segs:
            if kind == "tri":
                self._label(a, b, tag, ei)
                continue
            e = where
            lo, hi = (int(x) for x in self.mesh.edges[e])
            chain = [lo] + [pid for _, pid in sorted(self._edge_pts.get(e, []))] + [hi]
            ia = chain.index(a)
            ib = chain.index(b)
            step = 1 if ib > ia else -1
            for i in range(ia, ib, step):
                self._label(chain[i], chain[i + step], tag, ei)

    def _insert_digons(self, sides):
        for eid in range(len(self.edge_he)):
            lab = self.edge_labels[eid]
            if len(lab) < 2:
                continue
            if len(lab) > 2:
                raise UnfoldError("more than two trees share an edge")
            (t1, (e1, fwd1)), (t2, (e2, fwd2)) = sorted(lab.items())
            side = sides.get((t1, e1))
            if side is None:
                raise UnfoldError(f"trees {t1} and {t2} share edge segment without a side assignment")
            h, g = self.edge_he[eid]
            hl = h if self.he_origin[h] == fwd1 else g  # its cell is left of tree t1's edge
            hr = self.he_twin[hl]
            u, v = self.he_origin[hl], self.he_origin[hr]
            c = len(self.cells)
            self.cells.append([u, v])
            self.cell_tri.append(self.cell_tri[self.he_cell[hl]])
            d2 = len(self.he_origin)  # u -> v
            d1 = d2 + 1  # v -> u
            self.he_origin += [u, v]
            self.he_cell += [c, c]
            self.he_next += [d1, d2]
            self.cell_he.append(d2)
            self.he_twin += [hr, hl]
            self.he_twin[hl] = d1
            self.he_twin[hr] = d2
            new = len(self.edge_he)
            self.edge_he[eid] = (hl, d1)
            self.edge_he.append((d2, hr))
            self.he_edge += [new, eid]
            self.he_edge[hr] = new
            left_tag = t1 if side == "left" else t2
            right_tag = t2 if left_tag == t1 else t1
            self.edge_labels[eid] = {left_tag: lab[left_tag]}
            self.edge_labels.append({right_tag: lab[right_tag]})

    # -- queries -------------------------------------------------------

    @property
    def n_cells(self) -> int:
        return len(self.cells)

    def he_dest(self, h: int) -> int:
        return self.he_origin[self.he_next[h]]

    def he_prev(self, h: int) -> int:
        g = h
        while self.he_next[g] != h:
            g = self.he_next[g]
        return g

    def cell_halfedges(self, c: int) -> list[int]:
        out = [self.cell_he[c]]
        h = self.he_next[out[0]]
        while h != out[0]:
            out.append(h)
            h = self.he_next[h]
        return out

    def cell_chart(self, c: int) -> np.ndarray:
        t = self.cell_tri[c]
        return np.array([self.point_chart(p, t) for p in self.cells[c]])

    def is_digon(self, c: int) -> bool:
        return len(self.cells[c]) == 2

    def has_tag(self, h: int, tag: int) -> bool:
        return tag in self.edge_labels[self.he_edge[h]]

    def label(self, h: int, tag: int) -> tuple[int, str]:
        """Tree edge carried by half-edge ``h`` and the side its cell lies on."""
        ei, fwd = self.edge_labels[self.he_edge[h]][tag]
        return ei, ("left" if self.he_origin[h] == fwd else "right")

    def find_halfedge(self, c: int, p: int, q: int):
        for h in self.cell_halfedges(c):
            if self.he_origin[h] == p and self.he_dest(h) == q:
                return h
        return None

    def crossing_transform(self, h: int) -> np.ndarray:
        """Motion from the chart of the twin cell's triangle into this cell's triangle chart."""
        ta = self.cell_tri[self.he_cell[h]]
        tb = self.cell_tri[self.he_cell[self.he_twin[h]]]
        if ta == tb:
            return np.eye(3)
        ends = set()
        for pid in (self.he_origin[h], self.he_dest(h)):
            loc = self.points[pid]
            if loc.kind == "v":
                ends.add(loc.index)
            elif loc.kind == "e":
                ends.update(int(x) for x in self.mesh.edges[loc.index])
        if len(ends) != 2:
            raise UnfoldError(f"half-edge {h} joins triangles {ta}, {tb} off a mesh edge")
        return self.mesh.tri_transform(ta, tb, tuple(sorted(ends)))
