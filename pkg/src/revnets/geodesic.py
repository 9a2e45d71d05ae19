"""Shortest paths on convex polyhedral surfaces, star and source unfoldings."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np
import shapely
from shapely.geometry import LineString, Polygon

from . import geometry as geo
from .dissection import DissectionTree, TreeEdge, TreeNode, validate_tree
from .errors import GeodesicError, SearchBudgetExceeded
from .mesh import PolyhedronMesh, SurfacePoint
from .unfold import Net, cut_and_unfold

DEPTH_CAP = 32
STATE_BUDGET = 2_000_000
TIE_REL = 1e-9


@dataclass
class GeodesicPolyline:
    points: list[SurfacePoint]
    crossed_edges: list[int]
    length: float
    planar: tuple[np.ndarray, np.ndarray] | None = None  # unfolded endpoints


@dataclass
class _Candidate:
    length: float
    seq: tuple[int, ...]
    state: int
    x: np.ndarray


@dataclass
class _State:
    parent: int
    tri: int
    m: np.ndarray
    wa: np.ndarray | None
    wb: np.ndarray | None
    halfedge: int  # half-edge of the parent triangle crossed to get here
    seq: tuple[int, ...]


def _cone_contains(s, wa, wb, x, tol) -> bool:
    if wa is None:
        return True
    o = geo.orient2d(s, wa, wb)
    if o < 0:
        wa, wb = wb, wa
    scale = float(np.linalg.norm(x - s)) + 1e-300
    return (geo.orient2d(s, wa, x) >= -tol * scale * float(np.linalg.norm(wa - s))
            and geo.orient2d(s, wb, x) <= tol * scale * float(np.linalg.norm(wb - s)))


def _clip(s, wa, wb, p, q):
    """Part of segment pq inside the cone from ``s`` through window wa-wb."""
    if wa is None:
        return p, q
    o = geo.orient2d(s, wa, wb)
    if o == 0:
        return None
    if o < 0:
        wa, wb = wb, wa
    lo, hi = 0.0, 1.0
    for w, sign in ((wa, 1.0), (wb, -1.0)):
        f0 = sign * geo.orient2d(s, w, p)
        f1 = sign * geo.orient2d(s, w, q)
        if f0 < 0 and f1 < 0:
            return None
        if f0 < 0 or f1 < 0:
            t = f0 / (f0 - f1)
            if f0 < 0:
                lo = max(lo, t)
            else:
                hi = min(hi, t)
    if hi <= lo:
        return None
    return p + lo * (q - p), p + hi * (q - p)


class _Search:
    """Best-first enumeration of unfolded triangle strips from one source."""

    def __init__(self, mesh: PolyhedronMesh, s: SurfacePoint, depth_cap: int = DEPTH_CAP):
        if not mesh.convex:
            raise GeodesicError("shortest paths require a convex surface")
        self.mesh = mesh
        self.src = s
        self.depth_cap = depth_cap
        self.loc = mesh.locate(s)
        self.root_tris = mesh.location_tris(self.loc)
        self.eps = 1e-9 * mesh.diameter

    def run(self, targets: list[SurfacePoint]) -> list[list[_Candidate]]:
        mesh = self.mesh
        tlocs = [mesh.locate(t) for t in targets]
        ttris = [set(mesh.location_tris(l)) for l in tlocs]
        tpts = [mesh.point(t) for t in targets]
        cands: list[list[_Candidate]] = [[] for _ in targets]
        best = [math.inf] * len(targets)
        self.states: list[_State] = []
        heap = []
        s_xy = None
        for t0 in self.root_tris:
            m = np.eye(3)
            s_xy = mesh.to_chart(t0, mesh.point(self.src)) if t0 != self.src.face else mesh.chart_of(self.src)
            # the source is the origin of every root chart so all states share one plane point
            m[:2, 2] = -s_xy
            self.states.append(_State(-1, t0, m, None, None, -1, ()))
            heapq.heappush(heap, (0.0, (), len(self.states) - 1))
        s = np.zeros(2)
        self.s = s
        tol_angle = 1e-12
        popped = 0
        while heap:
            bound, seq, k = heapq.heappop(heap)
            if all(b < math.inf for b in best) and bound > max(best) * (1 + TIE_REL) + self.eps:
                break
            popped += 1
            if popped > STATE_BUDGET:
                raise SearchBudgetExceeded(f"more than {STATE_BUDGET} strips explored")
            st = self.states[k]
            if len(st.seq) > self.depth_cap:
                raise SearchBudgetExceeded(f"depth cap {self.depth_cap} reached")
            tri = st.tri
            for i, t in enumerate(targets):
                if tri not in ttris[i]:
                    continue
                x = geo.apply(st.m, mesh.to_chart(tri, tpts[i]))
                if not _cone_contains(s, st.wa, st.wb, x, tol_angle):
                    continue
                d = float(np.linalg.norm(x - s))
                if d <= best[i] * (1 + TIE_REL) + self.eps:
                    cands[i].append(_Candidate(d, st.seq, k, x))
                    best[i] = min(best[i], d)
            chart = mesh.tri_chart[tri]
            corners = [int(v) for v in mesh.triangles[tri]]
            for j in range(3):
                h = 3 * tri + j
                if h == self._entry(st):
                    continue
                a, b = corners[j], corners[(j + 1) % 3]
                if st.parent < 0 and self._source_on(a, b):
                    continue
                p = geo.apply(st.m, chart[j])
                q = geo.apply(st.m, chart[(j + 1) % 3])
                w = _clip(s, st.wa, st.wb, p, q)
                if w is None or np.linalg.norm(w[1] - w[0]) <= 1e-12 * mesh.diameter:
                    continue
                nb = float(geo.point_segment_distance(s, w[0], w[1]))
                if all(x < math.inf for x in best) and nb > max(best) * (1 + TIE_REL) + self.eps:
                    continue
                g = int(mesh.he_twin[h])
                t2 = g // 3
                m2 = st.m @ mesh.tri_transform(tri, t2, (min(a, b), max(a, b)))
                seq2 = st.seq + (int(mesh.he_edge[h]),)
                self.states.append(_State(k, t2, m2, w[0], w[1], h, seq2))
                heapq.heappush(heap, (nb, seq2, len(self.states) - 1))
        return cands

    def _entry(self, st: _State) -> int:
        if st.parent < 0:
            return -1
        return int(self.mesh.he_twin[st.halfedge])

    def _source_on(self, a: int, b: int) -> bool:
        loc = self.loc
        if loc.kind == "v":
            return loc.index in (a, b)
        if loc.kind == "e":
            return loc.index == self.mesh.edge_index(a, b)
        return False

    def choose(self, cands: list[_Candidate]) -> tuple[_Candidate, bool]:
        """Lexicographically smallest shortest candidate, and whether a geometric tie exists."""
        if not cands:
            raise GeodesicError("target unreachable from the source")
        d = min(c.length for c in cands)
        tied = [c for c in cands if c.length <= d * (1 + TIE_REL) + self.eps]
        tied.sort(key=lambda c: c.seq)
        chosen = tied[0]
        ref = self._midpoint3d(chosen)
        tie = any(np.linalg.norm(self._midpoint3d(c) - ref) > self.eps for c in tied[1:])
        return chosen, tie

    def _chain(self, k: int) -> list[_State]:
        out = []
        while k >= 0:
            out.append(self.states[k])
            k = self.states[k].parent
        return out[::-1]

    def _midpoint3d(self, c: _Candidate) -> np.ndarray:
        mid = 0.5 * c.x
        mesh = self.mesh
        for st in self._chain(c.state)[::-1]:
            tri = st.tri
            local = geo.apply(geo.invert(st.m), mid)
            b = mesh.bary_from_chart(tri, local)
            if min(b) >= -1e-9:
                return mesh.from_chart(tri, local)
        return mesh.from_chart(self._chain(c.state)[0].tri, geo.apply(geo.invert(self._chain(c.state)[0].m), mid))

    def polyline(self, c: _Candidate, target: SurfacePoint) -> GeodesicPolyline:
        mesh = self.mesh
        pts = [self.src]
        edges = []
        chain = self._chain(c.state)
        for parent, st in zip(chain[:-1], chain[1:]):
            h = st.halfedge
            tri, j = divmod(h, 3)
            chart = mesh.tri_chart[tri]
            p = geo.apply(parent.m, chart[j])
            q = geo.apply(parent.m, chart[(j + 1) % 3])
            r = geo.line_params(self.s, c.x, p, q)
            u = min(1.0, max(0.0, r[1])) if r else 0.5
            bary = [0.0, 0.0, 0.0]
            bary[j] = 1.0 - u
            bary[(j + 1) % 3] = u
            pts.append(SurfacePoint(tri, tuple(bary)))
            edges.append(int(mesh.he_edge[h]))
        pts.append(target)
        # drop repeats (target on the last crossed edge)
        out = [pts[0]]
        for p in pts[1:]:
            if np.linalg.norm(mesh.point(p) - mesh.point(out[-1])) > self.eps:
                out.append(p)
        if len(out) == 1 and len(pts) > 1:
            out.append(target)
        return GeodesicPolyline(out, edges, c.length, (self.s.copy(), c.x.copy()))


def shortest_path(mesh: PolyhedronMesh, s: SurfacePoint, t: SurfacePoint,
                  depth_cap: int = DEPTH_CAP) -> GeodesicPolyline:
    """Globally shortest geodesic from ``s`` to ``t``; ties go to the smallest edge sequence."""
    if np.linalg.norm(mesh.point(s) - mesh.point(t)) <= 1e-12 * mesh.diameter:
        return GeodesicPolyline([s, t], [], 0.0)
    search = _Search(mesh, s, depth_cap)
    cands = search.run([t])[0]
    chosen, _ = search.choose(cands)
    return search.polyline(chosen, t)


def paths_to_vertices(mesh: PolyhedronMesh, s: SurfacePoint, depth_cap: int = DEPTH_CAP,
                      skip: int | None = None):
    """Shortest paths from ``s`` to every vertex (except ``skip``) plus the tied vertices."""
    verts = [v for v in range(mesh.n_vertices) if v != skip]
    search = _Search(mesh, s, depth_cap)
    all_cands = search.run([mesh.vertex_point(v) for v in verts])
    paths, ties = {}, []
    for v, cands in zip(verts, all_cands):
        chosen, tie = search.choose(cands)
        if tie:
            ties.append(v)
        paths[v] = search.polyline(chosen, mesh.vertex_point(v))
    return paths, ties


def geodesic_star(mesh: PolyhedronMesh, v: int) -> DissectionTree:
    """Tree of shortest paths from vertex ``v`` to every other vertex."""
    paths, _ = paths_to_vertices(mesh, mesh.vertex_point(v), skip=v)
    nodes = [TreeNode(u, mesh.vertex_point(u), u) for u in range(mesh.n_vertices)]
    edges = [TreeEdge(v, u, tuple(paths[u].points)) for u in sorted(paths)]
    return DissectionTree(nodes, edges)


# -- star unfolding ---------------------------------------------------------------

@dataclass
class SourceImages:
    net: Net
    images: list[np.ndarray]
    tree: DissectionTree
    source: SurfacePoint
    paths: dict[int, GeodesicPolyline]
    displacement: np.ndarray = field(default_factory=lambda: np.zeros(3))


def _displace(mesh: PolyhedronMesh, s: SurfacePoint, rng: np.random.Generator) -> SurfacePoint:
    """Move ``s`` by 1e-6 x diameter within its triangle in a seeded direction."""
    t = s.face
    xy = mesh.chart_of(s)
    step = 1e-6 * mesh.diameter
    for _ in range(64):
        a = rng.uniform(0.0, 2 * math.pi)
        q = xy + step * np.array([math.cos(a), math.sin(a)])
        b = mesh.bary_from_chart(t, q)
        if min(b) > 1e-9:
            return SurfacePoint(t, b)
    centre = mesh.tri_chart[t].mean(axis=0)
    d = centre - xy
    q = xy + step * d / np.linalg.norm(d)
    return SurfacePoint(t, mesh.bary_from_chart(t, q))


def _source_ok(mesh: PolyhedronMesh, s: SurfacePoint):
    if mesh.locate(s).kind == "v":
        raise GeodesicError("source lies on a vertex")


def star_tree(mesh: PolyhedronMesh, s: SurfacePoint, perturb: bool = True, seed: int = 0):
    """Shortest-path star from ``s`` to all vertices, perturbing ``s`` off vertex cut loci."""
    _source_ok(mesh, s)
    rng = np.random.default_rng(seed)
    origin = mesh.point(s)
    for _ in range(16):
        paths, ties = paths_to_vertices(mesh, s)
        if not ties:
            break
        if not perturb:
            raise GeodesicError(f"source is on the cut locus of vertices {ties}")
        s = _displace(mesh, s, rng)
    else:
        raise GeodesicError("could not move the source into generic position")
    n = mesh.n_vertices
    nodes = [TreeNode(v, mesh.vertex_point(v), v) for v in range(n)]
    nodes.append(TreeNode(n, s, None))
    edges = [TreeEdge(n, v, tuple(paths[v].points)) for v in range(n)]
    return DissectionTree(nodes, edges), paths, s, mesh.point(s) - origin


def star_unfold(mesh: PolyhedronMesh, s: SurfacePoint, perturb: bool = True, seed: int = 0) -> SourceImages:
    tree, paths, s2, disp = star_tree(mesh, s, perturb, seed)
    net = cut_and_unfold(mesh, tree)
    src_node = mesh.n_vertices
    images = [xy for _, xy in net.node_images[src_node]]
    return SourceImages(net, images, tree, s2, paths, disp)


# -- cut locus -----------------------------------------------------------------------

def _clip_halfplane(cell, a, b, tag):
    """Clip a tagged convex polygon to the points closer to ``a`` than ``b``.

    ``cell`` is a list of (point, tag of the edge starting there).
    """
    mid = 0.5 * (a + b)
    d = b - a
    out = []
    n = len(cell)
    for k in range(n):
        p, t = cell[k]
        q = cell[(k + 1) % n][0]
        fp, fq = float((p - mid) @ d), float((q - mid) @ d)
        if fp <= 0:
            out.append((p, t))
            if fq > 0:
                out.append((p + fp / (fp - fq) * (q - p), tag))
        elif fq <= 0:
            out.append((p + fp / (fp - fq) * (q - p), t))
    return out


def _voronoi_ridges(poly: Polygon, sites: list[np.ndarray], eps: float) -> list[np.ndarray]:
    """Voronoi edges of ``sites`` inside ``poly`` as a list of 2-point segments."""
    x0, y0, x1, y1 = poly.bounds
    span = 4 * max(x1 - x0, y1 - y0) + 1.0
    frame = [np.array(p, dtype=float) for p in
             ((x0 - span, y0 - span), (x1 + span, y0 - span), (x1 + span, y1 + span), (x0 - span, y1 + span))]
    segs = []
    bnd = poly.boundary
    for i, a in enumerate(sites):
        cell = [(p, -1) for p in frame]
        for j, b in enumerate(sites):
            if i != j and np.linalg.norm(a - b) > eps:
                cell = _clip_halfplane(cell, a, b, j)
        for k, (p, t) in enumerate(cell):
            if t <= i:
                continue
            q = cell[(k + 1) % len(cell)][0]
            inside = LineString([p, q]).intersection(poly)
            for g in getattr(inside, "geoms", [inside]):
                if g.geom_type != "LineString" or g.length <= eps:
                    continue
                c = np.asarray(g.coords)
                for u, w in zip(c[:-1], c[1:]):
                    # drop pieces running along the polygon boundary
                    if np.linalg.norm(w - u) > eps and bnd.distance(shapely.Point(0.5 * (u + w))) > eps:
                        segs.append(np.array([u, w]))
    return segs


def _fold_segment(net: Net, a, b) -> list[tuple[int, np.ndarray]]:
    """Split planar segment ab at cell edges; return (cell, point) for every break point."""
    cx = net.complex
    ts = {0.0, 1.0}
    for c in net.real_cells():
        poly = net.cells[c]
        for p, q in zip(poly, np.roll(poly, -1, axis=0)):
            r = geo.line_params(a, b, p, q)
            if r and 0.0 < r[0] < 1.0 and -1e-12 <= r[1] <= 1 + 1e-12:
                ts.add(r[0])
    ts = sorted(ts)
    merged = [ts[0]]
    for t in ts[1:]:
        if (t - merged[-1]) * np.linalg.norm(b - a) > 1e-12 * net.mesh.diameter:
            merged.append(t)
    merged[-1] = 1.0
    out = []
    for t0, t1 in zip(merged[:-1], merged[1:]):
        mid = a + 0.5 * (t0 + t1) * (b - a)
        c = _cell_at(net, mid)
        if not out:
            out.append((c, a + t0 * (b - a)))
        out.append((c, a + t1 * (b - a)))
    return out


def _cell_at(net: Net, xy) -> int:
    best, bd = None, math.inf
    for c in net.real_cells():
        poly = net.cells[c]
        if geo.point_in_polygon(xy, poly):
            return c
        d = min(geo.point_segment_distance(xy, p, q) for p, q in zip(poly, np.roll(poly, -1, axis=0)))
        if d < bd:
            best, bd = c, d
    if bd > 1e-7 * net.mesh.diameter:
        raise GeodesicError("cut-locus ridge leaves the star unfolding")
    return best


def cut_locus(mesh: PolyhedronMesh, s: SurfacePoint | None = None, perturb: bool = True,
              seed: int = 0, star: SourceImages | None = None) -> DissectionTree:
    """Cut locus of ``s`` as a dissection tree (Voronoi ridges of the star unfolding folded back)."""
    if s is None:
        s = default_source(mesh)
    star = star or star_unfold(mesh, s, perturb, seed)
    net = star.net
    eps = 1e-9 * mesh.diameter
    poly = Polygon(net.boundary_polygon())
    segs = _voronoi_ridges(poly, star.images, eps)
    # planar graph over ridge endpoints, merged within a small tolerance
    vimg = [(v, xy) for v, lst in sorted(net.vertex_images.items()) for _, xy in lst]
    merge = 1e-7 * mesh.diameter
    keys: list[np.ndarray] = []
    kvert: list[int | None] = []

    def key_of(p):
        for i, q in enumerate(keys):
            if np.linalg.norm(p - q) <= merge:
                return i
        for v, xy in vimg:
            if np.linalg.norm(p - xy) <= merge:
                keys.append(np.asarray(xy, dtype=float))
                kvert.append(v)
                return len(keys) - 1
        keys.append(np.asarray(p, dtype=float))
        kvert.append(None)
        return len(keys) - 1

    adj: dict[int, set[int]] = {}
    for p, q in segs:
        i, j = key_of(p), key_of(q)
        if i == j:
            continue
        adj.setdefault(i, set()).add(j)
        adj.setdefault(j, set()).add(i)
    for i, nb in adj.items():
        if len(nb) == 1 and kvert[i] is None:
            raise GeodesicError("cut-locus ridge ends away from a vertex image")
    covered = {kvert[i] for i in adj if kvert[i] is not None}
    if covered != set(range(mesh.n_vertices)):
        raise GeodesicError(f"cut locus misses vertices {sorted(set(range(mesh.n_vertices)) - covered)}")

    node_of: dict[int, int] = {}
    nodes = [TreeNode(v, mesh.vertex_point(v), v) for v in range(mesh.n_vertices)]
    for i in sorted(adj):
        if kvert[i] is not None:
            node_of[i] = kvert[i]
    for i in sorted(adj):
        if kvert[i] is None and len(adj[i]) >= 3:
            c = _cell_at(net, keys[i])
            node_of[i] = len(nodes)
            nodes.append(TreeNode(len(nodes), net.surface_point(c, keys[i]), None))

    edges = []
    seen = set()
    for start in sorted(node_of, key=lambda i: node_of[i]):
        for first in sorted(adj[start]):
            if (start, first) in seen:
                continue
            chain = [start, first]
            while chain[-1] not in node_of:
                nxt = [w for w in adj[chain[-1]] if w != chain[-2]]
                if len(nxt) != 1:
                    raise GeodesicError("cut-locus ridge graph is not a tree")
                chain.append(nxt[0])
            seen.add((chain[0], chain[1]))
            seen.add((chain[-1], chain[-2]))
            pts: list[SurfacePoint] = []
            for u, w in zip(chain[:-1], chain[1:]):
                for k, (c, xy) in enumerate(_fold_segment(net, keys[u], keys[w])):
                    if pts and k == 0:
                        continue
                    pts.append(net.surface_point(c, xy))
            pts[0] = nodes[node_of[chain[0]]].point
            pts[-1] = nodes[node_of[chain[-1]]].point
            edges.append(TreeEdge(node_of[chain[0]], node_of[chain[-1]], tuple(_snap(mesh, pts))))
    tree = DissectionTree(nodes, edges)
    rep = validate_tree(mesh, tree)
    if not rep.valid:
        raise GeodesicError("cut locus is not a valid tree: " + "; ".join(rep.violations[:3]))
    return tree


def _snap(mesh: PolyhedronMesh, pts: list[SurfacePoint]) -> list[SurfacePoint]:
    """Clean barycentric noise and drop consecutive duplicates."""
    out = []
    for p in pts:
        q = mesh.location_surface_point(mesh.locate(_clamp(p)))
        if out and np.linalg.norm(mesh.point(q) - mesh.point(out[-1])) <= 1e-9 * mesh.diameter:
            continue
        out.append(q)
    return out


def _clamp(p: SurfacePoint) -> SurfacePoint:
    b = np.clip(np.asarray(p.bary), 0.0, None)
    return SurfacePoint(p.face, tuple(b / b.sum()))


def default_source(mesh: PolyhedronMesh) -> SurfacePoint:
    return SurfacePoint(0, (1 / 3, 1 / 3, 1 / 3))


def source_unfold(mesh: PolyhedronMesh, s: SurfacePoint | None = None, perturb: bool = True,
                  seed: int = 0) -> Net:
    return cut_and_unfold(mesh, cut_locus(mesh, s, perturb, seed))
