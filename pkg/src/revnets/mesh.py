"""Closed convex polyhedral surfaces with half-edge connectivity.

User faces may be arbitrary planar polygons; internally every face is
triangulated and each triangle carries an orthonormal 2D chart (first
corner at the origin, first edge along +x).  Surface points are expressed
in barycentric coordinates of one of these triangles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import geometry as geo
from .errors import DegeneratePolygonError, MeshValidationError, OffParseError

BARY_SNAP = 1e-9
PLANARITY_TOL = 1e-7


@dataclass(frozen=True)
class SurfacePoint:
    """A point on the surface: triangle index plus barycentric coordinates."""

    face: int
    bary: tuple[float, float, float]

    def __post_init__(self):
        b = tuple(float(x) for x in self.bary)
        if len(b) != 3:
            raise ValueError("barycentric coordinates need three components")
        object.__setattr__(self, "bary", b)


class Location(NamedTuple):
    """Canonical incidence of a surface point.

    kind is ``"v"`` (index = vertex), ``"e"`` (index = edge, param = position
    along the edge from its lower to its higher vertex) or ``"f"`` (index =
    triangle, param = barycentric triple).
    """

    kind: str
    index: int
    param: object = None


def _newell_normal(p: np.ndarray) -> np.ndarray:
    n = np.zeros(3)
    for i in range(len(p)):
        a, b = p[i], p[(i + 1) % len(p)]
        n += np.array([(a[1] - b[1]) * (a[2] + b[2]), (a[2] - b[2]) * (a[0] + b[0]),
                       (a[0] - b[0]) * (a[1] + b[1])])
    return n


class PolyhedronMesh:
    """Immutable closed, oriented polyhedral surface.

    Half-edge ``h = 3*t + k`` runs from ``triangles[t][k]`` to
    ``triangles[t][(k+1) % 3]``; ``next`` is implicit.
    """

    def __init__(self, vertices, faces: Sequence[Sequence[int]], is_dihedron: bool = False,
                 check_convex: bool = False):
        v = np.array(vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 3:
            raise MeshValidationError("vertices", "expected an (n, 3) array of coordinates")
        v.setflags(write=False)
        self.vertices = v
        self.faces = tuple(tuple(int(i) for i in f) for f in faces)
        self.is_dihedron = bool(is_dihedron)
        self.diameter = float(np.max(np.linalg.norm(v[:, None] - v[None], axis=-1))) if len(v) else 0.0
        self._validate_faces()
        self._triangulate()
        self._build_halfedges()
        self._build_charts()
        self._build_rings()
        self._transforms: dict[tuple[int, int], np.ndarray] = {}
        self.convex = self._check_convex()
        if check_convex and not self.convex:
            raise MeshValidationError("convexity", "vertex angle sum above 2*pi or reflex dihedral angle")

    # -- construction ---------------------------------------------------

    def _validate_faces(self):
        nv = len(self.vertices)
        tol = PLANARITY_TOL * max(self.diameter, 1e-300)
        for fi, f in enumerate(self.faces):
            if len(f) < 3:
                raise MeshValidationError("face size", f"face {fi} has fewer than 3 vertices")
            for i in f:
                if not 0 <= i < nv:
                    raise MeshValidationError("index out of range", f"face {fi} references vertex {i} of {nv}")
            if len(set(f)) != len(f):
                raise MeshValidationError("simple face", f"face {fi} repeats a vertex")
            p = self.vertices[list(f)]
            n = _newell_normal(p)
            if np.linalg.norm(n) <= tol * tol:
                raise MeshValidationError("non-planar face", f"face {fi} is degenerate")
            n = n / np.linalg.norm(n)
            dev = np.abs((p - p.mean(axis=0)) @ n).max()
            if dev > tol:
                raise MeshValidationError("non-planar face", f"face {fi} deviates {dev:.3g} from its plane")

    def _triangulate(self):
        tris, owner = [], []
        for fi, f in enumerate(self.faces):
            p = self.vertices[list(f)]
            n = _newell_normal(p)
            n /= np.linalg.norm(n)
            u = p[1] - p[0]
            u = u - (u @ n) * n
            u /= np.linalg.norm(u)
            w = np.cross(n, u)
            q = np.column_stack([(p - p[0]) @ u, (p - p[0]) @ w])
            if len(f) == 3:
                ears = [(0, 1, 2)]
            else:
                ears = geo.ear_clip(q)
            for a, b, c in ears:
                if geo.orient2d(q[a], q[b], q[c]) <= 0:
                    raise MeshValidationError("inverted orientation", f"face {fi} is not simple or not counterclockwise")
                tris.append((f[a], f[b], f[c]))
                owner.append(fi)
        self.triangles = np.array(tris, dtype=int)
        self.tri_face = np.array(owner, dtype=int)
        self.triangles.setflags(write=False)

    def _build_halfedges(self):
        t = self.triangles
        nt = len(t)
        directed = {}
        for ti in range(nt):
            for k in range(3):
                key = (int(t[ti, k]), int(t[ti, (k + 1) % 3]))
                if key in directed:
                    raise MeshValidationError("inverted orientation",
                                              f"directed edge {key} used twice (inconsistent face orientation)")
                directed[key] = 3 * ti + k
        twin = np.full(3 * nt, -1, dtype=int)
        edges, edge_he, he_edge = [], [], np.full(3 * nt, -1, dtype=int)
        for (a, b), h in sorted(directed.items()):
            if (b, a) not in directed:
                raise MeshValidationError("open edge", f"edge ({a}, {b}) has no twin")
            twin[h] = directed[(b, a)]
            if a < b:
                he_edge[h] = he_edge[directed[(b, a)]] = len(edges)
                edges.append((a, b))
                edge_he.append((h, directed[(b, a)]))
        self.he_twin = twin
        self.edges = np.array(edges, dtype=int).reshape(-1, 2)
        self.edge_he = np.array(edge_he, dtype=int).reshape(-1, 2)
        self.he_edge = he_edge
        self.edge_real = np.array([self.tri_face[h0 // 3] != self.tri_face[h1 // 3] for h0, h1 in edge_he], dtype=bool)
        self._edge_index = {(int(a), int(b)): i for i, (a, b) in enumerate(edges)}
        used = np.zeros(len(self.vertices), dtype=bool)
        used[t.ravel()] = True
        if not used.all():
            raise MeshValidationError("open edge", f"vertex {int(np.argmin(used))} is not on any face")
        euler = len(self.vertices) - int(self.edge_real.sum()) + len(self.faces)
        if euler != 2:
            raise MeshValidationError("Euler characteristic", f"V - E + F = {euler}, expected 2")

    def _build_charts(self):
        p = self.vertices[self.triangles]
        e1 = p[:, 1] - p[:, 0]
        e2 = p[:, 2] - p[:, 0]
        l1 = np.linalg.norm(e1, axis=1)
        ex = e1 / l1[:, None]
        n = np.cross(e1, e2)
        area2 = np.linalg.norm(n, axis=1)
        if np.any(area2 <= 1e-14 * max(self.diameter, 1e-300) ** 2):
            raise MeshValidationError("degenerate face", "zero-area triangle in face triangulation")
        n = n / area2[:, None]
        ey = np.cross(n, ex)
        self.tri_origin = p[:, 0].copy()
        self.tri_ex, self.tri_ey, self.tri_normal = ex, ey, n
        c = np.zeros((len(p), 3, 2))
        c[:, 1, 0] = l1
        c[:, 2, 0] = np.einsum("ij,ij->i", e2, ex)
        c[:, 2, 1] = np.einsum("ij,ij->i", e2, ey)
        self.tri_chart = c
        self.tri_area = 0.5 * area2

    def _build_rings(self):
        """Incident triangles of every vertex in counterclockwise order."""
        nv = len(self.vertices)
        first = [-1] * nv
        for h in range(3 * len(self.triangles)):
            v = int(self.triangles[h // 3, h % 3])
            if first[v] < 0:
                first[v] = h
        rings, offsets, sums = [], [], []
        for v in range(nv):
            ring, offs = [], []
            h = first[v]
            total = 0.0
            while True:
                t, k = divmod(h, 3)
                ring.append((t, k))
                offs.append(total)
                total += self.corner_angle(t, k)
                prev = 3 * t + (k + 2) % 3
                h = int(self.he_twin[prev])
                if h == first[v]:
                    break
                if len(ring) > 3 * len(self.triangles):
                    raise MeshValidationError("manifold", f"vertex {v} has a non-manifold fan")
            rings.append(ring)
            offsets.append(offs)
            sums.append(total)
        self.vertex_ring = rings
        self.vertex_ring_offset = offsets
        self.angle_sums = np.array(sums)
        count = np.bincount(self.triangles.ravel(), minlength=nv)
        for v in range(nv):
            if len(rings[v]) != count[v]:
                raise MeshValidationError("manifold", f"vertex {v} has more than one fan of faces")

    def _check_convex(self) -> bool:
        tol = 1e-7
        if np.any(self.angle_sums > 2 * math.pi + tol):
            return False
        if self.is_dihedron:
            # dihedral angles are identically 0 on a doubly covered polygon
            return True
        d = tol * self.diameter
        for h0, h1 in self.edge_he:
            t0, t1 = h0 // 3, h1 // 3
            opp = self.vertices[self.triangles[t1, (h1 % 3 + 2) % 3]]
            if (opp - self.tri_origin[t0]) @ self.tri_normal[t0] > d:
                return False
        return True

    # -- basic queries ----------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        """Edges of the user-visible face structure (fan diagonals excluded)."""
        return int(self.edge_real.sum())

    def corner_angle(self, t: int, k: int) -> float:
        c = self.tri_chart[t]
        return geo.angle_between(c[(k + 1) % 3] - c[k], c[(k + 2) % 3] - c[k])

    def edge_index(self, a: int, b: int) -> int:
        return self._edge_index[(min(a, b), max(a, b))]

    def has_edge(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self._edge_index

    def edge_length(self, e: int) -> float:
        a, b = self.edges[e]
        return float(np.linalg.norm(self.vertices[a] - self.vertices[b]))

    def real_edge_graph(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for e in np.flatnonzero(self.edge_real):
            a, b = self.edges[e]
            adj[a].append(int(b))
            adj[b].append(int(a))
        return [sorted(x) for x in adj]

    # -- charts --------------------------------------------------------

    def to_chart(self, t: int, p3) -> np.ndarray:
        d = np.asarray(p3, dtype=float) - self.tri_origin[t]
        return np.stack([d @ self.tri_ex[t], d @ self.tri_ey[t]], axis=-1)

    def from_chart(self, t: int, xy) -> np.ndarray:
        xy = np.asarray(xy, dtype=float)
        return self.tri_origin[t] + xy[..., :1] * self.tri_ex[t] + xy[..., 1:2] * self.tri_ey[t]

    def bary_from_chart(self, t: int, xy) -> tuple[float, float, float]:
        c = self.tri_chart[t]
        x, y = float(xy[0]), float(xy[1])
        # corner 0 at origin, corner 1 on +x
        b2 = y / c[2, 1]
        b1 = (x - b2 * c[2, 0]) / c[1, 0]
        return (1.0 - b1 - b2, b1, b2)

    def chart_of(self, p: SurfacePoint, t: int | None = None) -> np.ndarray:
        """Chart coordinates of ``p`` in triangle ``t`` (default: its own)."""
        if t is None or t == p.face:
            return np.asarray(p.bary) @ self.tri_chart[p.face]
        return self.to_chart(t, self.point(p))

    def point(self, p: SurfacePoint) -> np.ndarray:
        return np.asarray(p.bary) @ self.vertices[self.triangles[p.face]]

    def tri_transform(self, ta: int, tb: int, edge=None) -> np.ndarray:
        """Motion taking chart ``tb`` onto chart ``ta`` unfolded across their shared edge.

        ``edge`` (a vertex pair) disambiguates triangles sharing several edges,
        as on a triangular dihedron.
        """
        key = (ta, tb, edge)
        m = self._transforms.get(key)
        if m is None:
            if edge is None:
                shared = [int(x) for x in self.triangles[ta] if x in set(int(y) for y in self.triangles[tb])]
            else:
                shared = list(edge)
            if len(shared) != 2:
                raise ValueError(f"triangles {ta} and {tb} do not share exactly one edge")
            u, w = shared
            cu_a = self.tri_chart[ta][list(self.triangles[ta]).index(u)]
            cw_a = self.tri_chart[ta][list(self.triangles[ta]).index(w)]
            cu_b = self.tri_chart[tb][list(self.triangles[tb]).index(u)]
            cw_b = self.tri_chart[tb][list(self.triangles[tb]).index(w)]
            m = geo.motion_from_segments(cu_b, cw_b, cu_a, cw_a)
            self._transforms[key] = m
        return m

    # -- surface points --------------------------------------------------

    def vertex_point(self, v: int) -> SurfacePoint:
        t, k = self.vertex_ring[v][0]
        b = [0.0, 0.0, 0.0]
        b[k] = 1.0
        return SurfacePoint(t, tuple(b))

    def edge_point(self, e: int, s: float) -> SurfacePoint:
        """Point at fraction ``s`` along edge ``e`` from its lower vertex."""
        a, b = (int(x) for x in self.edges[e])
        h = int(self.edge_he[e, 0])
        t, k = divmod(h, 3)
        bary = [0.0, 0.0, 0.0]
        tri = list(self.triangles[t])
        bary[tri.index(a)] = 1.0 - s
        bary[tri.index(b)] = s
        return SurfacePoint(t, tuple(bary))

    def chart_point(self, t: int, xy) -> SurfacePoint:
        return SurfacePoint(t, self.bary_from_chart(t, xy))

    def locate(self, p: SurfacePoint) -> Location:
        t = p.face
        if not 0 <= t < len(self.triangles):
            raise ValueError(f"face index {t} out of range")
        b = np.array(p.bary, dtype=float)
        if b.min() < -1e-6 or abs(b.sum() - 1.0) > 1e-6:
            raise ValueError(f"invalid barycentric coordinates {p.bary}")
        b[b < BARY_SNAP] = 0.0
        b /= b.sum()
        nz = np.flatnonzero(b)
        tri = self.triangles[t]
        if len(nz) == 1:
            return Location("v", int(tri[nz[0]]))
        if len(nz) == 2:
            i, j = int(tri[nz[0]]), int(tri[nz[1]])
            e = self.edge_index(i, j)
            lo = int(self.edges[e, 0])
            s = float(b[nz[1]] if lo == i else b[nz[0]])
            return Location("e", e, s)
        return Location("f", t, (float(b[0]), float(b[1]), float(b[2])))

    def location_tris(self, loc: Location) -> list[int]:
        if loc.kind == "v":
            return [t for t, _ in self.vertex_ring[loc.index]]
        if loc.kind == "e":
            return [int(h) // 3 for h in self.edge_he[loc.index]]
        return [loc.index]

    def location_point(self, loc: Location) -> np.ndarray:
        if loc.kind == "v":
            return self.vertices[loc.index].copy()
        if loc.kind == "e":
            a, b = self.edges[loc.index]
            return (1 - loc.param) * self.vertices[a] + loc.param * self.vertices[b]
        return np.asarray(loc.param) @ self.vertices[self.triangles[loc.index]]

    def location_surface_point(self, loc: Location) -> SurfacePoint:
        if loc.kind == "v":
            return self.vertex_point(loc.index)
        if loc.kind == "e":
            return self.edge_point(loc.index, loc.param)
        return SurfacePoint(loc.index, loc.param)

    def angle_sum(self, v: int) -> float:
        return float(self.angle_sums[v])

    def surface_area(self) -> float:
        return float(self.tri_area.sum())

    def polyline_from_3d(self, points) -> list[SurfacePoint]:
        """Convert a 3D polyline lying on the surface into SurfacePoints.

        Every segment must lie in one user face; segments are split where
        they cross the face's internal triangulation diagonals.
        """
        pts = [np.asarray(p, dtype=float) for p in points]
        out: list[SurfacePoint] = []
        tol = 1e-9 * self.diameter
        for a, b in zip(pts[:-1], pts[1:]):
            fa = self._faces_containing(a, tol)
            fb = self._faces_containing(b, tol)
            common = sorted(set(fa) & set(fb))
            if not common:
                raise ValueError("polyline segment does not lie in a single face")
            f = common[0]
            tris = [int(t) for t in np.flatnonzero(self.tri_face == f)]
            t0 = tris[0]
            qa, qb = self.to_chart(t0, a), self.to_chart(t0, b)
            params = {0.0, 1.0}
            for t in tris:
                c = self.to_chart(t0, self.vertices[self.triangles[t]])
                for k in range(3):
                    r = geo.line_params(qa, qb, c[k], c[(k + 1) % 3])
                    if r and 1e-12 < r[0] < 1 - 1e-12 and -1e-12 <= r[1] <= 1 + 1e-12:
                        params.add(r[0])
            seq = sorted(params)
            for i, s in enumerate(seq):
                if out and i == 0:
                    continue
                out.append(self._surface_point_in_face(f, a + s * (b - a), tol))
        return out

    def _faces_containing(self, p, tol) -> list[int]:
        found = []
        for t in range(len(self.triangles)):
            if self._tri_contains(t, p, tol):
                found.append(int(self.tri_face[t]))
        return sorted(set(found))

    def _tri_contains(self, t, p, tol) -> bool:
        if abs((p - self.tri_origin[t]) @ self.tri_normal[t]) > tol:
            return False
        xy = self.to_chart(t, p)
        c = self.tri_chart[t]
        return geo.point_in_polygon(xy, c, tol)

    def _surface_point_in_face(self, f, p, tol) -> SurfacePoint:
        for t in np.flatnonzero(self.tri_face == f):
            if self._tri_contains(int(t), p, tol):
                b = np.clip(self.bary_from_chart(int(t), self.to_chart(int(t), p)), 0.0, None)
                return SurfacePoint(int(t), tuple(b / b.sum()))
        raise ValueError("point not in face")


# -- I/O ---------------------------------------------------------------------

def load_off(text: str) -> PolyhedronMesh:
    """Parse an ASCII OFF document and validate the surface."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((lineno, line.split()))
    if not rows:
        raise OffParseError("empty document")
    lineno, head = rows[0]
    if head[0] != "OFF":
        raise OffParseError(f"expected 'OFF' header, got {head[0]!r}", lineno)
    rest = head[1:]
    i = 1
    if not rest:
        if len(rows) < 2:
            raise OffParseError("missing counts line", lineno)
        lineno, rest = rows[1]
        i = 2
    try:
        nv, nf = int(rest[0]), int(rest[1])
    except (ValueError, IndexError):
        raise OffParseError("malformed counts line", lineno) from None
    if nv < 0 or nf < 0:
        raise OffParseError("negative counts", lineno)
    if len(rows) < i + nv + nf:
        raise OffParseError(f"expected {nv} vertex and {nf} face rows", rows[-1][0])
    verts = []
    for lineno, tok in rows[i:i + nv]:
        try:
            if len(tok) < 3:
                raise ValueError
            verts.append([float(x) for x in tok[:3]])
        except ValueError:
            raise OffParseError("malformed vertex row", lineno) from None
    faces = []
    for lineno, tok in rows[i + nv:i + nv + nf]:
        try:
            k = int(tok[0])
            idx = [int(x) for x in tok[1:1 + k]]
            if len(idx) != k:
                raise ValueError
        except ValueError:
            raise OffParseError("malformed face row", lineno) from None
        for x in idx:
            if not 0 <= x < nv:
                raise OffParseError(f"vertex index {x} out of range (0..{nv - 1})", lineno)
        faces.append(idx)
    v = np.array(verts, dtype=float).reshape(-1, 3)
    dihedron = False
    if len(faces) == 2 and len(v) >= 3:
        n = _newell_normal(v[faces[0]])
        dihedron = sorted(faces[0]) == sorted(faces[1]) and bool(
            np.abs((v - v[0]) @ (n / np.linalg.norm(n))).max() <= PLANARITY_TOL * np.ptp(v, axis=0).max())
    mesh = PolyhedronMesh(v, faces, is_dihedron=dihedron)
    if not dihedron:
        _check_outward(mesh)
    return mesh


def _check_outward(mesh: PolyhedronMesh):
    p = mesh.vertices[mesh.triangles]
    vol = np.einsum("ij,ij->i", p[:, 0], np.cross(p[:, 1], p[:, 2])).sum() / 6.0
    if vol <= 0:
        raise MeshValidationError("inverted orientation", "faces are oriented inward (negative volume)")


def write_off(mesh: PolyhedronMesh) -> str:
    lines = ["OFF", f"{mesh.n_vertices} {len(mesh.faces)} {mesh.n_edges}"]
    for x, y, z in mesh.vertices:
        lines.append(f"{x:.17g} {y:.17g} {z:.17g}")
    for f in mesh.faces:
        lines.append(" ".join([str(len(f))] + [str(i) for i in f]))
    return "\n".join(lines) + "\n"


# -- constructors ------------------------------------------------------------

def make_dihedron(polygon) -> PolyhedronMesh:
    """Doubly covered polygon: a front copy and a mirrored back copy glued along the rim."""
    p = np.asarray(polygon, dtype=float)
    if p.ndim != 2 or p.shape[1] != 2 or len(p) < 3:
        raise DegeneratePolygonError("need at least three 2D points")
    area = geo.polygon_area(p)
    scale = float(np.ptp(p, axis=0).max()) if len(p) else 0.0
    if abs(area) <= 1e-12 * scale * scale:
        raise DegeneratePolygonError("polygon has zero area (collinear points)")
    if area < 0:
        p = p[::-1]
    n = len(p)
    for i in range(n):
        if np.linalg.norm(p[(i + 1) % n] - p[i]) <= 1e-12 * scale:
            raise DegeneratePolygonError(f"repeated vertex {i}")
        if abs(geo.orient2d(p[i - 1], p[i], p[(i + 1) % n])) <= 1e-12 * scale * scale:
            raise DegeneratePolygonError(f"vertex {i} is collinear with its neighbours")
    for i in range(n):
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            if geo.segments_intersect(p[i], p[(i + 1) % n], p[j], p[(j + 1) % n]):
                raise DegeneratePolygonError("polygon is self-intersecting")
    verts = np.column_stack([p, np.zeros(n)])
    front = list(range(n))
    back = front[::-1]
    return PolyhedronMesh(verts, [front, back], is_dihedron=True)


def convex_hull(points) -> PolyhedronMesh:
    """Triangulated convex hull with outward-oriented faces."""
    from scipy.spatial import ConvexHull

    pts = np.asarray(points, dtype=float)
    hull = ConvexHull(pts)
    used = sorted(set(int(i) for i in hull.simplices.ravel()))
    remap = {old: new for new, old in enumerate(used)}
    v = pts[used]
    c = v.mean(axis=0)
    faces = []
    for s in hull.simplices:
        a, b, d = (remap[int(i)] for i in s)
        n = np.cross(v[b] - v[a], v[d] - v[a])
        if n @ (v[a] - c) < 0:
            b, d = d, b
        faces.append([a, b, d])
    return PolyhedronMesh(v, faces)


def random_sphere_hull(n: int, rng: np.random.Generator) -> PolyhedronMesh:
    """Convex hull of ``n`` random points on the unit sphere (all on the hull)."""
    while True:
        x = rng.normal(size=(n, 3))
        x /= np.linalg.norm(x, axis=1, keepdims=True)
        try:
            mesh = convex_hull(x)
        except Exception:
            continue
        if mesh.n_vertices == n and np.all(mesh.tri_area > 1e-4) and mesh.angle_sums.max() < 2 * math.pi - 1e-3:
            return mesh


def unit_cube() -> PolyhedronMesh:
    v = [(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)]
    # index = 4x + 2y + z
    faces = [
        [0, 1, 3, 2],  # x = 0
        [4, 6, 7, 5],  # x = 1
        [0, 4, 5, 1],  # y = 0
        [2, 3, 7, 6],  # y = 1
        [0, 2, 6, 4],  # z = 0
        [1, 5, 7, 3],  # z = 1
    ]
    return PolyhedronMesh(v, faces)


def regular_tetrahedron(edge: float = 1.0) -> PolyhedronMesh:
    s = edge * math.sqrt(1.0 / 8.0)
    v = [(s, s, s), (s, -s, -s), (-s, s, -s), (-s, -s, s)]
    return convex_hull(v)
