"""Isotetrahedra and the plane tilings generated by their nets."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import shapely
import shapely.affinity
from shapely.geometry import Polygon, box

from . import geometry as geo
from .errors import TilingError, WindowTooLargeError
from .mesh import PolyhedronMesh, convex_hull
from .unfold import Net

MAX_RADIUS = 12


@dataclass
class IsoTetrahedron:
    mesh: PolyhedronMesh
    sides: tuple[float, float, float]


def isotetra_from_triangle(a: float, b: float, c: float) -> IsoTetrahedron:
    """Tetrahedron whose four faces are congruent to the triangle with sides a, b, c."""
    p2 = (b * b + c * c - a * a) / 8
    q2 = (a * a + c * c - b * b) / 8
    r2 = (a * a + b * b - c * c) / 8
    if min(a, b, c) <= 0 or min(p2, q2, r2) <= 0:
        raise TilingError(f"triangle ({a}, {b}, {c}) is not acute")
    p, q, r = math.sqrt(p2), math.sqrt(q2), math.sqrt(r2)
    mesh = convex_hull([(p, q, r), (p, -q, -r), (-p, q, -r), (-p, -q, r)])
    iso = IsoTetrahedron(mesh, (float(a), float(b), float(c)))
    check_isotetrahedron(iso.mesh)
    return iso


def check_isotetrahedron(mesh: PolyhedronMesh, rel: float = 1e-9):
    """Raise unless all faces are congruent and every angle sum is pi."""
    if mesh.n_vertices != 4 or len(mesh.triangles) != 4:
        raise TilingError("source mesh is not a tetrahedron")
    sides = []
    for tri in mesh.triangles:
        v = mesh.vertices[tri]
        sides.append(sorted(float(np.linalg.norm(v[i] - v[(i + 1) % 3])) for i in range(3)))
    ref = np.array(sides[0])
    scale = float(ref.max())
    for s in sides[1:]:
        if np.max(np.abs(np.array(s) - ref)) > rel * scale:
            raise TilingError("faces are not congruent")
    if np.max(np.abs(mesh.angle_sums - math.pi)) > rel:
        raise TilingError("vertex angle sums differ from pi")


@dataclass
class TilingPatch:
    motions: list[np.ndarray]
    radius: int
    centers: list[np.ndarray]  # half-turn centres used as generators


def _key(m: np.ndarray, grid: float) -> tuple:
    return (round(m[0, 0]), round(m[1, 0]), round(m[0, 2] / grid), round(m[1, 2] / grid))


def tile_patch(net: Net, k: int) -> TilingPatch:
    """Half-turn group words of length at most ``k`` about the net's vertex images."""
    check_isotetrahedron(net.mesh)
    if k < 0:
        raise ValueError("radius must be non-negative")
    grid = 1e-9 * net.mesh.diameter
    centers: list[np.ndarray] = []
    seen_c = set()
    for v in sorted(net.vertex_images):
        for _, xy in net.vertex_images[v]:
            key = (round(xy[0] / grid), round(xy[1] / grid))
            if key not in seen_c:
                seen_c.add(key)
                centers.append(np.asarray(xy, dtype=float))
    gens = [geo.half_turn(c) for c in centers]
    motions = [np.eye(3)]
    seen = {_key(motions[0], grid)}
    frontier = motions
    for _ in range(k):
        nxt = []
        for m in frontier:
            for g in gens:
                w = m @ g
                # half-turn groups only contain translations and half-turns
                w[:2, :2] = np.round(w[:2, :2])
                key = _key(w, grid)
                if key not in seen:
                    seen.add(key)
                    nxt.append(w)
        motions.extend(nxt)
        frontier = nxt
    return TilingPatch(motions, k, centers)


@dataclass
class TilingReport:
    overlap: float
    gap: float
    window: tuple[float, float, float, float]
    copies: int
    covered_radius: float

    @property
    def passed(self) -> bool:
        return self.overlap < 1e-6 and self.gap < 1e-6

    def to_dict(self) -> dict:
        return {"overlap": self.overlap, "gap": self.gap, "window": list(self.window),
                "copies": self.copies, "covered_radius": self.covered_radius, "passed": self.passed}


def tile_shape(net: Net):
    poly = Polygon(net.boundary_polygon())
    if not poly.is_valid:
        poly = shapely.union_all(net.shapes())
    return poly


def _placed(shape, m):
    a, b, d, e = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    return shapely.affinity.affine_transform(shape, [a, b, d, e, m[0, 2], m[1, 2]])


def _grid(net: Net) -> float:
    return 1e-9 * net.mesh.diameter


def covered_radius(net: Net, patch: TilingPatch, centre) -> float:
    """Radius of the disk about ``centre`` inside the outer boundary of the patch."""
    shape = tile_shape(net)
    # snapping merges copies that meet along seams up to rounding
    union = shapely.union_all([_placed(shape, m) for m in patch.motions], grid_size=_grid(net))
    pt = shapely.Point(centre)
    polys = getattr(union, "geoms", [union])
    for g in polys:
        outer = Polygon(g.exterior)
        if outer.contains(pt):
            return float(outer.exterior.distance(pt))
    return 0.0


def verify_tiling(net: Net, patch: TilingPatch, window: tuple[float, float]) -> TilingReport:
    """Overlap and gap fractions of the patch inside a ``w x h`` window at the net centroid."""
    w, h = window
    if w <= 0 or h <= 0:
        raise ValueError("window must have positive size")
    c = net.centroid()
    need = 0.5 * math.hypot(w, h)
    rad = covered_radius(net, patch, c)
    if rad < need:
        raise WindowTooLargeError(_required(net, patch, c, need),
                                  f"window needs a covered disk of radius {need:.6g}, patch covers {rad:.6g}")
    win = box(c[0] - w / 2, c[1] - h / 2, c[0] + w / 2, c[1] + h / 2)
    shape = tile_shape(net)
    clipped = []
    for m in patch.motions:
        g = _placed(shape, m)
        if g.intersects(win):
            x = g.intersection(win)
            if x.area > 0:
                clipped.append(x)
    union = shapely.union_all(clipped) if clipped else Polygon()
    total = sum(x.area for x in clipped)
    area = win.area
    return TilingReport(max(0.0, (total - union.area) / area), max(0.0, (area - union.area) / area),
                        (float(c[0] - w / 2), float(c[1] - h / 2), float(w), float(h)), len(clipped), rad)


def _required(net: Net, patch: TilingPatch, centre, need: float) -> int:
    for k in range(patch.radius + 1, MAX_RADIUS + 1):
        if covered_radius(net, tile_patch(net, k), centre) >= need:
            return k
    return MAX_RADIUS + 1
