"""Planar primitives: predicates, rigid motions, polygons.

Rigid motions are 3x3 homogeneous matrices acting on row vectors of
2D points via :func:`apply`.
"""

from __future__ import annotations

import math

import numpy as np


def orient2d(a, b, c) -> float:
    """Twice the signed area of triangle abc (positive when counterclockwise)."""
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def polygon_area(points) -> float:
    """Signed shoelace area."""
    p = np.asarray(points, dtype=float)
    if len(p) < 3:
        return 0.0
    x, y = p[:, 0], p[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def polygon_centroid(points) -> np.ndarray:
    p = np.asarray(points, dtype=float)
    a = polygon_area(p)
    if abs(a) < 1e-300:
        return p.mean(axis=0)
    x, y = p[:, 0], p[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cross = x * yn - xn * y
    return np.array([np.sum((x + xn) * cross), np.sum((y + yn) * cross)]) / (6.0 * a)


def perimeter(points, closed=True) -> float:
    p = np.asarray(points, dtype=float)
    d = np.diff(np.vstack([p, p[:1]]) if closed else p, axis=0)
    return float(np.sum(np.hypot(d[:, 0], d[:, 1])))


# -- rigid motions ---------------------------------------------------------

IDENTITY = np.eye(3)


def motion(angle: float, tx: float = 0.0, ty: float = 0.0) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s, tx], [s, c, ty], [0.0, 0.0, 1.0]])


def apply(m: np.ndarray, points) -> np.ndarray:
    p = np.asarray(points, dtype=float)
    if p.ndim == 1:
        return m[:2, :2] @ p + m[:2, 2]
    return p @ m[:2, :2].T + m[:2, 2]


def invert(m: np.ndarray) -> np.ndarray:
    r = m[:2, :2]
    out = np.eye(3)
    out[:2, :2] = r.T
    out[:2, 2] = -r.T @ m[:2, 2]
    return out


def rotation_angle(m: np.ndarray) -> float:
    return math.atan2(m[1, 0], m[0, 0])


def half_turn(center) -> np.ndarray:
    """180 degree rotation about ``center``."""
    cx, cy = float(center[0]), float(center[1])
    return np.array([[-1.0, 0.0, 2 * cx], [0.0, -1.0, 2 * cy], [0.0, 0.0, 1.0]])


def rotation_about(center, angle: float) -> np.ndarray:
    c = np.asarray(center, dtype=float)
    m = motion(angle)
    m[:2, 2] = c - m[:2, :2] @ c
    return m


def motion_from_segments(p0, p1, q0, q1) -> np.ndarray:
    """Orientation-preserving motion sending segment p0p1 onto q0q1.

    Lengths are assumed equal; the rotation is fixed by the directions and
    the translation by the midpoints, which splits any length mismatch evenly.
    """
    p0, p1, q0, q1 = (np.asarray(v, dtype=float) for v in (p0, p1, q0, q1))
    a = math.atan2(q1[1] - q0[1], q1[0] - q0[0]) - math.atan2(p1[1] - p0[1], p1[0] - p0[0])
    m = motion(a)
    pm, qm = 0.5 * (p0 + p1), 0.5 * (q0 + q1)
    m[:2, 2] = qm - m[:2, :2] @ pm
    return m


def kabsch(src, dst):
    """Best rigid (proper) motion mapping ``src`` rows to ``dst`` rows.

    Returns ``(m, max_error)``.
    """
    a = np.asarray(src, dtype=float)
    b = np.asarray(dst, dtype=float)
    ca, cb = a.mean(axis=0), b.mean(axis=0)
    h = (a - ca).T @ (b - cb)
    u, _, vt = np.linalg.svd(h)
    d = np.sign(np.linalg.det(vt.T @ u.T)) or 1.0
    r = vt.T @ np.diag([1.0, d]) @ u.T
    m = np.eye(3)
    m[:2, :2] = r
    m[:2, 2] = cb - r @ ca
    err = np.linalg.norm(apply(m, a) - b, axis=1)
    return m, float(err.max()) if len(err) else 0.0


# -- distances and intersections ------------------------------------------

def point_segment_distance(p, a, b) -> float:
    p, a, b = (np.asarray(v, dtype=float) for v in (p, a, b))
    d = b - a
    dd = float(d @ d)
    t = 0.0 if dd == 0 else min(1.0, max(0.0, float((p - a) @ d) / dd))
    return float(np.linalg.norm(p - (a + t * d)))


def points_to_segments_distance(points, segs) -> np.ndarray:
    """Distance from each point (N,2|3) to the nearest of segments (M,2,2|3)."""
    p = np.asarray(points, dtype=float)[:, None, :]
    s = np.asarray(segs, dtype=float)
    a, b = s[None, :, 0, :], s[None, :, 1, :]
    d = b - a
    dd = np.einsum("...i,...i", d, d)
    dd = np.where(dd == 0, 1.0, dd)
    t = np.clip(np.einsum("...i,...i", p - a, d) / dd, 0.0, 1.0)
    proj = a + t[..., None] * d
    return np.linalg.norm(p - proj, axis=-1).min(axis=1)


def segments_intersect(p, q, r, s) -> bool:
    """Closed-segment intersection test with exact orientation signs."""
    d1, d2 = orient2d(r, s, p), orient2d(r, s, q)
    d3, d4 = orient2d(p, q, r), orient2d(p, q, s)
    if ((d1 > 0) != (d2 > 0)) and d1 != 0 and d2 != 0 and ((d3 > 0) != (d4 > 0)) and d3 != 0 and d4 != 0:
        return True

    def on(a, b, c):
        return min(a[0], b[0]) <= c[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])

    return (d1 == 0 and on(r, s, p)) or (d2 == 0 and on(r, s, q)) or (
        d3 == 0 and on(p, q, r)) or (d4 == 0 and on(p, q, s))


def segment_distance(p, q, r, s) -> float:
    if segments_intersect(p, q, r, s):
        return 0.0
    return min(point_segment_distance(p, r, s), point_segment_distance(q, r, s),
               point_segment_distance(r, p, q), point_segment_distance(s, p, q))


def line_params(p, q, a, b):
    """Parameters (t, u) with p + t(q-p) = a + u(b-a), or None if parallel."""
    d = np.subtract(q, p)
    e = np.subtract(b, a)
    den = d[0] * e[1] - d[1] * e[0]
    if den == 0:
        return None
    w = np.subtract(a, p)
    t = (w[0] * e[1] - w[1] * e[0]) / den
    u = (w[0] * d[1] - w[1] * d[0]) / den
    return float(t), float(u)


def angle_between(u, v) -> float:
    """Unsigned angle between two vectors of any dimension."""
    u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    c = float(u @ v) / (nu * nv)
    if len(u) == 2:
        s = abs(u[0] * v[1] - u[1] * v[0]) / (nu * nv)
    else:
        s = float(np.linalg.norm(np.cross(u, v))) / (nu * nv)
    return math.atan2(s, c)


def point_in_polygon(pt, poly, tol: float = 0.0) -> bool:
    """Even-odd containment; points within ``tol`` of the boundary count as inside."""
    poly = np.asarray(poly, dtype=float)
    n = len(poly)
    if tol > 0:
        for i in range(n):
            if point_segment_distance(pt, poly[i], poly[(i + 1) % n]) <= tol:
                return True
    x, y = pt
    inside = False
    for i in range(n):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % n]
        if (y1 > y) != (y2 > y):
            xi = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if xi > x:
                inside = not inside
    return inside


def ear_clip(points, tol: float = 1e-14) -> list[tuple[int, int, int]]:
    """Triangulate a simple counterclockwise polygon.

    Collinear vertices are kept as polygon vertices but never used as ear
    tips, so no zero-area triangle is produced when avoidable.
    """
    p = np.asarray(points, dtype=float)
    idx = list(range(len(p)))
    scale = max(1e-300, float(np.ptp(p, axis=0).max()) ** 2)
    tris = []
    guard = 0
    while len(idx) > 3 and guard < 10 * len(p) ** 2:
        guard += 1
        n = len(idx)
        best = None
        for k in range(n):
            i0, i1, i2 = idx[k - 1], idx[k], idx[(k + 1) % n]
            area = orient2d(p[i0], p[i1], p[i2])
            if area <= tol * scale:
                continue
            blocked = False
            for j in idx:
                if j in (i0, i1, i2):
                    continue
                if (orient2d(p[i0], p[i1], p[j]) >= 0 and orient2d(p[i1], p[i2], p[j]) >= 0
                        and orient2d(p[i2], p[i0], p[j]) >= 0):
                    if not (np.allclose(p[j], p[i0]) or np.allclose(p[j], p[i2])):
                        blocked = True
                        break
            if not blocked:
                best = k
                break
        if best is None:
            # only degenerate ears remain; fall back to the widest one
            best = max(range(n), key=lambda k: orient2d(p[idx[k - 1]], p[idx[k]], p[idx[(k + 1) % n]]))
        n = len(idx)
        tris.append((idx[best - 1], idx[best], idx[(best + 1) % n]))
        idx.pop(best)
    if len(idx) == 3:
        tris.append(tuple(idx))
    return tris


def polyline_hausdorff(a_segments, b_segments, samples: int = 8) -> float:
    """Symmetric Hausdorff distance between two segment soups, sampled.

    Each segment of one set is sampled at ``samples + 1`` points and measured
    against the other set's segments exactly.
    """
    a = np.asarray(a_segments, dtype=float)
    b = np.asarray(b_segments, dtype=float)
    if len(a) == 0 or len(b) == 0:
        return 0.0 if len(a) == len(b) else math.inf
    t = np.linspace(0.0, 1.0, samples + 1)[None, :, None]

    def directed(x, y):
        pts = (x[:, 0, None, :] * (1 - t) + x[:, 1, None, :] * t).reshape(-1, x.shape[-1])
        out = 0.0
        for chunk in range(0, len(pts), 2048):
            out = max(out, float(points_to_segments_distance(pts[chunk:chunk + 2048], y).max()))
        return out

    return max(directed(a, b), directed(b, a))
