"""Independent reference computations used to derive frozen test values."""

from __future__ import annotations

import itertools
import math

import numpy as np


def tri_adjacency(triangles) -> dict[int, list[tuple[int, tuple[int, int]]]]:
    """Triangle -> [(neighbour, shared vertex pair)], from raw index triples."""
    by_edge: dict[tuple[int, int], list[int]] = {}
    for t, tri in enumerate(triangles):
        for a, b in itertools.combinations(sorted(int(x) for x in tri), 2):
            by_edge.setdefault((a, b), []).append(t)
    adj: dict[int, list] = {t: [] for t in range(len(triangles))}
    for e, ts in sorted(by_edge.items()):
        if len(ts) == 2:
            adj[ts[0]].append((ts[1], e))
            adj[ts[1]].append((ts[0], e))
    return adj


def _flatten_first(p3):
    """Planar coordinates of a 3D triangle with p3[0] at the origin."""
    a, b, c = (np.asarray(x, float) for x in p3)
    u = b - a
    ex = u / np.linalg.norm(u)
    n = np.cross(u, c - a)
    ey = np.cross(n, ex)
    ey /= np.linalg.norm(ey)
    return {0: np.zeros(2), 1: np.array([u @ ex, 0.0]), 2: np.array([(c - a) @ ex, (c - a) @ ey])}


def _third(pa, pb, da, db, away_from):
    """Point at distances da, db from pa, pb on the side opposite ``away_from``."""
    d = np.linalg.norm(pb - pa)
    x = (da * da - db * db + d * d) / (2 * d)
    y = math.sqrt(max(da * da - x * x, 0.0))
    ex = (pb - pa) / d
    ey = np.array([-ex[1], ex[0]])
    side = np.sign(_cross2(pb - pa, away_from - pa))
    return pa + x * ex - side * y * ey


def _cross2(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _hits(p, q, a, b, tol):
    """Closed segment pq meets closed segment ab."""
    d1, d2 = _cross2(q - p, a - p), _cross2(q - p, b - p)
    d3, d4 = _cross2(b - a, p - a), _cross2(b - a, q - a)
    return d1 * d2 <= tol and d3 * d4 <= tol


def exhaustive_geodesic(vertices, triangles, s_face, s_bary, t_face, t_bary, max_depth=6) -> float:
    """Shortest straight unfolding over every simple triangle sequence of length <= max_depth."""
    V = np.asarray(vertices, float)
    T = [tuple(int(x) for x in tri) for tri in triangles]
    ps = np.asarray(s_bary) @ V[list(T[s_face])]
    pt = np.asarray(t_bary) @ V[list(T[t_face])]
    if s_face == t_face:
        return float(np.linalg.norm(ps - pt))
    adj = tri_adjacency(T)
    scale = float(np.max(np.linalg.norm(V[:, None] - V[None], axis=-1)))
    tol = 1e-12 * scale ** 2
    best = math.inf

    tri0 = T[s_face]
    flat = _flatten_first(V[list(tri0)])
    pos0 = {tri0[i]: flat[i] for i in range(3)}
    s2 = sum(s_bary[i] * pos0[tri0[i]] for i in range(3))

    def walk(t, pos, seq, visited):
        nonlocal best
        if t == t_face:
            tri = T[t]
            t2 = sum(t_bary[i] * pos[tri[i]] for i in range(3))
            if all(_hits(s2, t2, pa, pb, tol) for pa, pb in seq):
                best = min(best, float(np.linalg.norm(t2 - s2)))
            return
        if len(seq) >= max_depth:
            return
        for nb, (a, b) in adj[t]:
            if nb in visited:
                continue
            (c,) = set(T[nb]) - {a, b}
            (old,) = set(T[t]) - {a, b}
            pc = _third(pos[a], pos[b], np.linalg.norm(V[c] - V[a]), np.linalg.norm(V[c] - V[b]), pos[old])
            # a vertex may unfold to several images, so edges keep their own copies
            walk(nb, {**pos, c: pc}, seq + [(pos[a], pos[b])], visited | {nb})

    walk(s_face, pos0, [], {s_face})
    return best
