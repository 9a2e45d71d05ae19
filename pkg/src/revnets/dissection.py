"""Dissection trees on a polyhedral surface.

A dissection tree spans every mesh vertex; its edges are geodesic
polylines whose consecutive points share a triangle.  Besides validation
and the crossing test this module holds the two tree generators: uniform
spanning trees of the 1-skeleton, and trees routed through the interior of
an existing net.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from . import geometry as geo
from .errors import RoutingError, TreeError
from .mesh import Location, PolyhedronMesh, SurfacePoint

ANGLE_TOL = 1e-9


@dataclass(frozen=True)
class TreeNode:
    id: int
    point: SurfacePoint
    vertex: int | None = None

    @property
    def is_steiner(self) -> bool:
        return self.vertex is None


@dataclass(frozen=True)
class TreeEdge:
    a: int
    b: int
    polyline: tuple[SurfacePoint, ...]

    def __post_init__(self):
        object.__setattr__(self, "polyline", tuple(self.polyline))


@dataclass
class DissectionTree:
    nodes: list[TreeNode]
    edges: list[TreeEdge]

    def __post_init__(self):
        for i, n in enumerate(self.nodes):
            if n.id != i:
                raise TreeError(f"node ids must be 0..n-1 in order (node {i} has id {n.id})")

    def adjacency(self) -> list[list[int]]:
        """Incident edge ids per node."""
        adj: list[list[int]] = [[] for _ in self.nodes]
        for i, e in enumerate(self.edges):
            if 0 <= e.a < len(adj):
                adj[e.a].append(i)
            if 0 <= e.b < len(adj) and e.b != e.a:
                adj[e.b].append(i)
        return adj

    def degree(self, node: int) -> int:
        return sum((e.a == node) + (e.b == node) for e in self.edges)

    def vertex_node(self, v: int) -> int:
        for n in self.nodes:
            if n.vertex == v:
                return n.id
        raise KeyError(v)


@dataclass
class TreeReport:
    violations: list[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.valid


def skeleton_tree(mesh: PolyhedronMesh, pairs) -> DissectionTree:
    """Tree whose edges are mesh edges given as vertex pairs."""
    nodes = [TreeNode(v, mesh.vertex_point(v), v) for v in range(mesh.n_vertices)]
    edges = []
    for a, b in pairs:
        a, b = int(a), int(b)
        if not mesh.has_edge(a, b):
            raise TreeError(f"({a}, {b}) is not a mesh edge")
        edges.append(TreeEdge(a, b, (mesh.vertex_point(a), mesh.vertex_point(b))))
    return DissectionTree(nodes, edges)


def tree_length(mesh: PolyhedronMesh, tree: DissectionTree) -> float:
    if not tree.edges:
        raise TreeError("tree has no edges")
    return sum(polyline_length(mesh, e.polyline) for e in tree.edges)


def polyline_length(mesh: PolyhedronMesh, polyline) -> float:
    p = np.array([mesh.point(q) for q in polyline])
    return float(np.linalg.norm(np.diff(p, axis=0), axis=1).sum())


# -- segments ----------------------------------------------------------------

@dataclass
class _Seg:
    tag: int
    edge: int
    idx: int
    la: Location
    lb: Location
    pa: np.ndarray
    pb: np.ndarray
    tris: tuple[int, ...]
    node_a: int | None
    node_b: int | None


def segment_tris(mesh: PolyhedronMesh, la: Location, lb: Location) -> tuple[int, ...]:
    """Triangles containing the segment between two located points.

    One triangle for segments crossing a face, two for segments running
    along a mesh edge; empty when the points share no triangle.
    """
    common = sorted(set(mesh.location_tris(la)) & set(mesh.location_tris(lb)))
    if len(common) <= 1:
        return tuple(common)
    ends = {la.kind, lb.kind}
    if "f" in ends:
        return (la.index,) if la.kind == "f" else (lb.index,)
    verts_a = _loc_vertices(mesh, la)
    verts_b = _loc_vertices(mesh, lb)
    shared = verts_a | verts_b
    for e in range(len(mesh.edges)):
        a, b = (int(x) for x in mesh.edges[e])
        if shared <= {a, b} and (la.kind != "e" or la.index == e) and (lb.kind != "e" or lb.index == e):
            return tuple(sorted(int(h) // 3 for h in mesh.edge_he[e]))
    # two points on different edges of one triangle (possible on tiny dihedra)
    return (common[0],)


def _loc_vertices(mesh, loc) -> set[int]:
    if loc.kind == "v":
        return {loc.index}
    if loc.kind == "e":
        return {int(x) for x in mesh.edges[loc.index]}
    return set()


def _segments(mesh: PolyhedronMesh, tree: DissectionTree, tag: int, problems: list[str]) -> list[_Seg]:
    segs = []
    for ei, e in enumerate(tree.edges):
        locs = []
        for q in e.polyline:
            try:
                locs.append(mesh.locate(q))
            except ValueError as exc:
                problems.append(f"edge {ei}: {exc}")
                locs = None
                break
        if locs is None:
            continue
        for k in range(len(locs) - 1):
            la, lb = locs[k], locs[k + 1]
            tris = segment_tris(mesh, la, lb)
            if not tris:
                problems.append(f"edge {ei}: polyline points {k} and {k + 1} share no face")
                continue
            segs.append(_Seg(tag, ei, k, la, lb, mesh.location_point(la), mesh.location_point(lb), tris,
                             e.a if k == 0 else None, e.b if k == len(locs) - 2 else None))
    return segs


def _by_triangle(segs):
    buckets = defaultdict(list)
    for s in segs:
        for t in s.tris:
            buckets[t].append(s)
    return buckets


def _direction_angle(u, v) -> float:
    return math.atan2(u[0] * v[1] - u[1] * v[0], u[0] * v[0] + u[1] * v[1])


def _conflict(mesh, t, s1: _Seg, s2: _Seg, eps, node_pos1, node_pos2, same_tree) -> str | None:
    """Describe an illegal contact between two segments inside triangle ``t``."""
    a1, b1 = mesh.to_chart(t, s1.pa), mesh.to_chart(t, s1.pb)
    a2, b2 = mesh.to_chart(t, s2.pa), mesh.to_chart(t, s2.pb)
    if geo.segment_distance(a1, b1, a2, b2) > eps:
        return None
    ends1 = [(s1.node_a, a1, b1), (s1.node_b, b1, a1)]
    ends2 = [(s2.node_a, a2, b2), (s2.node_b, b2, a2)]
    if same_tree and s1.edge == s2.edge and abs(s1.idx - s2.idx) == 1:
        # consecutive pieces of one polyline share their joint point
        j = s1.idx if s1.idx > s2.idx else s2.idx
        first, second = (s1, s2) if s1.idx < s2.idx else (s2, s1)
        p = mesh.to_chart(t, first.pb)
        u = mesh.to_chart(t, first.pa) - p
        w = mesh.to_chart(t, second.pb) - p
        if abs(_direction_angle(u, w)) <= ANGLE_TOL:
            return f"edge {s1.edge} folds back on itself at point {j}"
        return None
    for n1, p1, q1 in ends1:
        if n1 is None:
            continue
        for n2, p2, q2 in ends2:
            if n2 is None:
                continue
            if same_tree and n1 != n2:
                continue
            if np.linalg.norm(node_pos1[n1] - node_pos2[n2]) > eps:
                continue
            if np.linalg.norm(p1 - p2) > eps:
                continue
            if abs(_direction_angle(q1 - p1, q2 - p2)) <= ANGLE_TOL:
                return "overlapping directions at a shared node"
            return None
    return "interiors intersect"


def _node_positions(mesh, tree):
    return {n.id: mesh.point(n.point) for n in tree.nodes}


def validate_tree(mesh: PolyhedronMesh, tree: DissectionTree) -> TreeReport:
    """Check every dissection-tree invariant; violations are returned as data."""
    report = TreeReport()
    v = report.violations
    eps = 1e-9 * mesh.diameter
    seen: dict[int, int] = {}
    bad_ref = False
    for n in tree.nodes:
        try:
            loc = mesh.locate(n.point)
        except ValueError as exc:
            v.append(f"node {n.id}: {exc}")
            bad_ref = True
            continue
        if n.vertex is not None:
            if not 0 <= n.vertex < mesh.n_vertices:
                v.append(f"node {n.id}: vertex {n.vertex} out of range")
                continue
            if loc != Location("v", n.vertex):
                v.append(f"node {n.id}: point does not coincide with vertex {n.vertex}")
            if n.vertex in seen:
                v.append(f"vertex {n.vertex} appears twice")
            seen[n.vertex] = n.id
        elif loc.kind == "v":
            v.append(f"node {n.id}: Steiner node placed on vertex {loc.index}")
    for vert in range(mesh.n_vertices):
        if vert not in seen:
            v.append(f"vertex {vert} unspanned")
    nn = len(tree.nodes)
    for i, e in enumerate(tree.edges):
        if not (0 <= e.a < nn and 0 <= e.b < nn) or e.a == e.b:
            v.append(f"edge {i}: invalid endpoints ({e.a}, {e.b})")
            bad_ref = True
            continue
        if len(e.polyline) < 2:
            v.append(f"edge {i}: polyline needs at least two points")
            bad_ref = True
            continue
        try:
            locs = [mesh.locate(q) for q in e.polyline]
        except ValueError as exc:
            v.append(f"edge {i}: {exc}")
            bad_ref = True
            continue
        if bad_ref:
            continue
        pa, pb = mesh.point(e.polyline[0]), mesh.point(e.polyline[-1])
        if np.linalg.norm(pa - mesh.point(tree.nodes[e.a].point)) > eps or \
                np.linalg.norm(pb - mesh.point(tree.nodes[e.b].point)) > eps:
            v.append(f"edge {i}: polyline endpoints do not match nodes {e.a}, {e.b}")
        for k, loc in enumerate(locs[1:-1], start=1):
            if loc.kind == "v":
                v.append(f"edge {i}: passes through a vertex at point {k}")
    if bad_ref:
        return report
    parent = list(range(nn))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    cycle = False
    for e in tree.edges:
        ra, rb = find(e.a), find(e.b)
        if ra == rb:
            cycle = True
        parent[ra] = rb
    if cycle:
        v.append("contains a cycle")
    if nn and len({find(i) for i in range(nn)}) > 1:
        v.append("not connected")
    for n in tree.nodes:
        if n.vertex is None and tree.degree(n.id) < 3:
            v.append(f"Steiner node {n.id} has degree {tree.degree(n.id)} < 3")
    segs = _segments(mesh, tree, 0, v)
    for s in segs:
        if np.linalg.norm(s.pb - s.pa) <= eps:
            v.append(f"edge {s.edge}: zero-length segment {s.idx}")
    pos = _node_positions(mesh, tree)
    for t, bucket in _by_triangle(segs).items():
        for s1, s2 in itertools.combinations(bucket, 2):
            if s1.edge == s2.edge and s1.idx == s2.idx:
                continue
            why = _conflict(mesh, t, s1, s2, eps, pos, pos, True)
            if why:
                msg = f"edges {s1.edge} and {s2.edge} not embedded: {why}"
                if msg not in v:
                    v.append(msg)
    return report


# -- crossing ------------------------------------------------------------------

@dataclass
class CrossingReport:
    crossing: bool
    witness: str | None = None
    # (D1 edge, D2 edge) -> side of the D1 edge ("left"/"right") carrying the D1 copy
    coincident: dict[tuple[int, int], str] = field(default_factory=dict)


def _coincident_pairs(mesh, d1, d2, eps):
    pos1, pos2 = _node_positions(mesh, d1), _node_positions(mesh, d2)
    pairs = {}
    for i, e1 in enumerate(d1.edges):
        ends1 = (pos1[e1.a], pos1[e1.b])
        for j, e2 in enumerate(d2.edges):
            ends2 = (pos2[e2.a], pos2[e2.b])
            same = np.linalg.norm(ends1[0] - ends2[0]) < eps and np.linalg.norm(ends1[1] - ends2[1]) < eps
            flip = np.linalg.norm(ends1[0] - ends2[1]) < eps and np.linalg.norm(ends1[1] - ends2[0]) < eps
            if not (same or flip):
                continue
            p1 = np.array([mesh.point(q) for q in e1.polyline])
            p2 = np.array([mesh.point(q) for q in e2.polyline])
            s1 = np.stack([p1[:-1], p1[1:]], axis=1)
            s2 = np.stack([p2[:-1], p2[1:]], axis=1)
            if geo.polyline_hausdorff(s1, s2, samples=4) < eps * 10:
                pairs[(i, j)] = flip
    return pairs


def node_direction_angle(mesh: PolyhedronMesh, loc: Location, seg_tris, toward) -> float:
    """Angular position, around the point ``loc``, of the direction toward a 3D point.

    Angles are measured counterclockwise on the surface; the full turn is the
    vertex angle sum at vertices and 2*pi elsewhere.
    """
    here = mesh.location_point(loc)
    t = seg_tris[0]
    d = mesh.to_chart(t, toward) - mesh.to_chart(t, here)
    if loc.kind == "f":
        return math.atan2(d[1], d[0]) % (2 * math.pi)
    tri = [int(x) for x in mesh.triangles[t]]
    if loc.kind == "e":
        a, b = (int(x) for x in mesh.edges[loc.index])
        h0 = int(mesh.edge_he[loc.index, 0])
        k = tri.index(a) if h0 // 3 == t else tri.index(b)
        base = 0.0 if h0 // 3 == t else math.pi
        ref = mesh.tri_chart[t][(k + 1) % 3] - mesh.tri_chart[t][k]
        ang = _direction_angle(ref, d)
        if ang < 0:
            ang = 0.0 if ang > -1e-7 else ang + 2 * math.pi
        return (base + ang) % (2 * math.pi)
    v = loc.index
    k = tri.index(v)
    ring = mesh.vertex_ring[v]
    off = mesh.vertex_ring_offset[v][ring.index((t, k))]
    ref = mesh.tri_chart[t][(k + 1) % 3] - mesh.tri_chart[t][k]
    ang = _direction_angle(ref, d)
    if ang < 0:
        ang = 0.0 if ang > -1e-7 else ang + 2 * math.pi
    return (off + ang) % mesh.angle_sums[v]


def _node_fans(mesh, tree, tag, segs):
    """For each node: list of (angle, tag, edge id, outgoing?) for incident edges."""
    fans = defaultdict(list)
    for s in segs:
        if s.node_a is not None:
            fans[s.node_a].append((node_direction_angle(mesh, s.la, s.tris, s.pb), tag, s.edge, True))
        if s.node_b is not None:
            fans[s.node_b].append((node_direction_angle(mesh, s.lb, s.tris, s.pa), tag, s.edge, False))
    return fans


def analyze_crossing(mesh: PolyhedronMesh, d1: DissectionTree, d2: DissectionTree) -> CrossingReport:
    """Full crossing analysis; see :func:`crossing`.

    Edges shared by both trees are allowed (they become empty pieces) when a
    consistent choice of which copy lies on which side exists.
    """
    eps = 1e-9 * mesh.diameter
    problems: list[str] = []
    s1 = _segments(mesh, d1, 1, problems)
    s2 = _segments(mesh, d2, 2, problems)
    if problems:
        return CrossingReport(True, "; ".join(problems))
    pairs = _coincident_pairs(mesh, d1, d2, eps)
    paired1 = {i for i, _ in pairs}
    paired2 = {j for _, j in pairs}
    pos1, pos2 = _node_positions(mesh, d1), _node_positions(mesh, d2)
    b1, b2 = _by_triangle(s1), _by_triangle(s2)
    for t in sorted(set(b1) & set(b2)):
        for x in b1[t]:
            for y in b2[t]:
                if (x.edge, y.edge) in pairs:
                    continue
                why = _conflict(mesh, t, x, y, eps, pos1, pos2, False)
                if why:
                    return CrossingReport(True, f"D1 edge {x.edge} and D2 edge {y.edge}: {why}")
    # shared nodes: match by position
    shared = []
    for n1 in d1.nodes:
        for n2 in d2.nodes:
            if np.linalg.norm(pos1[n1.id] - pos2[n2.id]) < eps:
                shared.append((n1.id, n2.id))
    f1 = _node_fans(mesh, d1, 1, s1)
    f2 = _node_fans(mesh, d2, 2, s2)
    pair_list = sorted(pairs)
    pair_index = {p: k for k, p in enumerate(pair_list)}
    d2_of = {i: j for i, j in pair_list}
    fans = []
    for n1, n2 in shared:
        total = 2 * math.pi
        loc = mesh.locate(d1.nodes[n1].point)
        if loc.kind == "v":
            total = mesh.angle_sums[loc.index]
        items = []
        for ang, _, e, out in f1.get(n1, []):
            if e in paired1:
                items.append((ang, "pair", pair_index[(e, d2_of[e])], out))
            else:
                items.append((ang, 1, e, out))
        for ang, _, e, out in f2.get(n2, []):
            if e not in paired2:
                items.append((ang, 2, e, out))
        items.sort(key=lambda x: x[0])
        for (a, ta, ea, _), (b, tb, eb, _) in zip(items, items[1:] + items[:1]):
            gap = (b - a) % total
            if len(items) > 1 and (gap <= ANGLE_TOL or total - gap <= ANGLE_TOL) and ta != tb:
                return CrossingReport(True, f"coincident directions at shared node {n1}")
        fans.append((n1, items))
    k = len(pair_list)
    if k > 16:
        return CrossingReport(True, "too many coincident edges to resolve sides")
    for bits in itertools.product((0, 1), repeat=k):
        ok = True
        for n1, items in fans:
            labels = []
            for _, kind, e, out in items:
                if kind != "pair":
                    labels.append(kind)
                    continue
                d1_left = bits[e] == 0
                # counterclockwise: right copy then left copy for an outgoing edge
                first_left = not out
                left, right = (1, 2) if d1_left else (2, 1)
                labels.extend([left, right] if first_left else [right, left])
            changes = sum(1 for a, b in zip(labels, labels[1:] + labels[:1]) if a != b)
            if changes > 2:
                ok = False
                break
        if ok:
            sides = {p: ("left" if bits[pair_index[p]] == 0 else "right") for p in pair_list}
            return CrossingReport(False, None, sides)
    node = fans[0][0] if fans else None
    for n1, items in fans:
        labels = [kind for _, kind, _, _ in items if kind != "pair"]
        if sum(1 for a, b in zip(labels, labels[1:] + labels[:1]) if a != b) > 2:
            node = n1
            break
    return CrossingReport(True, f"edges interleave around shared node {node}")


def crossing(mesh: PolyhedronMesh, d1: DissectionTree, d2: DissectionTree) -> bool:
    """True iff the two trees properly cross.

    Proper crossing means edge interiors meet, or the edges of the two trees
    interleave in angular order around a shared node.
    """
    return analyze_crossing(mesh, d1, d2).crossing


# -- generators ---------------------------------------------------------------

def wilson_tree(n: int, adj, rng: np.random.Generator, root: int = 0) -> list[tuple[int, int]]:
    """Uniform random spanning tree by loop-erased random walks."""
    in_tree = [False] * n
    nxt = [-1] * n
    in_tree[root] = True
    for start in range(n):
        u = start
        while not in_tree[u]:
            nb = adj[u]
            nxt[u] = nb[int(rng.integers(len(nb)))]
            u = nxt[u]
        u = start
        while not in_tree[u]:
            in_tree[u] = True
            u = nxt[u]
    return [(u, nxt[u]) for u in range(n) if u != root]


def edge_spanning_tree(mesh: PolyhedronMesh, seed: int) -> DissectionTree:
    """Uniformly random spanning tree of the 1-skeleton, deterministic per seed."""
    rng = np.random.default_rng(seed)
    pairs = wilson_tree(mesh.n_vertices, mesh.real_edge_graph(), rng)
    return skeleton_tree(mesh, sorted((min(a, b), max(a, b)) for a, b in pairs))


def tree_in_net(net, seed: int = 0) -> DissectionTree:
    """Route a second dissection tree through the interior of ``net``.

    One boundary copy per mesh vertex is chosen as its representative (the
    copy nearest the net centroid).  Each cell of the net is triangulated;
    a random spanning tree of the dual graph (triangles adjacent across
    uncut edges) is pruned to the triangles holding representatives.  The
    tree's polylines run centroid -> shared-edge midpoint -> centroid and
    from each representative corner to its triangle's centroid, so they
    touch the net boundary only at the representatives.
    """
    mesh = net.mesh
    cx = net.complex
    rng = np.random.default_rng(seed)
    centre = net.centroid()
    reps = {}
    for v in range(mesh.n_vertices):
        copies = net.vertex_images.get(v, [])
        if not copies:
            raise RoutingError(f"vertex {v} has no boundary copy")
        best = min(copies, key=lambda c: (round(float(np.linalg.norm(c[1] - centre)) / (1e-12 * mesh.diameter)), c[0]))
        reps[v] = best[0]

    # intrinsic triangles: (cell, local corner triple)
    tris = []
    tri_of_cell = {}
    for c in range(len(cx.cells)):
        poly = cx.cell_chart(c)
        if len(poly) < 3 or abs(geo.polygon_area(poly)) <= 1e-14 * mesh.diameter ** 2:
            continue
        ears = [(0, 1, 2)] if len(poly) == 3 else geo.ear_clip(poly)
        tri_of_cell[c] = []
        for ear in ears:
            tri_of_cell[c].append(len(tris))
            tris.append((c, ear))
    # dual adjacency across uncut intrinsic edges keyed by global point pairs
    edge_owner = {}
    for ti, (c, ear) in enumerate(tris):
        pts = cx.cells[c]
        for k in range(3):
            key = (pts[ear[k]], pts[ear[(k + 1) % 3]])
            edge_owner[key] = (ti, k)
    adj: list[list[int]] = [[] for _ in tris]
    shared_edge = {}
    for (p, q), (ti, k) in edge_owner.items():
        other = edge_owner.get((q, p))
        if other is None:
            continue
        c_i, c_j = tris[ti][0], tris[other[0]][0]
        if c_i != c_j:
            h = cx.find_halfedge(c_i, p, q)
            if h is None or net.is_cut(h):
                continue
        if other[0] not in adj[ti]:
            adj[ti].append(other[0])
        shared_edge[(ti, other[0])] = (p, q)
    if tris and len(tris) > 1:
        # the dual graph of a net is connected; check before sampling
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != len(tris):
            raise RoutingError("net interior is not connected through its triangulation")
    for a in adj:
        a.sort()
    root = int(rng.integers(len(tris)))
    dual = wilson_tree(len(tris), adj, rng, root=root)

    terminals = {}
    walk = net.boundary
    for v, wi in reps.items():
        h_out = walk[wi].halfedge
        cells = net.wedge_cells(wi)
        cell_choice = cells[int(rng.integers(len(cells)))]
        pid = cx.he_origin[h_out]
        local = cx.cells[cell_choice].index(pid)
        cand = [ti for ti in tri_of_cell.get(cell_choice, []) if local in tris[ti][1]]
        if not cand:
            raise RoutingError(f"no interior triangle at representative of vertex {v}")
        cand.sort(key=lambda ti: -abs(geo.polygon_area(_tri_chart(cx, tris[ti]))))
        terminals[v] = (cand[0], pid, cell_choice)

    # prune dual tree to the Steiner tree of the terminal triangles
    tadj = defaultdict(set)
    for a, b in dual:
        tadj[a].add(b)
        tadj[b].add(a)
    keep = set(range(len(tris)))
    term_tris = {t for t, _, _ in terminals.values()}
    leaves = [t for t in keep if len(tadj[t]) <= 1 and t not in term_tris]
    while leaves:
        t = leaves.pop()
        if t not in keep:
            continue
        keep.discard(t)
        for w in list(tadj[t]):
            tadj[w].discard(t)
            if len(tadj[w]) <= 1 and w not in term_tris and w in keep:
                leaves.append(w)
        tadj[t].clear()

    # build planar-graph nodes: ("t", tri) centroids, ("m", tri_a, tri_b) midpoints, ("v", vertex)
    def tri_centroid_sp(ti):
        c = tris[ti][0]
        xy = _tri_chart(cx, tris[ti]).mean(axis=0)
        return mesh.chart_point(cx.cell_tri[c], xy)

    def midpoint_sp(ta, tb):
        p, q = shared_edge[(ta, tb)]
        c = tris[ta][0]
        t = cx.cell_tri[c]
        xy = 0.5 * (cx.point_chart(p, t) + cx.point_chart(q, t))
        return mesh.chart_point(t, xy)

    g = defaultdict(list)
    for ta in sorted(keep):
        for tb in sorted(tadj[ta]):
            if ta < tb:
                g[("t", ta)].append(("t", tb))
                g[("t", tb)].append(("t", ta))
    for v, (ti, pid, _) in sorted(terminals.items()):
        g[("v", v)].append(("t", ti))
        g[("t", ti)].append(("v", v))

    node_ids = {}
    nodes = []
    for v in range(mesh.n_vertices):
        node_ids[("v", v)] = len(nodes)
        nodes.append(TreeNode(len(nodes), mesh.vertex_point(v), v))
    for key in sorted(k for k in g if k[0] == "t"):
        if len(g[key]) >= 3:
            node_ids[key] = len(nodes)
            nodes.append(TreeNode(len(nodes), tri_centroid_sp(key[1]), None))

    def sp_of(key):
        if key[0] == "v":
            return mesh.vertex_point(key[1])
        return tri_centroid_sp(key[1])

    edges = []
    visited = set()
    for start in sorted(node_ids, key=lambda k: node_ids[k]):
        for first in g[start]:
            if (start, first) in visited:
                continue
            chain = [start, first]
            prev, cur = start, first
            while cur not in node_ids:
                nxt = [w for w in g[cur] if w != prev]
                if len(nxt) != 1:
                    raise RoutingError("dual tree pruning left a dangling branch")
                prev, cur = cur, nxt[0]
                chain.append(cur)
            visited.add((chain[0], chain[1]))
            visited.add((chain[-1], chain[-2]))
            pts = []
            for i, key in enumerate(chain):
                if i > 0 and key[0] == "t" and chain[i - 1][0] == "t":
                    pts.append(midpoint_sp(chain[i - 1][1], key[1]))
                pts.append(sp_of(key))
            edges.append(TreeEdge(node_ids[chain[0]], node_ids[chain[-1]], tuple(pts)))
    tree = DissectionTree(nodes, edges)
    rep = validate_tree(mesh, tree)
    if not rep.valid:
        raise RoutingError("routed tree invalid: " + "; ".join(rep.violations[:3]))
    return tree


def _tri_chart(cx, tri):
    c, ear = tri
    poly = cx.cell_chart(c)
    return poly[list(ear)]

