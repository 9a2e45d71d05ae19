"""Hinged double chains between two nets and certificates of their reversibility.

Both nets live on one refined complex carrying the two trees (tags 1 and
2).  A piece is a connected set of cells bounded by tree edges; pieces are
placed by one rigid motion each in either net.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import geometry as geo
from .dissection import DissectionTree, analyze_crossing, tree_length
from .errors import ChainError, CrossingTreesError, UnfoldError
from .mesh import PolyhedronMesh, SurfacePoint
from .unfold import CUT, MARK, Net, cut_and_unfold, joint_complex

LINK = 1e-6  # relative tolerance for congruence certificates


@dataclass
class Piece:
    index: int
    cells: list[int]
    polygon: np.ndarray  # N1 coordinates; two points for an empty piece
    halfedges: list[int]  # boundary half-edges, aligned with polygon edges
    labels: list[tuple]  # per polygon edge: ("D1"|"D2", tree edge, side)
    arc: list[int]  # walk indices of the N1 boundary owned by the piece
    hinge_candidates: list[int]  # mesh vertices whose copies lie on the piece boundary
    empty: bool = False
    side: str | None = None  # for an empty piece: side of its D1 edge it came from

    @property
    def area(self) -> float:
        return 0.0 if self.empty else geo.polygon_area(self.polygon)


@dataclass
class DoubleChain:
    pieces: list[Piece]
    hinges: list[np.ndarray]
    hinge_vertices: list[int]
    placement_P: list[np.ndarray]
    placement_Q: list[np.ndarray]
    n1: Net = field(repr=False)
    gluing_error: float = 0.0

    @property
    def complex(self):
        return self.n1.complex


@dataclass
class SeparatingCycle:
    darts: list[tuple[int, str]]  # (D2 edge, side), in walk order
    points: list[SurfacePoint]  # start of every refined boundary segment
    length: float
    node_visits: dict[int, int]

    @property
    def closed(self) -> bool:
        return len(self.points) > 0


# -- pieces --------------------------------------------------------------------

def _piece_of_cells(cx) -> list[int]:
    """Component id per cell over edges carrying neither tree."""
    comp = [-1] * cx.n_cells
    k = 0
    for c0 in range(cx.n_cells):
        if comp[c0] >= 0:
            continue
        comp[c0] = k
        queue = deque([c0])
        while queue:
            c = queue.popleft()
            for h in cx.cell_halfedges(c):
                if cx.has_tag(h, CUT) or cx.has_tag(h, MARK):
                    continue
                d = cx.he_cell[cx.he_twin[h]]
                if comp[d] < 0:
                    comp[d] = k
                    queue.append(d)
        k += 1
    return comp


def _label(cx, h):
    if cx.has_tag(h, CUT):
        return ("D1",) + cx.label(h, CUT)
    return ("D2",) + cx.label(h, MARK)


def cut_net_along_tree(n1: Net) -> list[Piece]:
    """Split a net carrying interior marks into its pieces."""
    if n1.interior_marks is None:
        raise ChainError("net carries no second tree")
    cx = n1.complex
    comp = _piece_of_cells(cx)
    n_pieces = max(comp) + 1
    nv = n1.mesh.n_vertices
    if n_pieces != nv:
        raise ChainError(f"{n_pieces} pieces for {nv} vertices: the second tree is not embedded correctly")
    arcs: list[list[int]] = [[] for _ in range(n_pieces)]
    for i, s in enumerate(n1.boundary):
        arcs[comp[cx.he_cell[s.halfedge]]].append(i)
    pieces = []
    for p in range(n_pieces):
        cells = [c for c in range(cx.n_cells) if comp[c] == p]
        bnd = [h for c in cells for h in cx.cell_halfedges(c) if comp[cx.he_cell[cx.he_twin[h]]] != p
               or cx.has_tag(h, CUT) or cx.has_tag(h, MARK)]
        if not bnd:
            raise ChainError(f"piece {p} has no boundary")
        start = min(bnd)
        walk = [start]
        h = start
        bset = set(bnd)
        while True:
            e = cx.he_next[h]
            guard = 0
            while e not in bset:
                e = cx.he_next[cx.he_twin[e]]
                guard += 1
                if guard > len(cx.he_origin):
                    raise ChainError(f"piece {p}: boundary walk does not close")
            h = e
            if h == start:
                break
            walk.append(h)
        if len(walk) != len(bset):
            raise ChainError(f"piece {p} is not a disk")
        if not arcs[p]:
            raise ChainError(f"piece {p} does not touch the net boundary")
        empty = all(cx.is_digon(c) for c in cells)
        poly = np.array([n1.placed(h)[0] for h in walk])
        verts = sorted({cx.he_origin[h] for h in walk if cx.he_origin[h] < nv})
        side = None
        if empty:
            side = next(_label(cx, h)[2] for h in walk if cx.has_tag(h, CUT))
        pieces.append(Piece(p, cells, poly, walk, [_label(cx, h) for h in walk], arcs[p], verts, empty, side))
    return pieces


# -- chain -------------------------------------------------------------------------

def build_double_chain(pieces: list[Piece], n1: Net) -> DoubleChain:
    """Order pieces along the boundary of N1 and glue them into the second placement."""
    cx = n1.complex
    walk = n1.boundary
    m = len(walk)
    owner = [-1] * m
    for p in pieces:
        for i in p.arc:
            owner[i] = p.index
    nv = n1.mesh.n_vertices
    # positions along the walk where the owning piece changes
    changes = [i for i in range(m) if owner[i] != owner[i - 1]]
    if len(pieces) == 1:
        raise ChainError("a single piece admits no chain")
    if len(changes) != len(pieces):
        raise ChainError(f"pieces are not chainable: {len(changes)} boundary runs for {len(pieces)} pieces")
    hinge_pts = {i: walk[i].point for i in changes}
    bad = [i for i, pid in hinge_pts.items() if pid >= nv]
    if bad:
        raise ChainError(f"piece change at walk index {bad[0]} is not a vertex copy")
    first = min(changes, key=lambda i: (walk[i].point, i))
    k0 = changes.index(first)
    order = changes[k0:] + changes[:k0]
    chain_pieces = [pieces[owner[i]] for i in order]
    hinges = [walk[i].start.copy() for i in order[1:]]
    hinge_vertices = [walk[i].point for i in order[1:]]
    for k, p in enumerate(chain_pieces):
        p.index = k
    comp = _cell_piece(cx, chain_pieces)
    motions1 = n1.motions
    q, err = _glue(cx, comp, len(chain_pieces), [np.eye(3)] * len(chain_pieces), motions1, CUT)
    return DoubleChain(chain_pieces, hinges, hinge_vertices, [np.eye(3) for _ in chain_pieces], q, n1, err)


def _cell_piece(cx, pieces) -> list[int]:
    comp = [-1] * cx.n_cells
    for p in pieces:
        for c in p.cells:
            comp[c] = p.index
    return comp


def _glue(cx, comp, n_pieces, placement, cell_motions, tag):
    """Piece motions making the two copies of every ``tag`` edge coincide.

    ``placement[p] @ cell_motions[c]`` is the current position of cell ``c``
    of piece ``p``.  Piece 0 keeps its placement.  Returns the new motions and
    the worst residual over all glued segments.
    """
    def seg(h, pm):
        c = cx.he_cell[h]
        m = pm @ cell_motions[c]
        t = cx.cell_tri[c]
        return (geo.apply(m, cx.point_chart(cx.he_origin[h], t)),
                geo.apply(m, cx.point_chart(cx.he_dest(h), t)))

    links = []
    for h, g in cx.edge_he:
        if cx.has_tag(h, tag):
            a, b = comp[cx.he_cell[h]], comp[cx.he_cell[g]]
            links.append((a, b, h, g))
    adj: dict[int, list] = {}
    for a, b, h, g in links:
        adj.setdefault(a, []).append((b, h, g))
        adj.setdefault(b, []).append((a, g, h))
    rel = [None] * n_pieces
    rel[0] = np.eye(3)
    queue = deque([0])
    while queue:
        a = queue.popleft()
        for b, h, g in sorted(adj.get(a, []), key=lambda x: (x[0], x[1])):
            if rel[b] is not None:
                continue
            ha, hb = seg(h, rel[a] @ placement[a])
            gb0, gb1 = seg(g, placement[b])
            # twin runs the other way: g's end meets h's start
            rel[b] = geo.motion_from_segments(gb1, gb0, ha, hb)
            queue.append(b)
    if any(r is None for r in rel):
        raise ChainError("pieces are not connected through the glued edges")
    out = [rel[p] @ placement[p] for p in range(n_pieces)]
    err = 0.0
    for a, b, h, g in links:
        ha, hb = seg(h, out[a])
        ga, gb = seg(g, out[b])
        err = max(err, float(np.linalg.norm(ha - gb)), float(np.linalg.norm(hb - ga)))
    return out, err


def round_trip_error(chain: DoubleChain) -> float:
    """Re-glue the Q assembly along the second tree and measure its distance to N1."""
    cx = chain.complex
    comp = _cell_piece(cx, chain.pieces)
    back, _ = _glue(cx, comp, len(chain.pieces), chain.placement_Q, chain.n1.motions, MARK)
    src, dst = [], []
    for c in chain.n1.real_cells():
        src.append(geo.apply(back[comp[c]] @ chain.n1.motions[c], cx.cell_chart(c)))
        dst.append(chain.n1.cells[c])
    return geo.kabsch(np.vstack(src), np.vstack(dst))[1]


def reassemble(chain: DoubleChain, direction: str = "Q") -> Net:
    """The net formed by the chain in configuration ``P`` (N1) or ``Q`` (N2)."""
    cx = chain.complex
    comp = _cell_piece(cx, chain.pieces)
    if direction == "P":
        place, tag = chain.placement_P, CUT
    elif direction == "Q":
        place, tag = chain.placement_Q, MARK
    else:
        raise ValueError("direction must be 'P' or 'Q'")
    motions = [place[comp[c]] @ chain.n1.motions[c] for c in range(cx.n_cells)]
    try:
        return Net(cx, tag, motions=motions)
    except UnfoldError as exc:
        raise ChainError(f"gluing inconsistent: {exc}") from exc


def animate_chain(chain: DoubleChain, frames: int) -> list[list[np.ndarray]]:
    """Per-frame piece motions interpolating hinge angles from P to Q."""
    if frames < 2:
        raise ValueError("need at least two frames")
    q = chain.placement_Q
    thetas = []
    for i in range(len(chain.hinges)):
        rel = geo.invert(q[i]) @ q[i + 1]
        thetas.append(geo.rotation_angle(rel))
    out = []
    for f in range(frames):
        t = f / (frames - 1)
        cur = [np.eye(3)]
        for i, h in enumerate(chain.hinges):
            cur.append(cur[-1] @ geo.rotation_about(h, t * thetas[i]))
        if f == frames - 1:
            cur = [m.copy() for m in q]
        out.append(cur)
    return out


# -- separating cycle ----------------------------------------------------------------

def separating_cycle(mesh: PolyhedronMesh, d1: DissectionTree, d2: DissectionTree) -> SeparatingCycle:
    """Boundary walk of a thin neighbourhood of ``d2``; it separates ``d2`` from ``d1``."""
    rep = analyze_crossing(mesh, d1, d2)
    if rep.crossing:
        raise CrossingTreesError(rep.witness)
    net = cut_and_unfold(mesh, d2)
    cx = net.complex
    darts: list[tuple[int, str]] = []
    for s in net.boundary:
        key = (s.edge, s.side)
        if not darts or darts[-1] != key:
            darts.append(key)
    if len(darts) > 1 and darts[0] == darts[-1]:
        darts.pop()
    visits = {n: len(imgs) for n, imgs in net.node_images.items()}
    points = [cx.surface_point(s.point) for s in net.boundary]
    return SeparatingCycle(darts, points, net.perimeter(), visits)


# -- certification ----------------------------------------------------------------------

@dataclass
class ConditionResult:
    passed: bool
    detail: dict = field(default_factory=dict)


@dataclass
class ReversibilityReport:
    precondition: ConditionResult
    conditions: dict[str, ConditionResult] = field(default_factory=dict)
    chain: DoubleChain | None = field(default=None, repr=False)
    n1: Net | None = field(default=None, repr=False)
    n2: Net | None = field(default=None, repr=False)

    @property
    def passed(self) -> bool:
        return self.precondition.passed and len(self.conditions) == 4 and all(
            c.passed for c in self.conditions.values())

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "precondition": {"passed": self.precondition.passed, **self.precondition.detail},
            "conditions": {k: {"passed": v.passed, **v.detail} for k, v in sorted(self.conditions.items())},
        }


def _segments_of(points_list) -> np.ndarray:
    segs = [np.stack([p[:-1], p[1:]], axis=1) for p in points_list if len(p) >= 2]
    dim = segs[0].shape[-1] if segs else 2
    return np.concatenate(segs) if segs else np.zeros((0, 2, dim))


def _oracle_error(mesh, d2, q_net: Net) -> float:
    """Largest vertex distance between the Q assembly and an independent unfolding along ``d2``."""
    oracle = cut_and_unfold(mesh, d2)
    ocx = oracle.complex
    by_tri: dict[int, list[int]] = {}
    for c in oracle.real_cells():
        by_tri.setdefault(ocx.cell_tri[c], []).append(c)
    cx = q_net.complex
    src, dst = [], []
    tol = 1e-9 * mesh.diameter
    for c in q_net.real_cells():
        t = cx.cell_tri[c]
        chart = cx.cell_chart(c)
        inner = geo.polygon_centroid(chart)
        home = None
        for oc in by_tri.get(t, []):
            if geo.point_in_polygon(inner, ocx.cell_chart(oc), tol):
                home = oc
                break
        if home is None:
            raise ChainError(f"cell {c} has no counterpart in the independent unfolding")
        src.append(q_net.cells[c])
        dst.append(geo.apply(oracle.motions[home], chart))
    _, err = geo.kabsch(np.vstack(src), np.vstack(dst))
    return err


def verify_reversibility(mesh: PolyhedronMesh, d1: DissectionTree, d2: DissectionTree) -> ReversibilityReport:
    """Certify the four reversibility conditions for the nets cut along ``d1`` and ``d2``."""
    rep = analyze_crossing(mesh, d1, d2)
    if rep.crossing:
        return ReversibilityReport(ConditionResult(False, {"crossing": True, "witness": rep.witness}))
    diam = mesh.diameter
    tol = LINK * diam
    n = mesh.n_vertices
    area = mesh.surface_area()
    out = ReversibilityReport(ConditionResult(True, {"crossing": False}))
    try:
        cx = joint_complex(mesh, d1, d2)
        n1 = Net(cx, CUT)
        pieces = cut_net_along_tree(n1)
        chain = build_double_chain(pieces, n1)
    except (ChainError, UnfoldError) as exc:
        out.conditions["1_dissection"] = ConditionResult(False, {"error": str(exc)})
        return out
    out.chain, out.n1 = chain, n1
    piece_area = sum(p.area for p in chain.pieces)
    c1 = (len(chain.pieces) == n and abs(piece_area - area) <= 1e-9 * area
          and all(p.arc for p in chain.pieces) and all(p.empty or p.area > 0 for p in chain.pieces))
    out.conditions["1_dissection"] = ConditionResult(c1, {
        "pieces": len(chain.pieces), "vertices": n, "empty_pieces": sum(p.empty for p in chain.pieces),
        "piece_area": piece_area, "surface_area": area})

    # hinges sit on the boundary of N1 and hold in both placements
    q = chain.placement_Q
    hinge_err = 0.0
    for i, h in enumerate(chain.hinges):
        hinge_err = max(hinge_err, float(np.linalg.norm(geo.apply(q[i], h) - geo.apply(q[i + 1], h))))
    on_boundary = all(any(np.linalg.norm(h - s.start) <= 1e-12 * diam for s in n1.boundary) for h in chain.hinges)
    c2 = len(chain.hinges) == n - 1 and on_boundary and hinge_err <= 1e-9 * diam * max(1, n)
    out.conditions["2_hinges"] = ConditionResult(c2, {
        "hinges": len(chain.hinges), "on_boundary": on_boundary, "hinge_error": hinge_err})

    try:
        n2 = reassemble(chain, "Q")
        p_net = reassemble(chain, "P")
    except ChainError as exc:
        out.conditions["3_reassembly"] = ConditionResult(False, {"error": str(exc)})
        return out
    out.n2 = n2
    p_err = max(float(np.max(np.abs(a - b))) if len(a) else 0.0 for a, b in zip(p_net.cells, n1.cells))
    q_err = _oracle_error(mesh, d2, n2)
    rt_err = round_trip_error(chain)
    c3 = (p_err <= 1e-12 * diam and q_err <= tol and chain.gluing_error <= tol and rt_err <= tol
          and abs(n2.area() - area) <= 1e-9 * area)
    out.conditions["3_reassembly"] = ConditionResult(c3, {
        "p_error": p_err, "q_error": q_err, "gluing_error": chain.gluing_error,
        "round_trip_error": rt_err, "q_area": n2.area()})

    # boundary of each net becomes the interior marks of the other
    b1_in_q = _segments_of([np.array([n2.placed(s.halfedge)[0], n2.placed(s.halfedge)[1]]) for s in n1.boundary])
    marks2 = _segments_of(list(n2.interior_marks.values()))
    h1 = geo.polyline_hausdorff(b1_in_q, marks2)
    b2_in_p = _segments_of([np.array([n1.placed(s.halfedge)[0], n1.placed(s.halfedge)[1]]) for s in n2.boundary])
    marks1 = _segments_of(list(n1.interior_marks.values()))
    h2 = geo.polyline_hausdorff(b2_in_p, marks1)
    folded = _segments_of([np.array([cx.xyz[cx.he_origin[s.halfedge]], cx.xyz[cx.he_dest(s.halfedge)]])
                           for s in n2.boundary])
    tree3d = _segments_of([np.array([mesh.point(p) for p in e.polyline]) for e in d2.edges])
    h3 = geo.polyline_hausdorff(folded, tree3d)
    c4 = h1 <= tol and h2 <= tol and h3 <= tol
    out.conditions["4_boundary_exchange"] = ConditionResult(c4, {
        "boundary1_to_marks2": h1, "boundary2_to_marks1": h2, "boundary2_fold": h3})
    return out


def duality_errors(mesh: PolyhedronMesh, d1: DissectionTree, d2: DissectionTree, n1: Net, n2: Net) -> dict:
    """Relative errors of the length laws tying each net's boundary and marks to the trees.

    The boundary of a net is twice its own cutting tree; its interior marks
    have the length of the other tree.
    """
    l1, l2 = tree_length(mesh, d1), tree_length(mesh, d2)

    def marks(net):
        return sum(geo.perimeter(p, closed=False) for p in net.interior_marks.values())

    return {
        "boundary1": abs(n1.perimeter() - 2 * l1) / (2 * l1),
        "boundary2": abs(n2.perimeter() - 2 * l2) / (2 * l2),
        "marks1": abs(marks(n1) - l2) / l2,
        "marks2": abs(marks(n2) - l1) / l1,
    }
