import numpy as np
import pytest

from helpers import random_case, straight_tree
from revnets import (DissectionTree, SurfacePoint, TreeEdge, TreeError, TreeNode, analyze_crossing, crossing,
                     cut_and_unfold, edge_spanning_tree, make_dihedron, regular_tetrahedron, skeleton_tree,
                     tree_in_net, tree_length, unit_cube, validate_tree)


def test_cube_skeleton_tree_valid():
    m = unit_cube()
    t = edge_spanning_tree(m, 42)
    assert validate_tree(m, t).valid
    assert len(t.edges) == 7
    assert tree_length(m, t) == pytest.approx(7.0, rel=1e-12)


def test_edge_spanning_tree_deterministic():
    m = unit_cube()
    a, b = edge_spanning_tree(m, 42), edge_spanning_tree(m, 42)
    assert [(e.a, e.b) for e in a.edges] == [(e.a, e.b) for e in b.edges]
    assert len(edge_spanning_tree(regular_tetrahedron(), 5).edges) == 3


def test_disconnected_tree():
    m = unit_cube()
    t = edge_spanning_tree(m, 42)
    rep = validate_tree(m, DissectionTree(t.nodes, t.edges[:6]))
    assert "not connected" in rep.violations


def test_unspanned_vertex():
    m = unit_cube()
    t = edge_spanning_tree(m, 42)
    keep = [e for e in t.edges if 7 not in (e.a, e.b)]
    rep = validate_tree(m, DissectionTree(t.nodes[:7], keep))
    assert "vertex 7 unspanned" in rep.violations


def test_cycle_rejected():
    m = unit_cube()
    t = skeleton_tree(m, [(0, 1), (1, 3), (3, 2), (2, 0), (0, 4), (4, 5), (5, 7), (6, 7)])
    assert not validate_tree(m, t).valid


def test_low_degree_steiner_rejected():
    m = regular_tetrahedron()
    mid = m.edge_point(m.edge_index(0, 1), 0.5)
    nodes = [TreeNode(v, m.vertex_point(v), v) for v in range(4)] + [TreeNode(4, mid, None)]
    edges = [TreeEdge(0, 4, (m.vertex_point(0), mid)), TreeEdge(4, 1, (mid, m.vertex_point(1))),
             TreeEdge(1, 2, (m.vertex_point(1), m.vertex_point(2))),
             TreeEdge(2, 3, (m.vertex_point(2), m.vertex_point(3)))]
    assert not validate_tree(m, DissectionTree(nodes, edges)).valid


def test_skeleton_tree_rejects_non_edge():
    with pytest.raises(TreeError):
        skeleton_tree(unit_cube(), [(0, 7)])


def test_node_ids_must_be_ordered():
    m = regular_tetrahedron()
    with pytest.raises(TreeError):
        DissectionTree([TreeNode(1, m.vertex_point(0), 0)], [])


def test_tetrahedron_shared_edge_not_crossing():
    m = regular_tetrahedron()
    d1 = skeleton_tree(m, [(3, 0), (3, 1), (3, 2)])
    d2 = skeleton_tree(m, [(0, 1), (1, 2), (2, 3)])
    assert not crossing(m, d1, d2)


def test_interior_crossing():
    m = unit_cube()
    # diagonals of the front face meet at its centre
    d1 = straight_tree(m, [(0, 5), (0, 1), (0, 2), (2, 3), (2, 6), (6, 7), (4, 6)])
    d2 = straight_tree(m, [(1, 4), (1, 3), (3, 7), (7, 5), (7, 6), (6, 2), (4, 0)])
    assert validate_tree(m, d1).valid and validate_tree(m, d2).valid
    rep = analyze_crossing(m, d1, d2)
    assert rep.crossing and rep.witness


def test_interleaving_at_shared_node():
    m = unit_cube()
    # around vertex 0: edge to 1 (D1), diagonal to 3 (D2), edge to 2 (D1), edge to 4 (D2)
    d1 = straight_tree(m, [(0, 1), (0, 2), (2, 6), (6, 7), (7, 5), (5, 4), (2, 3)])
    d2 = straight_tree(m, [(0, 3), (0, 4), (4, 5), (5, 1), (4, 6), (6, 2), (6, 7)])
    assert validate_tree(m, d1).valid and validate_tree(m, d2).valid
    assert crossing(m, d1, d2)


def test_tree_in_net_tetrahedron():
    m = regular_tetrahedron()
    d1 = skeleton_tree(m, [(3, 0), (3, 1), (3, 2)])
    net = cut_and_unfold(m, d1)
    d2 = tree_in_net(net, seed=4)
    assert validate_tree(m, d2).valid
    assert not crossing(m, d1, d2)


def test_tree_in_net_dihedron():
    m = make_dihedron([(0, 0), (1, 0), (1, 1), (0, 1)])
    d1 = skeleton_tree(m, [(0, 1), (1, 2), (2, 3)])
    net = cut_and_unfold(m, d1)
    assert net.area() == pytest.approx(2.0, rel=1e-12)
    d2 = tree_in_net(net, seed=0)
    assert validate_tree(m, d2).valid
    assert not crossing(m, d1, d2)


@pytest.mark.parametrize("seed", range(10))
def test_tree_in_net_random(seed):
    m = random_case(seed)
    d1 = edge_spanning_tree(m, seed)
    d2 = tree_in_net(cut_and_unfold(m, d1), seed)
    assert validate_tree(m, d2).valid
    assert not crossing(m, d1, d2)


def test_tree_length_empty_rejected():
    m = make_dihedron([(0, 0), (1, 0), (0, 1)])
    with pytest.raises(TreeError):
        tree_length(m, DissectionTree([], []))


def test_node_off_mesh_is_a_violation():
    m = regular_tetrahedron()
    bad = DissectionTree([TreeNode(0, SurfacePoint(99, (1, 0, 0)), None)], [])
    assert not validate_tree(m, bad).valid
