import math

import numpy as np
import pytest

from helpers import random_case, straight_tree
from revnets import (CrossingTreesError, animate_chain, cut_and_unfold, edge_spanning_tree,
                     geodesic_star, make_dihedron, regular_tetrahedron, reassemble, separating_cycle,
                     skeleton_tree, tree_in_net, tree_length, unit_cube, verify_reversibility)
from revnets import geometry as geo
from revnets.reversible import duality_errors, round_trip_error

CONDITIONS = ["1_dissection", "2_hinges", "3_reassembly", "4_boundary_exchange"]


def _tetra_pair(seed=7):
    m = regular_tetrahedron()
    d1 = geodesic_star(m, 3)
    d2 = tree_in_net(cut_and_unfold(m, d1), seed)
    return m, d1, d2


def test_tetrahedron_star_all_pass():
    m, d1, d2 = _tetra_pair()
    rep = verify_reversibility(m, d1, d2)
    assert rep.passed, rep.to_dict()
    assert sorted(rep.conditions) == CONDITIONS
    chain = rep.chain
    assert len(chain.pieces) == m.n_vertices
    assert len(chain.hinges) == m.n_vertices - 1
    assert [p.index for p in chain.pieces] == list(range(len(chain.pieces)))


def test_tetrahedron_shared_edge_gives_empty_piece():
    m = regular_tetrahedron()
    d1 = skeleton_tree(m, [(3, 0), (3, 1), (3, 2)])
    d2 = skeleton_tree(m, [(0, 1), (1, 2), (2, 3)])
    rep = verify_reversibility(m, d1, d2)
    assert rep.passed, rep.to_dict()
    assert any(p.empty for p in rep.chain.pieces)


def test_crossing_pair_fails_precondition():
    m = unit_cube()
    d1 = straight_tree(m, [(0, 5), (0, 1), (0, 2), (2, 3), (2, 6), (6, 7), (4, 6)])
    d2 = straight_tree(m, [(1, 4), (1, 3), (3, 7), (7, 5), (7, 6), (6, 2), (4, 0)])
    rep = verify_reversibility(m, d1, d2)
    assert not rep.passed and not rep.precondition.passed
    assert rep.to_dict()["precondition"]["witness"]
    with pytest.raises(CrossingTreesError):
        separating_cycle(m, d1, d2)


def test_placements_and_round_trip():
    m, d1, d2 = _tetra_pair(2)
    rep = verify_reversibility(m, d1, d2)
    chain = rep.chain
    assert all(np.allclose(p, np.eye(3)) for p in chain.placement_P)
    assert round_trip_error(chain) < 1e-9 * m.diameter
    n2 = reassemble(chain, "Q")
    assert n2.area() == pytest.approx(m.surface_area(), rel=1e-12)
    assert n2.perimeter() == pytest.approx(2 * tree_length(m, d2), rel=1e-9)
    with pytest.raises(ValueError):
        reassemble(chain, "R")


def test_animation_endpoints_and_hinges():
    m, d1, d2 = _tetra_pair()
    chain = verify_reversibility(m, d1, d2).chain
    frames = animate_chain(chain, 24)
    assert len(frames) == 24
    assert all(np.allclose(f, np.eye(3)) for f in frames[0])
    assert all(np.allclose(a, b) for a, b in zip(frames[-1], chain.placement_Q))
    for motions in frames:
        # consecutive pieces stay joined at their hinge in every frame
        for i, h in enumerate(chain.hinges):
            assert np.linalg.norm(geo.apply(motions[i], h) - geo.apply(motions[i + 1], h)) < 1e-9
        for m_ in motions:
            assert abs(np.linalg.det(m_[:2, :2]) - 1) < 1e-12
    with pytest.raises(ValueError):
        animate_chain(chain, 1)


@pytest.mark.parametrize("poly", [
    [(0, 0), (1, 0), (1, 1), (0, 1)],
    [(math.cos(2 * math.pi * k / 5), math.sin(2 * math.pi * k / 5)) for k in range(5)],
])
def test_dihedra_full_pipeline(poly):
    m = make_dihedron(poly)
    n = len(poly)
    d1 = skeleton_tree(m, [(i, i + 1) for i in range(n - 1)])
    d2 = tree_in_net(cut_and_unfold(m, d1), 0)
    rep = verify_reversibility(m, d1, d2)
    assert rep.passed, rep.to_dict()
    assert rep.n2.area() == pytest.approx(2 * geo.polygon_area(np.array(poly, float)), rel=1e-9)


def test_dihedron_rim_trees_share_edges():
    m = make_dihedron([(0, 0), (1, 0), (1, 1), (0, 1)])
    d1 = skeleton_tree(m, [(0, 1), (1, 2), (2, 3)])
    d2 = skeleton_tree(m, [(1, 2), (2, 3), (3, 0)])
    rep = verify_reversibility(m, d1, d2)
    assert rep.passed, rep.to_dict()
    assert sum(p.empty for p in rep.chain.pieces) >= 1


@pytest.mark.parametrize("seed", range(8))
def test_random_cases(seed):
    m = random_case(seed)
    d1 = edge_spanning_tree(m, seed)
    d2 = tree_in_net(cut_and_unfold(m, d1), seed)
    rep = verify_reversibility(m, d1, d2)
    assert rep.passed, rep.to_dict()
    errs = duality_errors(m, d1, d2, rep.n1, rep.n2)
    assert max(errs.values()) < 1e-9


def test_separating_cycle():
    m, d1, d2 = _tetra_pair()
    cyc = separating_cycle(m, d1, d2)
    assert cyc.closed
    assert cyc.length == pytest.approx(2 * tree_length(m, d2), rel=1e-9)
    # every tree edge is passed once on each side
    assert sorted(cyc.darts) == sorted((e, s) for e in range(len(d2.edges)) for s in ("left", "right"))
    assert all(cyc.node_visits[n.id] == d2.degree(n.id) for n in d2.nodes)


def test_report_dict_is_plain_data():
    m, d1, d2 = _tetra_pair()
    d = verify_reversibility(m, d1, d2).to_dict()
    assert d["passed"] is True
    assert sorted(d["conditions"]) == CONDITIONS
    assert all(isinstance(v["passed"], bool) for v in d["conditions"].values())
