import math

import numpy as np
import pytest
import shapely
import shapely.affinity
from shapely.geometry import Polygon, box

from revnets import (TilingError, WindowTooLargeError, cut_and_unfold, edge_spanning_tree, geodesic_star,
                     isotetra_from_triangle, tile_patch, unit_cube, verify_tiling)
from revnets import geometry as geo
from revnets.isotess import TilingPatch, _placed, check_isotetrahedron, tile_shape


def test_isotetra_faces_congruent():
    iso = isotetra_from_triangle(3, 4, 4.5)
    m = iso.mesh
    assert m.n_vertices == 4
    for tri in m.triangles:
        v = m.vertices[tri]
        sides = sorted(np.linalg.norm(v[i] - v[(i + 1) % 3]) for i in range(3))
        assert sides == pytest.approx([3, 4, 4.5], rel=1e-12)
    assert np.allclose(m.angle_sums, math.pi)


@pytest.mark.parametrize("sides", [(1, 1, 1.5), (3, 4, 5), (1, 2, 3.5)])
def test_non_acute_rejected(sides):
    with pytest.raises(TilingError):
        isotetra_from_triangle(*sides)


def test_check_rejects_cube():
    with pytest.raises(TilingError):
        check_isotetrahedron(unit_cube())


def test_regular_star_net_patch():
    iso = isotetra_from_triangle(1, 1, 1)
    net = cut_and_unfold(iso.mesh, geodesic_star(iso.mesh, 0))
    p0 = tile_patch(net, 0)
    assert len(p0.motions) == 1
    p1 = tile_patch(net, 1)
    # identity plus one half-turn about each distinct vertex image (three corners, three midpoints)
    assert len(p1.centers) == 6
    assert len(p1.motions) == 7
    for m in p1.motions[1:]:
        assert np.allclose(m[:2, :2], -np.eye(2))
    # half-turns about the edge midpoints assemble the side-4 triangle obtained by
    # scaling the side-2 net by -2 about its centroid
    union = shapely.union_all([_placed(tile_shape(net), m) for m in p1.motions], grid_size=1e-9)
    big = shapely.affinity.scale(Polygon(net.boundary_polygon()), -2, -2, origin=tuple(net.centroid()))
    assert big.area == pytest.approx(4 * math.sqrt(3), rel=1e-9)
    assert big.difference(union).area < 1e-9


def test_regular_tiling_window():
    iso = isotetra_from_triangle(1, 1, 1)
    net = cut_and_unfold(iso.mesh, geodesic_star(iso.mesh, 0))
    d = net.diameter()
    rep = verify_tiling(net, tile_patch(net, 4), (4 * d, 4 * d))
    assert rep.passed
    assert rep.overlap < 1e-6 and rep.gap < 1e-6
    assert rep.to_dict()["passed"] is True


def test_window_too_large_reports_radius():
    iso = isotetra_from_triangle(1, 1, 1)
    net = cut_and_unfold(iso.mesh, geodesic_star(iso.mesh, 0))
    d = net.diameter()
    with pytest.raises(WindowTooLargeError) as info:
        verify_tiling(net, tile_patch(net, 1), (4 * d, 4 * d))
    assert info.value.required_radius > 1


def test_small_window_on_random_net():
    iso = isotetra_from_triangle(1.0, 1.2, 1.3)
    net = cut_and_unfold(iso.mesh, edge_spanning_tree(iso.mesh, 3))
    d = net.diameter()
    rep = verify_tiling(net, tile_patch(net, 4), (0.5 * d, 0.5 * d))
    assert rep.overlap < 1e-6 and rep.gap < 1e-6


def test_patch_motions_are_translations_or_half_turns():
    iso = isotetra_from_triangle(1.0, 1.1, 1.25)
    net = cut_and_unfold(iso.mesh, edge_spanning_tree(iso.mesh, 0))
    for m in tile_patch(net, 3).motions:
        assert np.allclose(m[:2, :2], np.eye(2)) or np.allclose(m[:2, :2], -np.eye(2))


def test_bad_window():
    iso = isotetra_from_triangle(1, 1, 1)
    net = cut_and_unfold(iso.mesh, geodesic_star(iso.mesh, 0))
    with pytest.raises(ValueError):
        verify_tiling(net, tile_patch(net, 1), (0, 1))
    with pytest.raises(ValueError):
        tile_patch(net, -1)


def _regular_star_net():
    iso = isotetra_from_triangle(1, 1, 1)
    return cut_and_unfold(iso.mesh, geodesic_star(iso.mesh, 0))


def test_regular_k3_two_by_two_window():
    net = _regular_star_net()
    rep = verify_tiling(net, tile_patch(net, 3), (2.0, 2.0))
    assert rep.overlap < 1e-6 and rep.gap < 1e-6


def test_deleted_motion_leaves_gap():
    net = _regular_star_net()
    patch = tile_patch(net, 3)
    c = net.centroid()
    win = box(c[0] - 1, c[1] - 1, c[0] + 1, c[1] + 1)
    missing = tile_shape(net).intersection(win).area / win.area
    # drop the identity copy; it covers the middle of the centred window
    holed = TilingPatch(patch.motions[1:], patch.radius, patch.centers)
    rep = verify_tiling(net, holed, (2.0, 2.0))
    assert missing > 0.3
    assert rep.gap == pytest.approx(missing, rel=1e-6)
    assert rep.overlap < 1e-6


def test_two_half_turns_make_a_translation():
    net = _regular_star_net()
    p = tile_patch(net, 2)
    g = [geo.half_turn(c) for c in p.centers]
    for a in g:
        for b in g:
            r = a @ b
            assert abs(geo.rotation_angle(r)) < 1e-9
            assert np.allclose(r[:2, :2], np.eye(2))
