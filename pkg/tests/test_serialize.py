import math
import os

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import random_case
from revnets import (OffParseError, cut_and_unfold, edge_spanning_tree, geodesic_star, isotetra_from_triangle,
                     regular_tetrahedron, tile_patch, tree_in_net, unit_cube, verify_reversibility)
from revnets import serialize as ser


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_round_trip(x):
    assert float(ser.loads(ser.dumps(x))) == x


def test_dumps_is_sorted_and_typed():
    text = ser.dumps({"b": np.float64(1.5), "a": [np.int64(2), True, None], "c": np.array([1.0, 0.1])})
    assert text == '{"a":[2,true,null],"b":1.5,"c":[1.0,0.10000000000000001]}'
    assert ser.dumps(-0.0) == "0.0"
    with pytest.raises(ValueError):
        ser.dumps(math.nan)
    with pytest.raises(TypeError):
        ser.dumps(object())


def test_indented_output_parses():
    v = {"x": [[1.0, 2.0], [3.0, 4.0]], "y": {"z": []}}
    assert ser.loads(ser.dumps(v, indent=2)) == v


def test_loads_reports_line():
    with pytest.raises(OffParseError) as info:
        ser.loads('{\n"a": 1,\n}')
    assert info.value.line == 3


@pytest.mark.parametrize("seed", range(4))
def test_tree_round_trip(seed):
    m = random_case(seed)
    t = edge_spanning_tree(m, seed)
    t2 = tree_in_net(cut_and_unfold(m, t), seed)
    for tree in (t, t2):
        text = ser.dumps(ser.tree_record(tree), indent=1)
        back = ser.read_tree(text)
        assert back == tree
        assert ser.dumps(ser.tree_record(back), indent=1) == text


def test_read_tree_rejects_bad_input():
    with pytest.raises(OffParseError):
        ser.read_tree('{"nodes": []}')
    with pytest.raises(OffParseError):
        ser.read_tree('{"nodes": [{"id": 1, "face": 0, "bary": [1, 0, 0]}], "edges": []}')
    with pytest.raises(OffParseError):
        ser.read_tree('{"nodes": [{"id": 0, "face": 0, "bary": "x"}], "edges": []}')


def _json_round_trip(record):
    text = ser.dumps(record, indent=1)
    assert ser.dumps(ser.loads(text), indent=1) == text
    return text


def test_net_chain_report_round_trip():
    m = regular_tetrahedron()
    d1 = geodesic_star(m, 3)
    d2 = tree_in_net(cut_and_unfold(m, d1), 7)
    rep = verify_reversibility(m, d1, d2)
    _json_round_trip(ser.net_record(rep.n1, False))
    _json_round_trip(ser.net_record(rep.n2))
    _json_round_trip(ser.chain_record(rep.chain))
    _json_round_trip(rep.to_dict())
    rec = ser.loads(ser.dumps(ser.chain_record(rep.chain)))
    for rows, m_ in zip(rec["placement_Q"], rep.chain.placement_Q):
        assert np.array_equal(ser.read_motion(rows), m_)


def test_net_record_fields():
    m = unit_cube()
    net = cut_and_unfold(m, edge_spanning_tree(m, 1))
    rec = ser.loads(ser.dumps(ser.net_record(net, False)))
    assert rec["area"] == net.area() and rec["perimeter"] == net.perimeter()
    assert rec["overlaps"] is False
    assert len(rec["cells"]) == net.complex.n_cells
    assert all(len(c["motion"]) == 2 and len(c["motion"][0]) == 3 for c in rec["cells"])
    assert ser.read_tree(rec["tree"]) == net.tree


def test_patch_round_trip():
    iso = isotetra_from_triangle(1.0, 1.1, 1.2)
    net = cut_and_unfold(iso.mesh, edge_spanning_tree(iso.mesh, 0))
    patch = tile_patch(net, 2)
    text = ser.dumps(ser.patch_record(patch))
    back = ser.read_patch(text)
    assert back.radius == patch.radius
    assert all(np.array_equal(a, b) for a, b in zip(back.motions, patch.motions))
    assert all(np.array_equal(a, b) for a, b in zip(back.centers, patch.centers))
    assert ser.dumps(ser.patch_record(back)) == text


def test_write_atomic(tmp_path):
    p = tmp_path / "sub" / "x.json"
    ser.write_atomic(str(p), "abc\n")
    ser.write_atomic(str(p), "def\n")
    assert p.read_text() == "def\n"
    assert os.listdir(p.parent) == ["x.json"]
