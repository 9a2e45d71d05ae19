"""JSON encoding of trees, nets, chains, reports and tiling patches.

Floats are written with 17 significant digits so every value round-trips
exactly; keys are sorted so output bytes depend only on content.
"""

from __future__ import annotations

import json
import math
import os
import tempfile

import numpy as np

from .dissection import DissectionTree, TreeEdge, TreeNode
from .errors import OffParseError
from .mesh import SurfacePoint


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite number {x}")
    if x == 0:
        return "0.0"
    s = format(x, ".17g")
    if "e" not in s and "." not in s:
        s += ".0"
    return s


def dumps(value, indent: int | None = None) -> str:
    """Deterministic JSON text for plain data, numpy arrays and scalars."""
    return _emit(value, indent, 0) + ("\n" if indent is not None else "")


def _emit(v, indent, level) -> str:
    if isinstance(v, np.ndarray):
        v = v.tolist()
    if isinstance(v, (np.floating,)):
        v = float(v)
    if isinstance(v, (np.integer,)):
        v = int(v)
    if isinstance(v, np.bool_):
        v = bool(v)
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return _fmt_float(v)
    if isinstance(v, str):
        return json.dumps(v, ensure_ascii=True)
    pad = "" if indent is None else "\n" + " " * (indent * (level + 1))
    end = "" if indent is None else "\n" + " " * (indent * level)
    colon = ":" if indent is None else ": "
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = sorted(v.items(), key=lambda kv: str(kv[0]))
        body = ",".join(pad + json.dumps(str(k)) + colon + _emit(x, indent, level + 1) for k, x in items)
        return "{" + body + end + "}"
    if isinstance(v, (list, tuple)):
        if not v:
            return "[]"
        if indent is not None and all(not isinstance(x, (dict, list, tuple, np.ndarray)) for x in v):
            return "[" + ", ".join(_emit(x, None, 0) for x in v) + "]"
        body = ",".join(pad + _emit(x, indent, level + 1) for x in v)
        return "[" + body + end + "]"
    raise TypeError(f"cannot serialize {type(v).__name__}")


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise OffParseError(f"invalid JSON: {exc.msg}", exc.lineno) from exc


def write_atomic(path: str, text: str):
    """Write ``text`` to ``path`` via a temporary file and rename."""
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- records -------------------------------------------------------------------

def point_record(p: SurfacePoint) -> dict:
    return {"face": int(p.face), "bary": [float(x) for x in p.bary]}


def read_point(d) -> SurfacePoint:
    try:
        return SurfacePoint(int(d["face"]), tuple(float(x) for x in d["bary"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise OffParseError(f"bad surface point record: {d!r}") from exc


def tree_record(tree: DissectionTree) -> dict:
    nodes = []
    for n in tree.nodes:
        r = {"id": n.id, **point_record(n.point)}
        if n.vertex is not None:
            r["vertex"] = int(n.vertex)
        nodes.append(r)
    edges = [{"a": e.a, "b": e.b, "polyline": [point_record(p) for p in e.polyline]} for e in tree.edges]
    return {"nodes": nodes, "edges": edges}


def read_tree(data) -> DissectionTree:
    if isinstance(data, str):
        data = loads(data)
    try:
        nodes = [TreeNode(int(n["id"]), read_point(n), None if n.get("vertex") is None else int(n["vertex"]))
                 for n in data["nodes"]]
        edges = [TreeEdge(int(e["a"]), int(e["b"]), tuple(read_point(p) for p in e["polyline"]))
                 for e in data["edges"]]
    except (KeyError, TypeError) as exc:
        raise OffParseError(f"tree JSON is missing field {exc}") from exc
    if [n.id for n in nodes] != list(range(len(nodes))):
        raise OffParseError("tree node ids must be 0..n-1 in order")
    return DissectionTree(nodes, edges)


def motion_record(m: np.ndarray) -> list:
    """2x3 row-major rigid motion."""
    return [[float(m[0, 0]), float(m[0, 1]), float(m[0, 2])], [float(m[1, 0]), float(m[1, 1]), float(m[1, 2])]]


def read_motion(rows) -> np.ndarray:
    m = np.eye(3)
    m[:2, :] = np.asarray(rows, dtype=float)
    return m


def net_record(net, overlaps: bool | None = None) -> dict:
    cx = net.complex
    cells = []
    for c in range(cx.n_cells):
        cells.append({"cell": c, "face": int(cx.cell_tri[c]), "empty": cx.is_digon(c),
                      "motion": motion_record(net.motions[c]), "polygon": net.cells[c]})
    boundary = [{"start": s.start, "end": s.end, "edge": s.edge, "side": s.side,
                 "vertex": int(s.point) if s.point < net.mesh.n_vertices else None} for s in net.boundary]
    images = {str(v): [[i, float(xy[0]), float(xy[1])] for i, xy in lst] for v, lst in sorted(net.vertex_images.items())}
    marks = None
    if net.interior_marks is not None:
        marks = {str(e): pts for e, pts in sorted(net.interior_marks.items())}
    return {"tree": tree_record(net.tree), "cells": cells, "boundary": boundary, "vertex_images": images,
            "interior_marks": marks, "area": net.area(), "perimeter": net.perimeter(), "overlaps": overlaps}


def chain_record(chain) -> dict:
    pieces = []
    for p in chain.pieces:
        pieces.append({"index": p.index, "empty": p.empty, "side": p.side, "area": p.area,
                       "polygon": p.polygon, "arc": p.arc, "hinge_candidates": p.hinge_candidates,
                       "labels": [{"tree": t, "edge": int(e), "side": s} for t, e, s in p.labels]})
    return {"pieces": pieces, "hinges": chain.hinges, "hinge_vertices": [int(v) for v in chain.hinge_vertices],
            "placement_P": [motion_record(m) for m in chain.placement_P],
            "placement_Q": [motion_record(m) for m in chain.placement_Q]}


def patch_record(patch) -> dict:
    return {"radius": patch.radius, "centers": patch.centers, "motions": [motion_record(m) for m in patch.motions]}


def read_patch(data):
    from .isotess import TilingPatch

    if isinstance(data, str):
        data = loads(data)
    return TilingPatch([read_motion(m) for m in data["motions"]], int(data["radius"]),
                       [np.asarray(c, dtype=float) for c in data["centers"]])
