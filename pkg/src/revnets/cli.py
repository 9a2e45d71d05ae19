"""Command-line entry point: ``revnets unfold|reverse|source-star|tile``."""

from __future__ import annotations

import argparse
import os
import sys

from . import serialize as ser
from .dissection import DissectionTree, analyze_crossing, edge_spanning_tree, tree_in_net, validate_tree
from .errors import CrossingTreesError, OffParseError, RevnetsError, WindowTooLargeError
from .geodesic import cut_locus, geodesic_star, star_unfold
from .isotess import isotetra_from_triangle, tile_patch, tile_shape, verify_tiling
from .mesh import PolyhedronMesh, SurfacePoint, load_off
from .reversible import animate_chain, verify_reversibility
from .svg import RenderStyle, chain_bounds, render_chain_frame, render_net, render_tiling
from .unfold import cut_and_unfold, self_overlaps

EXIT_OK, EXIT_VALIDATION, EXIT_PARSE, EXIT_CROSSING = 0, 2, 3, 4


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


def _read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _Fail(EXIT_PARSE, f"cannot read {path}: {exc.strerror}") from exc


def _load_mesh(path: str) -> PolyhedronMesh:
    return load_off(_read_text(path))


def parse_surface_point(text: str) -> SurfacePoint:
    """``f=<face>,u=<u>,v=<v>`` with barycentric coordinates (1-u-v, u, v)."""
    try:
        fields = dict(part.split("=", 1) for part in text.split(","))
        f, u, v = int(fields["f"]), float(fields["u"]), float(fields["v"])
    except (ValueError, KeyError) as exc:
        raise _Fail(EXIT_PARSE, f"bad surface point {text!r}; expected f=<face>,u=<u>,v=<v>") from exc
    if u < 0 or v < 0 or u + v > 1:
        raise _Fail(EXIT_VALIDATION, f"surface point {text!r} lies outside its face")
    return SurfacePoint(f, (1.0 - u - v, u, v))


def _check_face(mesh: PolyhedronMesh, p: SurfacePoint):
    if not 0 <= p.face < len(mesh.triangles):
        raise _Fail(EXIT_VALIDATION, f"face {p.face} out of range")


def parse_tree(mesh: PolyhedronMesh, spec: str) -> DissectionTree:
    """Tree from ``star:<v>``, ``random:<seed>``, ``cutlocus:<point>`` or a JSON file path."""
    kind, _, arg = spec.partition(":")
    if kind == "star" and arg:
        v = _int(arg, spec)
        if not 0 <= v < mesh.n_vertices:
            raise _Fail(EXIT_VALIDATION, f"vertex {v} out of range")
        return geodesic_star(mesh, v)
    if kind == "random" and arg:
        return edge_spanning_tree(mesh, _int(arg, spec))
    if kind == "cutlocus" and arg:
        s = parse_surface_point(arg)
        _check_face(mesh, s)
        return cut_locus(mesh, s)
    tree = ser.read_tree(_read_text(spec))
    rep = validate_tree(mesh, tree)
    if not rep.valid:
        raise _Fail(EXIT_VALIDATION, "invalid tree: " + "; ".join(rep.violations))
    return tree


def _int(text: str, spec: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise _Fail(EXIT_PARSE, f"bad tree spec {spec!r}") from exc


def _floats(text: str, n: int, what: str) -> list[float]:
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError as exc:
        raise _Fail(EXIT_PARSE, f"bad {what} {text!r}") from exc
    if len(vals) != n:
        raise _Fail(EXIT_PARSE, f"{what} needs {n} comma-separated numbers")
    return vals


def _emit(obj):
    sys.stdout.write(ser.dumps(obj) + "\n")


def _write(out_dir: str, name: str, text: str):
    try:
        ser.write_atomic(os.path.join(out_dir, name), text)
    except OSError as exc:
        raise _Fail(EXIT_PARSE, f"cannot write {name}: {exc.strerror}") from exc


# -- subcommands ---------------------------------------------------------------------

def cmd_unfold(args) -> int:
    mesh = _load_mesh(args.mesh)
    tree = parse_tree(mesh, args.tree)
    net = cut_and_unfold(mesh, tree)
    overlaps = bool(self_overlaps(net)) if args.check_overlap else None
    _write(args.out_dir, "net.svg", render_net(net, RenderStyle()))
    _write(args.out_dir, "net.json", ser.dumps(ser.net_record(net, overlaps), indent=1))
    _emit({"area": net.area(), "perimeter": net.perimeter(), "overlaps": overlaps})
    return EXIT_OK


def _second_tree(mesh, d1, spec: str) -> DissectionTree:
    kind, _, arg = spec.partition(":")
    if kind == "auto" and arg:
        return tree_in_net(cut_and_unfold(mesh, d1), _int(arg, spec))
    return parse_tree(mesh, spec)


def _write_report(args, rep, prefix=""):
    _write(args.out_dir, prefix + "report.json", ser.dumps(rep.to_dict(), indent=1))
    if rep.chain is not None:
        _write(args.out_dir, prefix + "chain.json", ser.dumps(ser.chain_record(rep.chain), indent=1))


def cmd_reverse(args) -> int:
    mesh = _load_mesh(args.mesh)
    d1 = parse_tree(mesh, args.tree1)
    d2 = _second_tree(mesh, d1, args.tree2)
    cr = analyze_crossing(mesh, d1, d2)
    if cr.crossing:
        raise CrossingTreesError(cr.witness)
    rep = verify_reversibility(mesh, d1, d2)
    _write_report(args, rep)
    chain = rep.chain
    if chain is not None and rep.n2 is not None:
        frames = animate_chain(chain, args.frames) if args.frames else []
        b = chain_bounds(chain, frames or [chain.placement_P, chain.placement_Q])
        style = RenderStyle()
        _write(args.out_dir, "n1.svg", render_chain_frame(chain, chain.placement_P, style, b))
        _write(args.out_dir, "n2.svg", render_chain_frame(chain, chain.placement_Q, style, b))
        width = max(3, len(str(len(frames) - 1)))
        for i, motions in enumerate(frames):
            _write(args.out_dir, f"frame_{i:0{width}d}.svg", render_chain_frame(chain, motions, style, b))
    _emit({"passed": rep.passed, "conditions": {k: v.passed for k, v in sorted(rep.conditions.items())}})
    return EXIT_OK if rep.passed else EXIT_VALIDATION


def cmd_source_star(args) -> int:
    mesh = _load_mesh(args.mesh)
    s = parse_surface_point(args.source)
    _check_face(mesh, s)
    star = star_unfold(mesh, s, seed=args.seed)
    locus = cut_locus(mesh, s, seed=args.seed, star=star)
    source = cut_and_unfold(mesh, locus)
    src_ov, star_ov = bool(self_overlaps(source)), bool(self_overlaps(star.net))
    style = RenderStyle()
    _write(args.out_dir, "source.svg", render_net(source, style))
    _write(args.out_dir, "star.svg", render_net(star.net, style))
    _write(args.out_dir, "source.json", ser.dumps(ser.net_record(source, src_ov), indent=1))
    _write(args.out_dir, "star.json", ser.dumps(ser.net_record(star.net, star_ov), indent=1))
    rep = verify_reversibility(mesh, locus, star.tree)
    _write_report(args, rep)
    _emit({"source_overlaps": src_ov, "star_overlaps": star_ov, "passed": rep.passed})
    ok = rep.passed and not src_ov and not star_ov
    return EXIT_OK if ok else EXIT_VALIDATION


def cmd_tile(args) -> int:
    a, b, c = _floats(args.triangle, 3, "triangle")
    iso = isotetra_from_triangle(a, b, c)
    tree = parse_tree(iso.mesh, args.tree)
    net = cut_and_unfold(iso.mesh, tree)
    patch = tile_patch(net, args.radius)
    if args.window:
        window = tuple(_floats(args.window, 2, "window"))
    else:
        d = 4 * net.diameter()
        window = (d, d)
    try:
        rep = verify_tiling(net, patch, window)
    except WindowTooLargeError as exc:
        raise _Fail(EXIT_VALIDATION, f"{exc}; radius {exc.required_radius} needed") from exc
    _write(args.out_dir, "tiling.svg", render_tiling(tile_shape(net), patch.motions, rep.window, RenderStyle()))
    _write(args.out_dir, "net.json", ser.dumps(ser.net_record(net), indent=1))
    _write(args.out_dir, "patch.json", ser.dumps(ser.patch_record(patch), indent=1))
    _write(args.out_dir, "coverage.json", ser.dumps(rep.to_dict(), indent=1))
    _emit(rep.to_dict())
    return EXIT_OK if rep.passed else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="revnets", description="Reversible nets of convex polyhedra.")
    sub = p.add_subparsers(dest="command", required=True)

    u = sub.add_parser("unfold", help="cut a polyhedron along a tree and develop the net")
    u.add_argument("--mesh", required=True)
    u.add_argument("--tree", required=True, help="JSON path, star:<v>, random:<seed> or cutlocus:f=,u=,v=")
    u.add_argument("--check-overlap", action="store_true")
    u.add_argument("--out-dir", default=".")
    u.set_defaults(func=cmd_unfold)

    r = sub.add_parser("reverse", help="build and certify the hinged chain between two nets")
    r.add_argument("--mesh", required=True)
    r.add_argument("--tree1", required=True)
    r.add_argument("--tree2", required=True, help="tree spec or auto:<seed>")
    r.add_argument("--frames", type=int, default=0)
    r.add_argument("--out-dir", default=".")
    r.set_defaults(func=cmd_reverse)

    s = sub.add_parser("source-star", help="source and star unfoldings from a point")
    s.add_argument("--mesh", required=True)
    s.add_argument("--source", required=True, help="f=<face>,u=<u>,v=<v>")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out-dir", default=".")
    s.set_defaults(func=cmd_source_star)

    t = sub.add_parser("tile", help="tile the plane with an isotetrahedron net")
    t.add_argument("--triangle", required=True, help="a,b,c side lengths of an acute triangle")
    t.add_argument("--tree", default="random:0")
    t.add_argument("--radius", type=int, default=4)
    t.add_argument("--window", help="w,h (default: 4 x net diameter square)")
    t.add_argument("--out-dir", default=".")
    t.set_defaults(func=cmd_tile)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "frames", 0) and args.frames < 2:
        print("error: --frames needs at least 2", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        return args.func(args)
    except _Fail as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except CrossingTreesError as exc:
        print(f"error: trees cross: {exc.witness}", file=sys.stderr)
        return EXIT_CROSSING
    except OffParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (RevnetsError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
