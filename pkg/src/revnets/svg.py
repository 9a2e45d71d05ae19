"""Deterministic SVG 1.1 rendering of nets, chain frames and tilings."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PALETTE = ("#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462",
           "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f")


@dataclass(frozen=True)
class RenderStyle:
    width: float = 600.0
    height: float = 600.0
    margin: float = 20.0
    stroke: float = 1.0
    cut_stroke: float = 2.0
    mark_stroke: float = 1.0
    palette: tuple[str, ...] = PALETTE

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0 or self.margin < 0:
            raise ValueError("render dimensions must be positive")
        if self.stroke <= 0 or self.cut_stroke <= 0 or self.mark_stroke <= 0:
            raise ValueError("stroke widths must be positive")
        if not self.palette:
            raise ValueError("palette must not be empty")

    def color(self, i: int) -> str:
        return self.palette[i % len(self.palette)]


def _num(x: float) -> str:
    r = round(float(x), 6)
    if r == 0:
        r = 0.0
    s = f"{r:.6f}".rstrip("0").rstrip(".")
    return s or "0"


class _Canvas:
    """World-to-page mapping with y flipped; fits ``bounds`` into the page."""

    def __init__(self, bounds, style: RenderStyle):
        x0, y0, x1, y1 = bounds
        self.style = style
        w = max(x1 - x0, 1e-12)
        h = max(y1 - y0, 1e-12)
        self.scale = min((style.width - 2 * style.margin) / w, (style.height - 2 * style.margin) / h)
        self.x0, self.y1 = x0, y1
        self.parts: list[str] = []

    def pt(self, p) -> str:
        s = self.style
        x = s.margin + (p[0] - self.x0) * self.scale
        y = s.margin + (self.y1 - p[1]) * self.scale
        return f"{_num(x)},{_num(y)}"

    def polygon(self, pts, fill: str, stroke: float, cls: str):
        coords = " ".join(self.pt(p) for p in pts)
        self.parts.append(f'<polygon class="{cls}" points="{coords}" fill="{fill}" '
                          f'stroke="#333333" stroke-width="{_num(stroke)}" stroke-linejoin="round"/>')

    def polyline(self, pts, color: str, stroke: float, cls: str, dash: str | None = None):
        coords = " ".join(self.pt(p) for p in pts)
        d = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(f'<polyline class="{cls}" points="{coords}" fill="none" '
                          f'stroke="{color}" stroke-width="{_num(stroke)}"{d}/>')

    def circle(self, p, r: float, color: str, cls: str):
        x, y = self.pt(p).split(",")
        self.parts.append(f'<circle class="{cls}" cx="{x}" cy="{y}" r="{_num(r)}" fill="{color}"/>')

    def text(self) -> str:
        s = self.style
        head = ('<?xml version="1.0" encoding="UTF-8"?>\n'
                f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_num(s.width)}" '
                f'height="{_num(s.height)}" viewBox="0 0 {_num(s.width)} {_num(s.height)}">\n')
        return head + "".join(p + "\n" for p in self.parts) + "</svg>\n"


def _bounds(point_sets) -> tuple[float, float, float, float]:
    pts = [np.asarray(p, dtype=float).reshape(-1, 2) for p in point_sets if len(p)]
    if not pts:
        return (0.0, 0.0, 1.0, 1.0)
    allp = np.vstack(pts)
    return (float(allp[:, 0].min()), float(allp[:, 1].min()), float(allp[:, 0].max()), float(allp[:, 1].max()))


def _apply(m: np.ndarray, pts) -> np.ndarray:
    p = np.asarray(pts, dtype=float).reshape(-1, 2)
    return p @ m[:2, :2].T + m[:2, 2]


def render_net(net, style: RenderStyle = RenderStyle(), bounds=None) -> str:
    """Cells filled per source face, cut boundary in bold, interior marks dashed."""
    cx = net.complex
    cells = [np.asarray(net.cells[c]) for c in net.real_cells()]
    cv = _Canvas(bounds or _bounds(cells), style)
    for c in net.real_cells():
        cv.polygon(net.cells[c], style.color(int(cx.cell_tri[c])), style.stroke, "cell")
    for seg in net.boundary:
        cv.polyline([seg.start, seg.end], "#000000", style.cut_stroke, "cut")
    if net.interior_marks:
        for _, pts in sorted(net.interior_marks.items()):
            cv.polyline(pts, "#c00000", style.mark_stroke, "mark", dash="4 2")
    return cv.text()


def chain_bounds(chain, frames) -> tuple[float, float, float, float]:
    """Common bounds over every piece in every frame, for a steady viewport."""
    pts = []
    for motions in frames:
        for p, m in zip(chain.pieces, motions):
            pts.append(_apply(m, p.polygon))
    return _bounds(pts)


def render_chain_frame(chain, motions, style: RenderStyle = RenderStyle(), bounds=None) -> str:
    """Pieces placed by ``motions``; hinges drawn as dots."""
    placed = [_apply(m, p.polygon) for p, m in zip(chain.pieces, motions)]
    cv = _Canvas(bounds or _bounds(placed), style)
    for p, pts in zip(chain.pieces, placed):
        if p.empty:
            cv.polyline(pts, style.color(p.index), style.cut_stroke, "piece empty")
        else:
            cv.polygon(pts, style.color(p.index), style.stroke, "piece")
    for i, h in enumerate(chain.hinges):
        cv.circle(_apply(motions[i], h)[0], 2.5 * style.stroke, "#000000", "hinge")
    return cv.text()


def render_tiling(shape, motions, window=None, style: RenderStyle = RenderStyle()) -> str:
    """Copies of ``shape`` (a shapely polygon) colored by rotation class."""
    import shapely.affinity

    copies = []
    for m in motions:
        g = shapely.affinity.affine_transform(shape, [m[0, 0], m[0, 1], m[1, 0], m[1, 1], m[0, 2], m[1, 2]])
        cls = 0 if m[0, 0] > 0 else 1
        for poly in getattr(g, "geoms", [g]):
            if not poly.is_empty:
                copies.append((cls, np.asarray(poly.exterior.coords)[:-1]))
    if window is not None:
        x, y, w, h = window
        b = (x, y, x + w, y + h)
    else:
        b = _bounds([c for _, c in copies])
    cv = _Canvas(b, style)
    for cls, pts in copies:
        cv.polygon(pts, style.color(cls), style.stroke, f"copy c{cls}")
    if window is not None:
        x, y, w, h = window
        cv.polyline([(x, y), (x + w, y), (x + w, y + h), (x, y + h), (x, y)], "#0000ff", style.cut_stroke, "window")
    return cv.text()
