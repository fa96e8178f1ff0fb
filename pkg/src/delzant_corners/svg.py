"""Minimal SVG output for polygons, curves and marked points.

Coordinates are written with a fixed number of digits so output is
byte-for-byte reproducible. The y axis is flipped so that the picture has
the usual mathematical orientation.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

from .polytope import DelzantPolytope

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf")
MARGIN = 0.05
WIDTH = 480


def _num(x: float) -> str:
    s = f"{x:.5f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _polygon_order(poly: DelzantPolytope) -> np.ndarray:
    v = poly.vertices_array
    c = v.mean(axis=0)
    ang = np.arctan2(v[:, 1] - c[1], v[:, 0] - c[0])
    return v[np.argsort(ang, kind="stable")]


class Canvas:
    def __init__(self, poly: DelzantPolytope, width: int = WIDTH):
        if poly.dim != 2:
            raise ValueError("only planar polytopes can be drawn")
        lo = poly.vertices_array.min(axis=0)
        hi = poly.vertices_array.max(axis=0)
        pad = MARGIN * (hi - lo)
        self.lo = lo - pad
        self.hi = hi + pad
        self.size = self.hi - self.lo
        self.width = width
        self.height = int(round(width * self.size[1] / self.size[0]))
        self.stroke = float(max(self.size)) / 250
        self.items: list[str] = []
        pts = " ".join(self._pt(p) for p in _polygon_order(poly))
        self.items.append(
            f'<polygon points="{pts}" fill="#f4f4f4" stroke="#000" '
            f'stroke-width="{_num(self.stroke)}"/>')

    def _xy(self, p):
        # flip y inside the viewBox
        return float(p[0]), float(self.lo[1] + self.hi[1] - p[1])

    def _pt(self, p) -> str:
        x, y = self._xy(p)
        return f"{_num(x)},{_num(y)}"

    def polyline(self, points, color: str, label: str | None = None):
        pts = " ".join(self._pt(p) for p in points)
        title = f"<title>{escape(label)}</title>" if label else ""
        self.items.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" '
            f'stroke-width="{_num(self.stroke)}">{title}</polyline>')

    def marker(self, p, color: str = "#000", label: str | None = None):
        x, y = self._xy(p)
        title = f"<title>{escape(label)}</title>" if label else ""
        self.items.append(
            f'<circle cx="{_num(x)}" cy="{_num(y)}" r="{_num(3 * self.stroke)}" '
            f'fill="{color}">{title}</circle>')

    def render(self) -> str:
        box = " ".join(_num(x) for x in (*self.lo, *self.size))
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" '
                f'height="{self.height}" viewBox="{box}">')
        return "\n".join([head, *("  " + s for s in self.items), "</svg>"]) + "\n"


def render_scene(poly: DelzantPolytope, curves=(), points=()) -> str:
    """``curves`` holds (polyline, label) pairs, ``points`` holds (xy, label) pairs."""
    canvas = Canvas(poly)
    for i, (line, label) in enumerate(curves):
        canvas.polyline(line, PALETTE[i % len(PALETTE)], label)
    for p, label in points:
        canvas.marker(p, "#000", label)
    return canvas.render()
