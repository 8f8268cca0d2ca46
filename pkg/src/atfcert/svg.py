"""Deterministic SVG drawings of base diagrams.

Conventions: solid boundary, dashed cuts from each vertex to its node, an
x at every node, a dot at the monotone fiber and shaded placements.  When
every node sits close to the fiber a dashed circle marks the disk holding
them.
"""

from __future__ import annotations

import math
from fractions import Fraction
from xml.sax.saxutils import escape

from .atf import BaseDiagram
from .packing import GluingCertificate, Packing

SIZE = 480
MARGIN = 24
EPS_RADII = (Fraction(1, 100), Fraction(1, 20), Fraction(1, 10), Fraction(1, 4), Fraction(1, 2))
FILLS = ("#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860")


def _fmt(x: float) -> str:
    s = f"{x:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


class _Viewport:
    def __init__(self, points):
        xs = [float(p[0]) for p in points]
        ys = [float(p[1]) for p in points]
        self.x0, self.y1 = min(xs), max(ys)
        span = max(max(xs) - self.x0, self.y1 - min(ys), 1e-9)
        self.k = (SIZE - 2 * MARGIN) / span

    def __call__(self, p) -> tuple[str, str]:
        x = MARGIN + (float(p[0]) - self.x0) * self.k
        y = MARGIN + (self.y1 - float(p[1])) * self.k
        return _fmt(x), _fmt(y)

    def length(self, r) -> str:
        return _fmt(float(r) * self.k)


def _poly(vp, pts, attrs: str) -> str:
    coords = " ".join(",".join(vp(p)) for p in pts)
    return f'<polygon points="{coords}" {attrs}/>'


def _cluster_radius(d: BaseDiagram):
    nodes = d.nodes()
    if not nodes:
        return None
    far = max(math.dist(tuple(map(float, n)), tuple(map(float, d.fiber))) for n in nodes)
    for r in EPS_RADII:
        if far < r:
            return r
    return None


def render(d: BaseDiagram, packings: tuple[Packing, ...] = (), title: str = "") -> str:
    pts = list(d.polygon.vertices)
    for p in packings:
        for pl in p.placements:
            for R in (pl.pieces if isinstance(pl, GluingCertificate) else (pl.region(),)):
                pts.extend(R.vertices)
    vp = _Viewport(pts)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        f"<title>{escape(title or str(d))}</title>",
        '<rect x="0" y="0" width="100%" height="100%" fill="white"/>',
    ]
    for i, p in enumerate(packings):
        fill = FILLS[i % len(FILLS)]
        out.append(f'<g class="packing" data-name="{escape(p.name)}">')
        for pl in p.placements:
            regions = pl.pieces if isinstance(pl, GluingCertificate) else (pl.region(),)
            for R in regions:
                out.append(_poly(vp, R.vertices, f'fill="{fill}" fill-opacity="0.35" stroke="{fill}" stroke-width="1"'))
        out.append("</g>")
    out.append(_poly(vp, d.polygon.vertices, 'fill="none" stroke="black" stroke-width="2"'))
    for a, b in d.cut_segments():
        (x1, y1), (x2, y2) = vp(a), vp(b)
        out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="black" stroke-width="1.5" stroke-dasharray="6,4"/>')
    r = _cluster_radius(d)
    if r is not None and len(d.nodes()) > 1:
        cx, cy = vp(d.fiber)
        out.append(f'<circle cx="{cx}" cy="{cy}" r="{vp.length(r)}" fill="none" stroke="gray" stroke-dasharray="3,3"/>')
    for n in d.nodes():
        x, y = (float(v) for v in vp(n))
        s = 5
        out.append(
            f'<path d="M{_fmt(x - s)},{_fmt(y - s)} L{_fmt(x + s)},{_fmt(y + s)} '
            f'M{_fmt(x - s)},{_fmt(y + s)} L{_fmt(x + s)},{_fmt(y - s)}" stroke="crimson" stroke-width="2"/>'
        )
    fx, fy = vp(d.fiber)
    out.append(f'<circle cx="{fx}" cy="{fy}" r="3.5" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


__all__ = ["render"]
