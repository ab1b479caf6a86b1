"""Deterministic SVG drawings of instances, level regions and witnesses."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence
from xml.sax.saxutils import escape

from .arrangement import Arrangement, LevelProfile
from .construct import folk_key
from .geom import Curve, Point

LAYERS = ("strings", "levels", "witness", "folks")
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")
CANVAS = 800
MARGIN = 20


class _Frame:
    def __init__(self, points: Sequence[Point]):
        xs = [Fraction(p.x) for p in points] or [Fraction(0)]
        ys = [Fraction(p.y) for p in points] or [Fraction(0)]
        self.x0, self.y0 = min(xs), min(min(ys), Fraction(0))
        span = max(max(xs) - self.x0, max(ys) - self.y0, Fraction(1))
        self.scale = Fraction(CANVAS - 2 * MARGIN) / span
        self.height = int((max(ys) - self.y0) * self.scale) + 2 * MARGIN

    def xy(self, p: Point) -> str:
        x = MARGIN + (Fraction(p.x) - self.x0) * self.scale
        y = self.height - MARGIN - (Fraction(p.y) - self.y0) * self.scale
        return f"{float(x):.3f},{float(y):.3f}"


def _polyline(frame: _Frame, pts, cls: str, colour: str, title: str = "", width: float = 1.5) -> str:
    body = " ".join(frame.xy(p) for p in pts)
    tip = f"<title>{escape(title)}</title>" if title else ""
    return (f'<polyline class="{cls}" points="{body}" fill="none" stroke="{colour}" '
            f'stroke-width="{width}">{tip}</polyline>')


def _polygon(frame: _Frame, pts, cls: str, fill: str, opacity: float, extra: str = "") -> str:
    body = " ".join(frame.xy(p) for p in pts)
    return f'<polygon class="{cls}" points="{body}" fill="{fill}" fill-opacity="{opacity:.3f}" stroke="none"{extra}/>'


def render_svg(
    curves: Sequence[Curve],
    layers: Sequence[str] = (),
    arrangement: Arrangement | None = None,
    profile: LevelProfile | None = None,
    witness=None,
    witness_curves: Sequence[Curve] = (),
) -> str:
    """SVG text for the chosen layers; strings are always drawn."""
    layers = [x for x in layers if x != "strings"]
    for x in layers:
        if x not in LAYERS:
            raise ValueError(f"unknown layer {x!r}; choose from {', '.join(LAYERS)}")
    pts = [v for c in list(curves) + list(witness_curves) for v in c.vertices]
    frame = _Frame(pts)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS}" height="{frame.height}" '
        f'viewBox="0 0 {CANVAS} {frame.height}">',
        f'<rect class="background" width="{CANVAS}" height="{frame.height}" fill="white"/>',
    ]
    ground_y = frame.xy(Point(frame.x0, 0)).split(",")[1]
    parts.append(f'<line class="ground" x1="0" y1="{ground_y}" x2="{CANVAS}" y2="{ground_y}" '
                 f'stroke="#555" stroke-width="2"/>')

    depth: dict[int, int] = {}
    if "levels" in layers and arrangement is not None:
        top = max(arrangement.levels, default=0) or 1
        for f, lv in enumerate(arrangement.levels):
            if lv > 0:
                parts.append(_polygon(frame, arrangement.face_polygon(f), "face shaded", "#e6550d",
                                      0.15 + 0.6 * lv / top, f' data-level="{lv}"'))
        if profile is not None:
            for region in profile.regions:
                for s in region.strings:
                    depth[s] = region.level

    if "witness" in layers and witness_curves:
        half = len(witness_curves) // 2
        for i, c in enumerate(witness_curves):
            colour = "#3182bd" if i < half else "#31a354"
            parts.append(_polygon(frame, c.vertices, "region", colour, 0.08))
        for i, c in enumerate(witness_curves):
            colour = "#3182bd" if i < half else "#31a354"
            parts.append(_polyline(frame, c.vertices, "curve", colour, c.id, 2.0))

    for i, c in enumerate(curves):
        colour = "#222"
        if "folks" in layers:
            try:
                colour = PALETTE[(folk_key(c.id)[0] - 1) % len(PALETTE)]
            except (ValueError, IndexError):
                colour = "#222"
        if depth:
            colour = PALETTE[depth.get(i, 0) % len(PALETTE)]
        parts.append(_polyline(frame, c.vertices, "string", colour, c.id))

    if "witness" in layers and witness is not None:
        for p, cls, colour in ((witness.crossing, "crossing", "#000"), (witness.point, "witness", "#e31a1c")):
            x, y = frame.xy(p).split(",")
            parts.append(f'<circle class="{cls}" cx="{x}" cy="{y}" r="4" fill="{colour}"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
