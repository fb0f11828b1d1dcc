"""Minimal SVG writer for a planar trajectory over level curves."""

from __future__ import annotations

from typing import Iterable, List, Sequence, Tuple
from xml.sax.saxutils import quoteattr

from .simulate import LevelSetCurve, TrajectoryRecord

LEVEL_COLORS = ("#1f77b4", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#17becf")


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def render_figure(traj: TrajectoryRecord, curves: Sequence[LevelSetCurve],
                  size: int = 800, title: str = "") -> str:
    """Trajectory polyline over closed level curves, equal axes, origin centred."""
    xs: List[Tuple[float, float]] = [(s[1], s[2]) for s in traj.samples]
    for c in curves:
        xs.extend((p[2], p[3]) for p in c.points)
    extent = max((max(abs(x), abs(y)) for x, y in xs), default=1.0) * 1.08 or 1.0
    half = size / 2
    scale = half / extent

    def to_px(x: float, y: float) -> str:
        return f"{_fmt(half + x * scale)},{_fmt(half - y * scale)}"

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>',
    ]
    if title:
        out.append(f"<title>{title}</title>")
    out.append(f'<line class="axis" x1="0" y1="{_fmt(half)}" x2="{size}" y2="{_fmt(half)}" '
               'stroke="#bbbbbb" stroke-width="1"/>')
    out.append(f'<line class="axis" x1="{_fmt(half)}" y1="0" x2="{_fmt(half)}" y2="{size}" '
               'stroke="#bbbbbb" stroke-width="1"/>')
    for i, c in enumerate(curves):
        color = LEVEL_COLORS[i % len(LEVEL_COLORS)]
        pts = " ".join(to_px(p[2], p[3]) for p in c.points)
        out.append(f'<polygon class="level-set" data-level={quoteattr(repr(c.level))} '
                   f'points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        top = max(c.points, key=lambda p: p[3])
        out.append(f'<text x="{to_px(top[2], top[3]).split(",")[0]}" '
                   f'y="{_fmt(half - top[3] * scale - 4)}" font-size="12" fill="{color}" '
                   f'text-anchor="middle">W = {c.level:g}</text>')
    if xs:
        pts = " ".join(to_px(s[1], s[2]) for s in traj.samples)
        out.append(f'<polyline class="trajectory" points="{pts}" fill="none" '
                   'stroke="#d62728" stroke-width="2"/>')
        x0, y0 = traj.samples[0][1], traj.samples[0][2]
        cx, cy = to_px(x0, y0).split(",")
        out.append(f'<circle class="start" cx="{cx}" cy="{cy}" r="4" fill="#d62728"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
