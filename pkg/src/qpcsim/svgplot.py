"""Minimal deterministic SVG line/scatter rendering.

Renders exactly the data series handed to it (the same rows the CSV
emitters write), with no computation in the plot path beyond coordinate
mapping.  Output is a plain SVG string, byte-stable for identical input.
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")

_MARGIN_LEFT = 72
_MARGIN_RIGHT = 18
_MARGIN_TOP = 42
_MARGIN_BOTTOM = 52


def _fmt(v: float) -> str:
    return format(v, ".6g")


class Series:
    """One plottable series: named (x, y) points drawn as a line or dots."""

    def __init__(self, name: str, points: Sequence[Tuple[float, float]],
                 mode: str = "line", color: Optional[str] = None):
        if mode not in ("line", "scatter"):
            raise ValueError(f"mode must be 'line' or 'scatter', got {mode!r}")
        if not points:
            raise ValueError(f"series {name!r} has no points")
        self.name = name
        self.points = list(points)
        self.mode = mode
        self.color = color


def render_plot(series: List[Series], *, title: str = "", x_label: str = "",
                y_label: str = "", width: int = 720, height: int = 480) -> str:
    """Render series into a standalone SVG document string."""
    if not series:
        raise ValueError("nothing to plot")
    xs = [x for s in series for x, _ in s.points]
    ys = [y for s in series for _, y in s.points]
    x_min, x_max = min(xs), max(xs)
    y_min, y_max = min(ys), max(ys)
    if x_min == x_max:
        x_min, x_max = x_min - 1.0, x_max + 1.0
    if y_min == y_max:
        y_min, y_max = y_min - 1.0, y_max + 1.0
    y_pad = 0.05 * (y_max - y_min)
    y_min -= y_pad
    y_max += y_pad

    plot_w = width - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = height - _MARGIN_TOP - _MARGIN_BOTTOM

    def px(x: float) -> float:
        return _MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w

    def py(y: float) -> float:
        return _MARGIN_TOP + plot_h - (y - y_min) / (y_max - y_min) * plot_h

    out = []
    out.append(f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
               f'height="{height}" viewBox="0 0 {width} {height}">')
    out.append(f'<rect width="{width}" height="{height}" fill="white"/>')
    if title:
        out.append(f'<text x="{width / 2:.1f}" y="24" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="16">{title}</text>')

    # axes box and ticks
    out.append(f'<rect x="{_MARGIN_LEFT}" y="{_MARGIN_TOP}" width="{plot_w}" '
               f'height="{plot_h}" fill="none" stroke="#444"/>')
    ticks = 5
    for t in range(ticks + 1):
        fx = x_min + (x_max - x_min) * t / ticks
        gx = px(fx)
        out.append(f'<line x1="{gx:.1f}" y1="{_MARGIN_TOP + plot_h}" '
                   f'x2="{gx:.1f}" y2="{_MARGIN_TOP + plot_h + 5}" stroke="#444"/>')
        out.append(f'<text x="{gx:.1f}" y="{_MARGIN_TOP + plot_h + 18}" '
                   f'text-anchor="middle" font-family="sans-serif" '
                   f'font-size="11">{_fmt(fx)}</text>')
        fy = y_min + (y_max - y_min) * t / ticks
        gy = py(fy)
        out.append(f'<line x1="{_MARGIN_LEFT - 5}" y1="{gy:.1f}" '
                   f'x2="{_MARGIN_LEFT}" y2="{gy:.1f}" stroke="#444"/>')
        out.append(f'<text x="{_MARGIN_LEFT - 8}" y="{gy + 4:.1f}" '
                   f'text-anchor="end" font-family="sans-serif" '
                   f'font-size="11">{_fmt(fy)}</text>')
    if x_label:
        out.append(f'<text x="{_MARGIN_LEFT + plot_w / 2:.1f}" '
                   f'y="{height - 12}" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="13">{x_label}</text>')
    if y_label:
        cy = _MARGIN_TOP + plot_h / 2
        out.append(f'<text x="16" y="{cy:.1f}" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="13" '
                   f'transform="rotate(-90 16 {cy:.1f})">{y_label}</text>')

    # data
    for idx, s in enumerate(series):
        color = s.color or _PALETTE[idx % len(_PALETTE)]
        if s.mode == "line":
            pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in s.points)
            out.append(f'<polyline points="{pts}" fill="none" '
                       f'stroke="{color}" stroke-width="1.5"/>')
        else:
            for x, y in s.points:
                out.append(f'<circle cx="{px(x):.2f}" cy="{py(y):.2f}" '
                           f'r="3" fill="{color}"/>')

    # legend
    for idx, s in enumerate(series):
        color = s.color or _PALETTE[idx % len(_PALETTE)]
        ly = _MARGIN_TOP + 14 + 16 * idx
        lx = width - _MARGIN_RIGHT - 150
        out.append(f'<rect x="{lx}" y="{ly - 9}" width="10" height="10" '
                   f'fill="{color}"/>')
        out.append(f'<text x="{lx + 15}" y="{ly}" font-family="sans-serif" '
                   f'font-size="12">{s.name}</text>')

    out.append("</svg>")
    return "\n".join(out) + "\n"
