"""Minimal deterministic SVG line plots.

Each series becomes one ``<path class="series">``; the plot keeps an equal
aspect ratio and draws the coordinate axes. Every path carries its data
bounding box in a ``data-bbox`` attribute so that figures can be compared
structurally without parsing path geometry.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from .errors import DataError

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")
MAX_PATH_POINTS = 4000
PAD_FRACTION = 0.05


@dataclass(frozen=True)
class Series:
    points: np.ndarray
    label: str = ""
    color: str | None = None
    width: float = 1.2


@dataclass(frozen=True)
class SvgStructure:
    n_paths: int
    bbox: tuple[float, float, float, float]
    path_bboxes: tuple[tuple[float, float, float, float], ...]


def _bbox(pts: np.ndarray) -> tuple[float, float, float, float]:
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    return float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1])


def _fmt(x: float) -> str:
    return f"{x:.3f}".rstrip("0").rstrip(".") if x != 0 else "0"


def _thin(pts: np.ndarray) -> np.ndarray:
    if len(pts) <= MAX_PATH_POINTS:
        return pts
    idx = np.unique(np.linspace(0, len(pts) - 1, MAX_PATH_POINTS).round().astype(int))
    return pts[idx]


def _nice_step(span: float) -> float:
    raw = span / 5
    mag = 10 ** math.floor(math.log10(raw))
    for m in (1, 2, 5, 10):
        if m * mag >= raw:
            return m * mag
    return 10 * mag


def render_svg(series, size: int = 480, title: str = "", version: str = "") -> str:
    """Render point series ``(N, 2)`` (or :class:`Series`) to an SVG document.

    Raises
    ------
    DataError
        If there is nothing finite to draw.
    """
    items = [s if isinstance(s, Series) else Series(np.asarray(s, dtype=float)) for s in series]
    items = [Series(np.asarray(s.points, dtype=float)[np.all(np.isfinite(s.points), axis=1)], s.label, s.color, s.width) for s in items]
    items = [s for s in items if len(s.points) >= 2]
    if not items:
        raise DataError("no finite series with at least 2 points to plot")

    x0, y0, x1, y1 = _bbox(np.concatenate([s.points for s in items]))
    span = max(x1 - x0, y1 - y0) or 1.0
    cx, cy = (x0 + x1) / 2, (y0 + y1) / 2
    half = span * (0.5 + PAD_FRACTION)
    vx0, vx1, vy0, vy1 = cx - half, cx + half, cy - half, cy + half
    margin = 40
    scale = (size - 2 * margin) / (2 * half)

    def sx(x):
        return margin + (x - vx0) * scale

    def sy(y):
        return size - margin - (y - vy0) * scale

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f"<!-- ramplab {version} -->",
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}" data-bbox="{x0!r} {y0!r} {x1!r} {y1!r}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{size / 2:g}" y="20" text-anchor="middle" font-size="13">{escape(title)}</text>')

    # axes through the origin when it is in view, else along the frame
    ax_y = 0.0 if vy0 <= 0 <= vy1 else vy0
    ax_x = 0.0 if vx0 <= 0 <= vx1 else vx0
    out.append('<g class="axes" stroke="#888" stroke-width="0.8" font-size="9" fill="#444">')
    out.append(f'<line x1="{_fmt(sx(vx0))}" y1="{_fmt(sy(ax_y))}" x2="{_fmt(sx(vx1))}" y2="{_fmt(sy(ax_y))}"/>')
    out.append(f'<line x1="{_fmt(sx(ax_x))}" y1="{_fmt(sy(vy0))}" x2="{_fmt(sx(ax_x))}" y2="{_fmt(sy(vy1))}"/>')
    step = _nice_step(2 * half)
    for k in range(math.ceil(vx0 / step), math.floor(vx1 / step) + 1):
        x = k * step
        out.append(f'<line x1="{_fmt(sx(x))}" y1="{_fmt(sy(ax_y) - 3)}" x2="{_fmt(sx(x))}" y2="{_fmt(sy(ax_y) + 3)}"/>')
        out.append(f'<text x="{_fmt(sx(x))}" y="{_fmt(sy(ax_y) + 13)}" text-anchor="middle" stroke="none">{x:.4g}</text>')
    for k in range(math.ceil(vy0 / step), math.floor(vy1 / step) + 1):
        y = k * step
        out.append(f'<line x1="{_fmt(sx(ax_x) - 3)}" y1="{_fmt(sy(y))}" x2="{_fmt(sx(ax_x) + 3)}" y2="{_fmt(sy(y))}"/>')
        out.append(f'<text x="{_fmt(sx(ax_x) - 5)}" y="{_fmt(sy(y) + 3)}" text-anchor="end" stroke="none">{y:.4g}</text>')
    out.append("</g>")

    for i, s in enumerate(items):
        pts = _thin(s.points)
        d = "M" + " L".join(f"{_fmt(sx(x))} {_fmt(sy(y))}" for x, y in pts)
        bx = " ".join(repr(v) for v in _bbox(s.points))
        color = s.color or PALETTE[i % len(PALETTE)]
        label = f' data-label="{escape(s.label)}"' if s.label else ""
        out.append(
            f'<path class="series" d="{d}" fill="none" stroke="{color}" '
            f'stroke-width="{s.width:g}" data-bbox="{bx}"{label}/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


_BBOX_RE = re.compile(r'data-bbox="([^"]+)"')


def svg_structure(text: str) -> SvgStructure:
    """Path count and data bounding boxes of an SVG written by :func:`render_svg`."""
    root = re.search(r"<svg\b[^>]*>", text)
    if root is None or (m := _BBOX_RE.search(root.group(0))) is None:
        raise DataError("not a ramplab SVG (no data-bbox on the root element)")
    bbox = tuple(float(v) for v in m.group(1).split())
    paths = re.findall(r'<path class="series"[^>]*>', text)
    boxes = tuple(tuple(float(v) for v in _BBOX_RE.search(p).group(1).split()) for p in paths)
    return SvgStructure(len(paths), bbox, boxes)


def structurally_equal(a: SvgStructure, b: SvgStructure, rtol: float = 0.05) -> bool:
    """Same path count, and every bounding box agrees within ``rtol`` of the overall extent."""
    if a.n_paths != b.n_paths:
        return False
    ext = max(b.bbox[2] - b.bbox[0], b.bbox[3] - b.bbox[1]) or 1.0
    boxes = [(a.bbox, b.bbox)] + list(zip(a.path_bboxes, b.path_bboxes))
    return all(abs(u - w) <= rtol * ext for p, q in boxes for u, w in zip(p, q))
