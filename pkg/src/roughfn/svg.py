"""Minimal self-contained SVG line plots (800 x 600, inline polylines)."""

from __future__ import annotations

from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 800, 600
MARGIN = 50


def line_plot(series, title: str = "", points=None) -> str:
    """SVG text for ``series`` = [(x, y, color, label), ...].

    ``points`` is an optional (x, y, color) scatter drawn as small circles.
    """
    xs = [np.asarray(s[0], dtype=float) for s in series]
    ys = [np.asarray(s[1], dtype=float) for s in series]
    if points is not None:
        xs.append(np.asarray(points[0], dtype=float))
        ys.append(np.asarray(points[1], dtype=float))
    x_lo, x_hi = min(float(v.min()) for v in xs), max(float(v.max()) for v in xs)
    y_lo, y_hi = min(float(v.min()) for v in ys), max(float(v.max()) for v in ys)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
    pad = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    def px(x):
        return MARGIN + (x - x_lo) / (x_hi - x_lo) * (WIDTH - 2 * MARGIN)

    def py(y):
        return HEIGHT - MARGIN - (y - y_lo) / (y_hi - y_lo) * (HEIGHT - 2 * MARGIN)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
           f'viewBox="0 0 {WIDTH} {HEIGHT}">',
           f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
           f'<rect x="{MARGIN}" y="{MARGIN}" width="{WIDTH - 2 * MARGIN}" '
           f'height="{HEIGHT - 2 * MARGIN}" fill="none" stroke="#888"/>']
    if title:
        out.append(f'<text x="{WIDTH / 2}" y="{MARGIN / 2 + 5}" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="16">{escape(title)}</text>')
    for i, (x, y, color, label) in enumerate(series):
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x, y))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{pts}"/>')
        out.append(f'<text x="{WIDTH - MARGIN - 5}" y="{MARGIN + 18 * (i + 1)}" text-anchor="end" '
                   f'font-family="sans-serif" font-size="13" fill="{color}">{escape(label)}</text>')
    if points is not None:
        color = points[2] if len(points) > 2 else "blue"
        for a, b in zip(points[0], points[1]):
            out.append(f'<circle cx="{px(a):.2f}" cy="{py(b):.2f}" r="3" fill="{color}"/>')
    for v, anchor_x in ((x_lo, MARGIN), (x_hi, WIDTH - MARGIN)):
        out.append(f'<text x="{anchor_x}" y="{HEIGHT - MARGIN + 18}" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="12">{v:.3g}</text>')
    for v in (y_lo + pad, y_hi - pad):
        out.append(f'<text x="{MARGIN - 5}" y="{py(v) + 4:.2f}" text-anchor="end" '
                   f'font-family="sans-serif" font-size="12">{v:.3g}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_plot(path, series, title: str = "", points=None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(line_plot(series, title, points))
    return path
