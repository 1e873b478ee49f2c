"""Static SVG charts for fit results: bar chart, ternary plot, heatmap.

Hand-rolled SVG with fixed-precision coordinates so identical inputs
yield byte-identical files.
"""

from __future__ import annotations

import math

import numpy as np

_FONT = 'font-family="Helvetica, Arial, sans-serif"'


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def bar_chart_svg(values, labels, title: str, y_label: str) -> str:
    """Vertical bars for per-node probabilities in [0, 1]."""
    values = [float(v) for v in values]
    labels = [str(s) for s in labels]
    ml, mr, mt, mb = 52, 16, 44, 40
    cw, ch = max(380, 22 * len(values)), 260
    width, height = ml + cw + mr, mt + ch + mb
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width} {height}" {_FONT}>',
        f'  <rect width="{width}" height="{height}" fill="#ffffff"/>',
        f'  <text x="{_fmt(width / 2)}" y="22" text-anchor="middle" font-size="15" fill="#222">{title}</text>',
    ]
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        y = mt + ch - frac * ch
        dash = ' stroke-dasharray="4 3"' if frac == 0.5 else ""
        out.append(
            f'  <line x1="{ml}" y1="{_fmt(y)}" x2="{ml + cw}" y2="{_fmt(y)}" '
            f'stroke="#d8d8d8" stroke-width="1"{dash}/>'
        )
        out.append(
            f'  <text x="{ml - 6}" y="{_fmt(y + 4)}" text-anchor="end" font-size="11" '
            f'fill="#555">{frac:g}</text>'
        )
    slot = cw / max(1, len(values))
    bar = 0.7 * slot
    for i, (v, name) in enumerate(zip(values, labels)):
        x = ml + i * slot + (slot - bar) / 2
        h = max(0.0, min(1.0, v)) * ch
        y = mt + ch - h
        out.append(
            f'  <rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(bar)}" '
            f'height="{_fmt(h)}" fill="#4a7fd9"/>'
        )
        out.append(
            f'  <text x="{_fmt(x + bar / 2)}" y="{mt + ch + 16}" text-anchor="middle" '
            f'font-size="11" fill="#222">{name}</text>'
        )
    out.append(
        f'  <text x="14" y="{_fmt(mt + ch / 2)}" text-anchor="middle" font-size="12" '
        f'fill="#555" transform="rotate(-90, 14, {_fmt(mt + ch / 2)})">{y_label}</text>'
    )
    out.append(
        f'  <line x1="{ml}" y1="{mt}" x2="{ml}" y2="{mt + ch}" stroke="#333" stroke-width="1"/>'
    )
    out.append(
        f'  <line x1="{ml}" y1="{mt + ch}" x2="{ml + cw}" y2="{mt + ch}" stroke="#333" stroke-width="1"/>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def ternary_svg(points, labels, title: str, corner_labels=("cluster 0", "cluster 1", "cluster 2")) -> str:
    """Scatter of 3-way categorical distributions inside a triangle.

    Each row of points is a distribution (p0, p1, p2); corner c is where
    all mass sits on cluster c.
    """
    P = np.asarray(points, dtype=float)
    if P.ndim != 2 or P.shape[1] != 3:
        raise ValueError(f"ternary plot needs n x 3 distributions, got {P.shape}")
    side = 420.0
    mt, mb, mx = 56, 36, 60
    tri_h = side * math.sqrt(3) / 2
    width, height = int(mx * 2 + side), int(mt + tri_h + mb)
    # corners: cluster 0 bottom-left, 1 bottom-right, 2 top
    c0 = (mx, mt + tri_h)
    c1 = (mx + side, mt + tri_h)
    c2 = (mx + side / 2, mt)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width} {height}" {_FONT}>',
        f'  <rect width="{width}" height="{height}" fill="#ffffff"/>',
        f'  <text x="{_fmt(width / 2)}" y="24" text-anchor="middle" font-size="15" fill="#222">{title}</text>',
        f'  <polygon points="{_fmt(c0[0])},{_fmt(c0[1])} {_fmt(c1[0])},{_fmt(c1[1])} '
        f'{_fmt(c2[0])},{_fmt(c2[1])}" fill="none" stroke="#333" stroke-width="1"/>',
        f'  <text x="{_fmt(c0[0] - 6)}" y="{_fmt(c0[1] + 18)}" text-anchor="start" font-size="12" fill="#555">{corner_labels[0]}</text>',
        f'  <text x="{_fmt(c1[0] + 6)}" y="{_fmt(c1[1] + 18)}" text-anchor="end" font-size="12" fill="#555">{corner_labels[1]}</text>',
        f'  <text x="{_fmt(c2[0])}" y="{_fmt(c2[1] - 8)}" text-anchor="middle" font-size="12" fill="#555">{corner_labels[2]}</text>',
    ]
    for frac in (0.25, 0.5, 0.75):
        for a, b, c in ((c0, c1, c2), (c1, c2, c0), (c2, c0, c1)):
            x1 = a[0] + frac * (b[0] - a[0])
            y1 = a[1] + frac * (b[1] - a[1])
            x2 = a[0] + frac * (c[0] - a[0])
            y2 = a[1] + frac * (c[1] - a[1])
            out.append(
                f'  <line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
                f'stroke="#e4e4e4" stroke-width="1"/>'
            )
    for row, name in zip(P, labels):
        x = row[0] * c0[0] + row[1] * c1[0] + row[2] * c2[0]
        y = row[0] * c0[1] + row[1] * c1[1] + row[2] * c2[1]
        out.append(f'  <circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="3" fill="#4a7fd9"/>')
        out.append(
            f'  <text x="{_fmt(x + 5)}" y="{_fmt(y - 4)}" font-size="10" fill="#222">{name}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def heatmap_svg(matrix, row_labels, col_labels, title: str) -> str:
    """Grid heatmap of values in [0, 1], white to blue."""
    M = np.asarray(matrix, dtype=float)
    rows, cols = M.shape
    cell, ml, mt = 22, 64, 56
    width = ml + cols * cell + 20
    height = mt + rows * cell + 20
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width} {height}" {_FONT}>',
        f'  <rect width="{width}" height="{height}" fill="#ffffff"/>',
        f'  <text x="{_fmt(width / 2)}" y="22" text-anchor="middle" font-size="15" fill="#222">{title}</text>',
    ]
    for j, name in enumerate(col_labels):
        out.append(
            f'  <text x="{_fmt(ml + (j + 0.5) * cell)}" y="{mt - 8}" text-anchor="middle" '
            f'font-size="11" fill="#222">{name}</text>'
        )
    for i in range(rows):
        out.append(
            f'  <text x="{ml - 6}" y="{_fmt(mt + (i + 0.72) * cell)}" text-anchor="end" '
            f'font-size="11" fill="#222">{row_labels[i]}</text>'
        )
        for j in range(cols):
            v = max(0.0, min(1.0, float(M[i, j])))
            r = round(255 - 181 * v)
            g = round(255 - 128 * v)
            b = round(255 - 38 * v)
            out.append(
                f'  <rect x="{_fmt(ml + j * cell)}" y="{_fmt(mt + i * cell)}" '
                f'width="{cell}" height="{cell}" fill="#{r:02x}{g:02x}{b:02x}" '
                f'stroke="#cccccc" stroke-width="0.5"/>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"
