"""Marching-squares iso-lines of a grid field and a plain SVG renderer."""

from __future__ import annotations

import numpy as np

from .grid import ScalarField

# Corner bits: 1 = (i, j), 2 = (i+1, j), 4 = (i+1, j+1), 8 = (i, j+1).
# Edges: "b" bottom, "r" right, "t" top, "l" left.
_CASES = {
    0: (), 15: (),
    1: (("l", "b"),), 14: (("l", "b"),),
    2: (("b", "r"),), 13: (("b", "r"),),
    3: (("l", "r"),), 12: (("l", "r"),),
    4: (("r", "t"),), 11: (("r", "t"),),
    6: (("b", "t"),), 9: (("b", "t"),),
    7: (("l", "t"),), 8: (("l", "t"),),
}
# Saddles, keyed by (case, centre above level).
_SADDLES = {
    (5, True): (("l", "t"), ("b", "r")),
    (5, False): (("l", "b"), ("r", "t")),
    (10, True): (("l", "b"), ("r", "t")),
    (10, False): (("l", "t"), ("b", "r")),
}


def _edge_key(i: int, j: int, edge: str) -> tuple[str, int, int]:
    """Canonical id: ``("h", i, j)`` joins (i,j)-(i+1,j); ``("v", i, j)`` joins (i,j)-(i,j+1)."""
    if edge == "b":
        return ("h", i, j)
    if edge == "t":
        return ("h", i, j + 1)
    if edge == "l":
        return ("v", i, j)
    return ("v", i + 1, j)


def _edge_point(key, v: np.ndarray, dx: float, dy: float, level: float) -> tuple[float, float]:
    kind, i, j = key
    a = v[i, j]
    b = v[i + 1, j] if kind == "h" else v[i, j + 1]
    t = (level - a) / (b - a)
    if kind == "h":
        return ((i + t) * dx, j * dy)
    return (i * dx, (j + t) * dy)


def contour_segments(field: ScalarField, level: float) -> list[tuple[tuple[float, float], tuple[float, float]]]:
    """Line segments of the ``level`` iso-line in physical coordinates.

    A corner counts as "above" when its value exceeds ``level``. Saddle cells
    are split according to whether the cell average exceeds ``level``.
    """
    segs = _edge_segments(field.values, level)
    g = field.grid
    return [(_edge_point(a, field.values, g.dx, g.dy, level), _edge_point(b, field.values, g.dx, g.dy, level)) for a, b in segs]


def _edge_segments(v: np.ndarray, level: float):
    above = v > level
    m, n = v.shape
    out = []
    for j in range(n - 1):
        for i in range(m - 1):
            case = int(above[i, j]) | int(above[i + 1, j]) << 1 | int(above[i + 1, j + 1]) << 2 | int(above[i, j + 1]) << 3
            if case in (5, 10):
                centre = 0.25 * (v[i, j] + v[i + 1, j] + v[i + 1, j + 1] + v[i, j + 1]) > level
                pairs = _SADDLES[(case, bool(centre))]
            else:
                pairs = _CASES[case]
            for e1, e2 in pairs:
                out.append((_edge_key(i, j, e1), _edge_key(i, j, e2)))
    return out


def _chain(segs):
    """Join segments sharing edge ids into polylines (lists of edge ids)."""
    adj: dict = {}
    for k, (a, b) in enumerate(segs):
        adj.setdefault(a, []).append(k)
        adj.setdefault(b, []).append(k)
    used = [False] * len(segs)
    lines = []

    def walk(line, node):
        while True:
            nxt = [k for k in adj[node] if not used[k]]
            if not nxt:
                return
            k = nxt[0]
            used[k] = True
            a, b = segs[k]
            node = b if a == node else a
            line.append(node)

    for k, (a, b) in enumerate(segs):
        if used[k]:
            continue
        used[k] = True
        fwd = [a, b]
        walk(fwd, b)
        back = [a]
        walk(back, a)
        lines.append(back[::-1][:-1] + fwd)
    return lines


def contour_levels(field: ScalarField, count: int = 11) -> np.ndarray:
    lo, hi = float(field.values.min()), float(field.values.max())
    return np.linspace(lo, hi, count)


def render_svg(field: ScalarField, levels: int = 11, scale: float = 40.0, margin: float = 10.0) -> str:
    """SVG 1.1 document with one ``<g>`` of polylines per contour level."""
    g = field.grid
    v = field.values
    width = g.lx * scale + 2 * margin
    height = g.ly * scale + 2 * margin

    def px(pt):
        x, y = pt
        return f"{margin + x * scale:.3f},{margin + (g.ly - y) * scale:.3f}"

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.1f}" height="{height:.1f}" '
        f'viewBox="0 0 {width:.1f} {height:.1f}">',
        f'<rect x="{margin:.1f}" y="{margin:.1f}" width="{g.lx * scale:.1f}" height="{g.ly * scale:.1f}" '
        'fill="none" stroke="black" stroke-width="1"/>',
    ]
    values = contour_levels(field, levels)
    for k, level in enumerate(values):
        parts.append(f'<g class="contour" data-level="{level!r}" fill="none" stroke="blue" stroke-width="1">')
        for line in _chain(_edge_segments(v, level)):
            pts = " ".join(px(_edge_point(key, v, g.dx, g.dy, level)) for key in line)
            parts.append(f'<polyline points="{pts}"/>')
        parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
