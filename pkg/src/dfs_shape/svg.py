"""Static SVG overlay of a normalized DFS profile on the limiting curve."""

from __future__ import annotations

import numpy as np

from .dfs import DfsTrace
from .numeric import LimitCurve, sample_curve

WIDTH, HEIGHT, MARGIN = 800, 400, 40
T_MAX, H_MAX = 2.0, 1.0
COLUMNS = 2000


def _to_px(t, h):
    px = MARGIN + (np.asarray(t) / T_MAX) * (WIDTH - 2 * MARGIN)
    py = HEIGHT - MARGIN - (np.asarray(h) / H_MAX) * (HEIGHT - 2 * MARGIN)
    return px, py


def _points(px, py) -> str:
    return " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px.tolist(), py.tolist()))


def decimate_profile(trace: DfsTrace, n_vertices: int, columns: int = COLUMNS) -> tuple[np.ndarray, np.ndarray]:
    """Max-pool X_n / N over ``columns`` equal bins of [0, T_MAX].

    Peaks survive decimation, which keeps the sup-distance visible.
    """
    t = np.arange(len(trace.x)) / n_vertices
    h = trace.x / n_vertices
    col = np.minimum((t / T_MAX * columns).astype(np.int64), columns - 1)
    starts = np.flatnonzero(np.r_[True, np.diff(col) != 0])
    pooled = np.maximum.reduceat(h, starts)
    centres = (col[starts] + 0.5) * T_MAX / columns
    return centres, pooled


def emit_svg(trace: DfsTrace | None, curve: LimitCurve, n_vertices: int, path) -> None:
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    x0, y0 = _to_px(0.0, 0.0)
    x1, y1 = _to_px(T_MAX, H_MAX)
    parts.append(f'<g id="axes" stroke="black" stroke-width="1">')
    parts.append(f'<line x1="{x0:.2f}" y1="{y0:.2f}" x2="{x1:.2f}" y2="{y0:.2f}"/>')
    parts.append(f'<line x1="{x0:.2f}" y1="{y0:.2f}" x2="{x0:.2f}" y2="{y1:.2f}"/>')
    for tick in (0.5, 1.0, 1.5, 2.0):
        tx, _ = _to_px(tick, 0.0)
        parts.append(f'<line x1="{tx:.2f}" y1="{y0:.2f}" x2="{tx:.2f}" y2="{y0 + 5:.2f}"/>')
        parts.append(f'<text x="{tx:.2f}" y="{y0 + 18:.2f}" font-size="11" text-anchor="middle" stroke="none">{tick:g}</text>')
    for tick in (0.25, 0.5, 0.75, 1.0):
        _, ty = _to_px(0.0, tick)
        parts.append(f'<line x1="{x0 - 5:.2f}" y1="{ty:.2f}" x2="{x0:.2f}" y2="{ty:.2f}"/>')
        parts.append(f'<text x="{x0 - 8:.2f}" y="{ty + 4:.2f}" font-size="11" text-anchor="end" stroke="none">{tick:g}</text>')
    parts.append("</g>")

    if trace is not None and len(trace.x) > 1:
        t, h = decimate_profile(trace, n_vertices)
        px, py = _to_px(t, np.maximum(h, 0.0))
        parts.append(f'<polyline id="profile" fill="none" stroke="blue" stroke-width="1" points="{_points(px, py)}"/>')

    t, h = sample_curve(curve, 2000)
    px, py = _to_px(t, h)
    parts.append(f'<polyline id="limit" fill="none" stroke="red" stroke-width="1.5" points="{_points(px, py)}"/>')
    parts.append(
        f'<text x="{WIDTH - MARGIN:.0f}" y="{MARGIN - 12:.0f}" font-size="12" text-anchor="end">'
        f"c = {curve.c:g}, N = {n_vertices}</text>"
    )
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")
