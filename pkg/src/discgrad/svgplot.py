"""Minimal dependency-free SVG line plots.

Best-effort sugar over the CSV outputs; nothing downstream depends on these
files, so any failure here is swallowed by callers.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")

_W, _H = 640, 400
_ML, _MR, _MT, _MB = 60, 20, 40, 50


def line_plot(path: str | Path, series: dict[str, tuple[np.ndarray, np.ndarray]],
              title: str = "", xlabel: str = "", ylabel: str = ""):
    """Write a polyline plot of the given named (x, y) series."""
    try:
        _render(Path(path), series, title, xlabel, ylabel)
    except Exception:
        pass  # plots are optional; CSVs carry the data


def _render(path: Path, series, title, xlabel, ylabel):
    xs = np.concatenate([np.asarray(x, dtype=float) for x, _ in series.values()])
    ys = np.concatenate([np.asarray(y, dtype=float) for _, y in series.values()])
    ys = ys[np.isfinite(ys)]
    if xs.size == 0 or ys.size == 0:
        return
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad
    pw, ph = _W - _ML - _MR, _H - _MT - _MB

    def px(x):
        return _ML + (x - x0) / (x1 - x0) * pw

    def py(y):
        return _MT + (1.0 - (y - y0) / (y1 - y0)) * ph

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="12">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<rect x="{_ML}" y="{_MT}" width="{pw}" height="{ph}" fill="none" stroke="#888"/>',
        f'<text x="{_W / 2}" y="20" text-anchor="middle" font-size="14">{title}</text>',
        f'<text x="{_ML + pw / 2}" y="{_H - 12}" text-anchor="middle">{xlabel}</text>',
        f'<text x="16" y="{_MT + ph / 2}" text-anchor="middle" '
        f'transform="rotate(-90 16 {_MT + ph / 2})">{ylabel}</text>',
    ]
    for frac in (0.0, 0.5, 1.0):
        xv = x0 + frac * (x1 - x0)
        yv = y0 + frac * (y1 - y0)
        parts.append(f'<text x="{px(xv):.1f}" y="{_MT + ph + 16}" text-anchor="middle">'
                     f'{xv:.4g}</text>')
        parts.append(f'<text x="{_ML - 6}" y="{py(yv):.1f}" text-anchor="end" '
                     f'dominant-baseline="middle">{yv:.4g}</text>')
    for idx, (name, (x, y)) in enumerate(series.items()):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        color = _COLORS[idx % len(_COLORS)]
        step = max(1, x.size // 2000)  # cap path size for long traces
        pts = " ".join(f"{px(a):.1f},{py(b):.1f}"
                       for a, b in zip(x[::step], y[::step]) if np.isfinite(b))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        parts.append(f'<text x="{_ML + pw - 6}" y="{_MT + 16 + 14 * idx}" text-anchor="end" '
                     f'fill="{color}">{name}</text>')
    parts.append("</svg>")
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(parts) + "\n")
