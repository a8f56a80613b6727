"""Hand-written SVG figures, rendered from CSV text alone.

Output is a pure function of the CSV, so a figure can always be regenerated
from its sibling data file and diffed byte-for-byte.
"""
from __future__ import annotations

import csv
import io
import math

W, H = 640, 480
LEFT, RIGHT, TOP, BOTTOM = 70, 20, 30, 50


def _rows(csv_text):
    return list(csv.DictReader(io.StringIO(csv_text)))


def _fmt(v):
    return f"{v:.2f}"


def _ticks(lo, hi, count=5):
    if hi == lo:
        return [lo]
    return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


def _frame(title, xlabel, ylabel, xlim, ylim):
    x0, x1 = xlim
    y0, y1 = ylim
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
           f'viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">',
           f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
           f'<text x="{W / 2}" y="18" text-anchor="middle" font-size="13">{title}</text>',
           f'<rect x="{LEFT}" y="{TOP}" width="{W - LEFT - RIGHT}" height="{H - TOP - BOTTOM}" '
           f'fill="none" stroke="black"/>']
    for t in _ticks(x0, x1):
        px = _px(t, xlim)
        out.append(f'<text x="{_fmt(px)}" y="{H - BOTTOM + 15}" text-anchor="middle">{t:.3g}</text>')
    for t in _ticks(y0, y1):
        py = _py(t, ylim)
        out.append(f'<text x="{LEFT - 6}" y="{_fmt(py + 4)}" text-anchor="end">{t:.3g}</text>')
    out.append(f'<text x="{W / 2}" y="{H - 12}" text-anchor="middle">{xlabel}</text>')
    out.append(f'<text x="16" y="{H / 2}" text-anchor="middle" '
               f'transform="rotate(-90 16 {H / 2})">{ylabel}</text>')
    return out


def _px(x, xlim):
    x0, x1 = xlim
    span = (x1 - x0) or 1.0
    return LEFT + (x - x0) / span * (W - LEFT - RIGHT)


def _py(y, ylim):
    y0, y1 = ylim
    span = (y1 - y0) or 1.0
    return H - BOTTOM - (y - y0) / span * (H - TOP - BOTTOM)


def _limits(vals):
    lo, hi = min(vals), max(vals)
    if hi == lo:
        lo, hi = lo - 0.5, hi + 0.5
    pad = 0.03 * (hi - lo)
    return lo - pad, hi + pad


def portrait_svg(csv_text: str, title="phase portrait") -> str:
    """Scatter of (q, p) with columns orbit, k, q, p."""
    rows = _rows(csv_text)
    qs = [float(r["q"]) for r in rows]
    ps = [float(r["p"]) for r in rows]
    xlim = (0.0, 1.0)
    ylim = _limits(ps) if ps else (0.0, 1.0)
    out = _frame(title, "q", "p", xlim, ylim)
    out.append('<g fill="#1f4e9c">')
    for q, p in zip(qs, ps):
        out.append(f'<circle cx="{_fmt(_px(q, xlim))}" cy="{_fmt(_py(p, ylim))}" r="0.8"/>')
    out.append("</g></svg>")
    return "\n".join(out) + "\n"


def scan_svg(csv_text: str, title="family scan") -> str:
    """eps against log10 sup|delta2|; accepted members drawn as filled dots."""
    rows = [r for r in _rows(csv_text) if r["sup_delta2"] not in ("nan", "")]
    eps = [float(r["eps"]) for r in rows]
    logs = [math.log10(max(float(r["sup_delta2"]), 1e-300)) for r in rows]
    logs = [max(v, -17.0) for v in logs]
    xlim = _limits(eps) if eps else (0.0, 1.0)
    ylim = _limits(logs) if logs else (-17.0, 0.0)
    out = _frame(title, "eps", "log10 sup |delta2|", xlim, ylim)
    if rows:
        pts = " ".join(f"{_fmt(_px(e, xlim))},{_fmt(_py(v, ylim))}" for e, v in zip(eps, logs))
        out.append(f'<polyline points="{pts}" fill="none" stroke="#444"/>')
    for r, e, v in zip(rows, eps, logs):
        fill = "#1a8a3a" if r["accepted"] == "true" else "white"
        out.append(f'<circle cx="{_fmt(_px(e, xlim))}" cy="{_fmt(_py(v, ylim))}" r="3.5" '
                   f'fill="{fill}" stroke="#1a8a3a"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
