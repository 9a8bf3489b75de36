"""Minimal self-contained SVG emission for report plots.

Hand-rolled so the outputs carry no rendering dependency and stay
deterministic; presentation only, golden-file guarantees apply to CSV.
"""

from __future__ import annotations

import math

W, H = 640, 440
MARGIN = 60


def _ticks(lo: float, hi: float, n: int = 6) -> list:
    if hi <= lo:
        hi = lo + 1.0
    span = hi - lo
    step = 10 ** math.floor(math.log10(span / n))
    for mult in (1, 2, 5, 10):
        if span / (step * mult) <= n:
            step *= mult
            break
    first = math.ceil(lo / step) * step
    out = []
    t = first
    while t <= hi + 1e-12 * span:
        out.append(round(t, 12))
        t += step
    return out


def line_plot(path, series: dict, title: str, xlabel: str, ylabel: str,
              logy: bool = False):
    """Write a line plot; series maps label -> (xs, ys)."""
    xs_all = [x for xs, _ in series.values() for x in xs]
    ys_all = [y for _, ys in series.values() for y in ys if y > 0 or not logy]
    if not xs_all or not ys_all:
        xs_all, ys_all = [0, 1], [0, 1]
    ty = (lambda y: math.log10(y)) if logy else (lambda y: y)
    xlo, xhi = min(xs_all), max(xs_all)
    ylo, yhi = min(map(ty, ys_all)), max(map(ty, ys_all))
    if xhi == xlo:
        xhi = xlo + 1
    if yhi == ylo:
        yhi = ylo + 1

    def px(x):
        return MARGIN + (x - xlo) / (xhi - xlo) * (W - 2 * MARGIN)

    def py(y):
        return H - MARGIN - (ty(y) - ylo) / (yhi - ylo) * (H - 2 * MARGIN)

    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
        f'viewBox="0 0 {W} {H}">',
        f'<rect width="{W}" height="{H}" fill="white"/>',
        f'<text x="{W / 2:.1f}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="15">{title}</text>',
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{W - 2 * MARGIN}" '
        f'height="{H - 2 * MARGIN}" fill="none" stroke="#333"/>',
    ]
    for t in _ticks(xlo, xhi):
        x = px(t)
        parts.append(
            f'<line x1="{x:.1f}" y1="{H - MARGIN}" x2="{x:.1f}" '
            f'y2="{H - MARGIN + 5}" stroke="#333"/>'
            f'<text x="{x:.1f}" y="{H - MARGIN + 20}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{t:g}</text>'
        )
    for t in _ticks(ylo, yhi):
        y = H - MARGIN - (t - ylo) / (yhi - ylo) * (H - 2 * MARGIN)
        label = f"1e{t:g}" if logy else f"{t:g}"
        parts.append(
            f'<line x1="{MARGIN - 5}" y1="{y:.1f}" x2="{MARGIN}" '
            f'y2="{y:.1f}" stroke="#333"/>'
            f'<text x="{MARGIN - 8}" y="{y + 4:.1f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{label}</text>'
        )
    parts.append(
        f'<text x="{W / 2:.1f}" y="{H - 12}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">{xlabel}</text>'
        f'<text x="16" y="{H / 2:.1f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 16 {H / 2:.1f})">{ylabel}</text>'
    )
    for k, (label, (xs, ys)) in enumerate(series.items()):
        pts = " ".join(
            f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys)
            if not logy or y > 0
        )
        color = colors[k % len(colors)]
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" '
            f'stroke-width="1.5"/>'
        )
        parts.append(
            f'<text x="{W - MARGIN + 4}" y="{MARGIN + 16 * (k + 1)}" '
            f'font-family="sans-serif" font-size="11" fill="{color}" '
            f'text-anchor="end">{label}</text>'
        )
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts))


def curve_overlay(path, curve_groups: dict, title: str):
    """Plot families of closed curves; curve_groups maps label -> list of
    complex node arrays."""
    all_pts = [z for curves in curve_groups.values() for c in curves for z in c]
    if not all_pts:
        return
    xlo = min(z.real for z in all_pts)
    xhi = max(z.real for z in all_pts)
    ylo = min(z.imag for z in all_pts)
    yhi = max(z.imag for z in all_pts)
    span = max(xhi - xlo, yhi - ylo) or 1.0
    cx, cy = (xlo + xhi) / 2, (ylo + yhi) / 2
    half = span / 2 * 1.1

    def px(z):
        return MARGIN + (z.real - (cx - half)) / (2 * half) * (W - 2 * MARGIN)

    def py(z):
        return H - MARGIN - (z.imag - (cy - half)) / (2 * half) * (H - 2 * MARGIN)

    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
        f'viewBox="0 0 {W} {H}">',
        f'<rect width="{W}" height="{H}" fill="white"/>',
        f'<text x="{W / 2:.1f}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="15">{title}</text>',
    ]
    for k, (label, curves) in enumerate(curve_groups.items()):
        color = colors[k % len(colors)]
        for nodes in curves:
            pts = " ".join(f"{px(z):.2f},{py(z):.2f}" for z in nodes)
            first = nodes[0]
            parts.append(
                f'<polyline points="{pts} {px(first):.2f},{py(first):.2f}" '
                f'fill="none" stroke="{color}" stroke-width="1.2"/>'
            )
        parts.append(
            f'<text x="{W - MARGIN}" y="{MARGIN + 16 * (k + 1)}" '
            f'font-family="sans-serif" font-size="11" fill="{color}" '
            f'text-anchor="end">{label}</text>'
        )
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts))
