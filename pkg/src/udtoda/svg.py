"""Plain SVG drawing of a tropical curve with marked points and cycles."""
from __future__ import annotations

from xml.sax.saxutils import escape

from . import __version__
from .curve import TropicalCurve

_CYCLE_COLORS = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


def curve_svg(c: TropicalCurve, marks: dict | None = None, cycles=None, size=480, margin=40) -> str:
    """Render ``c``; rays are drawn with a fixed length relative to the picture."""
    marks = marks or {}
    cycles = cycles or []
    pts = [(float(x), float(y)) for x, y in c.vertices] or [(0.0, 0.0)]
    xs, ys = [p[0] for p in pts], [p[1] for p in pts]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1.0)
    ray_len = 0.25 * span
    lo_x, hi_x = min(xs) - ray_len, max(xs) + ray_len
    lo_y, hi_y = min(ys) - ray_len, max(ys) + ray_len
    scale = (size - 2 * margin) / max(hi_x - lo_x, hi_y - lo_y)

    def tr(p):
        return (margin + (p[0] - lo_x) * scale, size - margin - (p[1] - lo_y) * scale)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f"<!-- udtoda {escape(__version__)} -->",
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    on_cycle = {}
    for ci, cyc in enumerate(cycles):
        for k in cyc:
            on_cycle.setdefault(k, ci)
    for k, e in enumerate(c.edges):
        (x1, y1), (x2, y2) = tr(pts[e.a]), tr(pts[e.b])
        color = _CYCLE_COLORS[on_cycle[k] % len(_CYCLE_COLORS)] if k in on_cycle else "black"
        out.append(f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
                   f'stroke="{color}" stroke-width="{1.5 * e.weight:.1f}"/>')
    for r in c.rays:
        p = pts[r.v]
        n = (r.xi[0] ** 2 + r.xi[1] ** 2) ** 0.5
        q = (p[0] + ray_len * r.xi[0] / n, p[1] + ray_len * r.xi[1] / n)
        (x1, y1), (x2, y2) = tr(p), tr(q)
        out.append(f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
                   f'stroke="gray" stroke-width="{1.5 * r.weight:.1f}" stroke-dasharray="4 3"/>')
    for ln in c.lines:
        p = (float(ln.point[0]), float(ln.point[1]))
        n = (ln.xi[0] ** 2 + ln.xi[1] ** 2) ** 0.5
        a = (p[0] - ray_len * ln.xi[0] / n, p[1] - ray_len * ln.xi[1] / n)
        b = (p[0] + ray_len * ln.xi[0] / n, p[1] + ray_len * ln.xi[1] / n)
        (x1, y1), (x2, y2) = tr(a), tr(b)
        out.append(f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
                   f'stroke="black" stroke-width="{1.5 * ln.weight:.1f}"/>')
    names = {}
    for name, v in marks.items():
        names.setdefault(v, []).append(name)
    for v, p in enumerate(pts):
        x, y = tr(p)
        fill = "black" if v in names else "white"
        out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3.5" fill="{fill}" stroke="black"/>')
        if v in names:
            label = escape(",".join(sorted(names[v])))
            out.append(f'<text x="{x + 5:.2f}" y="{y - 5:.2f}" font-family="sans-serif" font-size="12">{label}</text>')
    for ci in range(len(cycles)):
        color = _CYCLE_COLORS[ci % len(_CYCLE_COLORS)]
        out.append(f'<text x="{margin}" y="{margin / 2 + 14 * ci:.0f}" font-family="sans-serif" '
                   f'font-size="12" fill="{color}">gamma{ci + 1}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
