"""Static SVG chart of the color-count bounds against the exact complexity."""

from __future__ import annotations

from xml.sax.saxutils import escape

from .bounds import lower_bound_uniform, upper_bound_colors
from .partition import SamplePartition
from .rademacher import exact_rademacher

WIDTH, HEIGHT = 640, 400
MARGIN = 56
MAX_POINTS = 200


def balanced_multiplicities(p: int, m: int) -> list[int]:
    q, r = divmod(m, p)
    return [q + 1] * r + [q] * (p - r)


def bound_curves(m: int) -> list[dict]:
    """Per p: upper bound, uniform lower bound (p | m only) and exact value of the balanced split."""
    if m <= MAX_POINTS:
        ps = list(range(1, m + 1))
    else:
        ps = sorted({max(1, round(m * k / (MAX_POINTS - 1))) for k in range(MAX_POINTS)})
    out = []
    for p in ps:
        part = SamplePartition.from_multiplicities(balanced_multiplicities(p, m))
        out.append(
            {
                "p": p,
                "upper": upper_bound_colors(p, m),
                "lower": lower_bound_uniform(p, m) if m % p == 0 else None,
                "exact": exact_rademacher(part).value,
            }
        )
    return out


def render_bound_svg(m: int, sample_p: int, sample_exact: float, title: str = "") -> str:
    curves = bound_curves(m)
    plot_w, plot_h = WIDTH - 2 * MARGIN, HEIGHT - 2 * MARGIN

    def x(p):
        return MARGIN + (0.5 if m == 1 else (p - 1) / (m - 1)) * plot_w

    def y(v):
        return HEIGHT - MARGIN - min(v, 1.0) * plot_h

    def polyline(points, color, dash=""):
        pts = " ".join(f"{x(p):.2f},{y(v):.2f}" for p, v in points)
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        return f'<polyline fill="none" stroke="{color}" stroke-width="1.5"{extra} points="{pts}"/>'

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<line x1="{MARGIN}" y1="{HEIGHT - MARGIN}" x2="{WIDTH - MARGIN}" y2="{HEIGHT - MARGIN}" stroke="black"/>',
        f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{HEIGHT - MARGIN}" stroke="black"/>',
    ]
    for v in (0.0, 0.25, 0.5, 0.75, 1.0):
        parts.append(f'<text x="{MARGIN - 8}" y="{y(v) + 4:.2f}" text-anchor="end">{v:g}</text>')
    parts.append(f'<text x="{MARGIN}" y="{HEIGHT - MARGIN + 18}" text-anchor="middle">1</text>')
    parts.append(f'<text x="{WIDTH - MARGIN}" y="{HEIGHT - MARGIN + 18}" text-anchor="middle">{m}</text>')
    parts.append(
        f'<text x="{WIDTH / 2:.0f}" y="{HEIGHT - 12}" text-anchor="middle">number of classes p (m = {m})</text>'
    )
    if title:
        parts.append(f'<text x="{WIDTH / 2:.0f}" y="24" text-anchor="middle">{escape(title)}</text>')
    parts.append(polyline([(c["p"], c["upper"]) for c in curves], "#c0392b"))
    parts.append(polyline([(c["p"], c["exact"]) for c in curves], "#2c3e50"))
    lower = [(c["p"], c["lower"]) for c in curves if c["lower"] is not None]
    if len(lower) > 1:
        parts.append(polyline(lower, "#2980b9", "4 3"))
    for p, v in lower:
        parts.append(f'<circle cx="{x(p):.2f}" cy="{y(v):.2f}" r="2" fill="#2980b9"/>')
    parts.append(
        f'<circle cx="{x(sample_p):.2f}" cy="{y(sample_exact):.2f}" r="5" fill="none" stroke="#27ae60" stroke-width="2"/>'
    )
    legend = [
        ("#c0392b", "upper sqrt(p/m)"),
        ("#2c3e50", "exact, balanced classes"),
        ("#2980b9", "lower sqrt(p/2m), p | m"),
        ("#27ae60", "this sample"),
    ]
    for k, (color, label) in enumerate(legend):
        ly = MARGIN + 14 * k
        parts.append(f'<rect x="{WIDTH - MARGIN - 170}" y="{ly - 8}" width="10" height="10" fill="{color}"/>')
        parts.append(f'<text x="{WIDTH - MARGIN - 154}" y="{ly + 1}">{escape(label)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
