"""Static SVG figures: stacked-area sweep plot and [0,1]^2 scatter plot."""

from __future__ import annotations

from xml.sax.saxutils import escape

from .breakdown import Region, SweepSeries
from .correlation import CorrelationReport

WIDTH, HEIGHT = 480, 360
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 56, 150, 20, 44

# bottom-to-top stacking order
STACK = (
    Region.CORRECT_WITHOUT_REWRITING,
    Region.CORRECT_WITH_REWRITING,
    Region.QR_ERROR,
    Region.QA_ERROR,
)
COLORS = {
    Region.CORRECT_WITHOUT_REWRITING: "#f4a6c0",
    Region.CORRECT_WITH_REWRITING: "#b7e4a1",
    Region.QR_ERROR: "#f5a54a",
    Region.QA_ERROR: "#5b8fd6",
}


def _x(v: float) -> float:
    return MARGIN_L + v * (WIDTH - MARGIN_L - MARGIN_R)


def _y(v: float) -> float:
    return HEIGHT - MARGIN_B - v * (HEIGHT - MARGIN_T - MARGIN_B)


def _header(title: str) -> list[str]:
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f"<title>{escape(title)}</title>",
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]


def _axes(xlabel: str, ylabel: str) -> list[str]:
    x0, x1, y0, y1 = _x(0), _x(1), _y(0), _y(1)
    out = [
        '<g id="axes" stroke="black" stroke-width="1" fill="none">',
        f'<polyline points="{x0:.2f},{y1:.2f} {x0:.2f},{y0:.2f} {x1:.2f},{y0:.2f}"/>',
        "</g>",
        '<g id="ticks" font-family="sans-serif" font-size="10" fill="black">',
    ]
    for i in range(6):
        v = i / 5
        out.append(
            f'<text x="{_x(v):.2f}" y="{y0 + 14:.2f}" text-anchor="middle">{v:.1f}</text>'
        )
        out.append(
            f'<text x="{x0 - 6:.2f}" y="{_y(v) + 3:.2f}" text-anchor="end">{v:.1f}</text>'
        )
    out.append("</g>")
    out.append(
        f'<text x="{(x0 + x1) / 2:.2f}" y="{HEIGHT - 8}" font-family="sans-serif" '
        f'font-size="12" text-anchor="middle">{escape(xlabel)}</text>'
    )
    cy = (y0 + y1) / 2
    out.append(
        f'<text x="14" y="{cy:.2f}" font-family="sans-serif" font-size="12" '
        f'text-anchor="middle" transform="rotate(-90 14 {cy:.2f})">{escape(ylabel)}</text>'
    )
    return out


def stacked_area_svg(series: SweepSeries) -> str:
    ts = series.thresholds
    lower = [0.0] * len(ts)
    parts = _header(f"threshold sweep over {series.metric}")
    parts.append('<g id="regions" stroke="none">')
    for region in STACK:
        upper = [lo + p[region] for lo, p in zip(lower, series.proportions)]
        pts = [f"{_x(t):.2f},{_y(min(u, 1.0)):.2f}" for t, u in zip(ts, upper)]
        pts += [f"{_x(t):.2f},{_y(lo):.2f}" for t, lo in reversed(list(zip(ts, lower)))]
        parts.append(
            f'<path id="region-{region.value}" fill="{COLORS[region]}" '
            f'd="M {" L ".join(pts)} Z"/>'
        )
        lower = upper
    parts.append("</g>")
    parts += _axes(f"{series.metric} threshold", "proportion of samples")
    parts.append('<g id="legend" font-family="sans-serif" font-size="10">')
    for i, region in enumerate(reversed(STACK)):
        y = MARGIN_T + 10 + i * 18
        lx = WIDTH - MARGIN_R + 12
        parts.append(
            f'<rect x="{lx}" y="{y - 8}" width="10" height="10" fill="{COLORS[region]}"/>'
        )
        parts.append(f'<text x="{lx + 14}" y="{y}">{region.value}</text>')
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def scatter_svg(report: CorrelationReport) -> str:
    parts = _header(
        f"{report.qr_metric} vs {report.qa_metric} (Pearson {report.pearson_r:.2f}, n={report.n})"
    )
    parts += _axes(report.qr_metric, report.qa_metric)
    parts.append('<g id="points" fill="#5b8fd6" fill-opacity="0.5" stroke="none">')
    for s in report.series:
        parts.append(
            f'<circle cx="{_x(s.qr_similarity):.2f}" cy="{_y(s.qa_score):.2f}" r="3">'
            f"<title>{escape(s.qid)}</title></circle>"
        )
    parts.append("</g>")
    parts.append(
        f'<text id="pearson" x="{WIDTH - MARGIN_R + 12}" y="{MARGIN_T + 10}" '
        f'font-family="sans-serif" font-size="11">r = {report.pearson_r:.4f}</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
