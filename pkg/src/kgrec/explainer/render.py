"""Markdown table, SVG radar chart and plain-text renderings of a report."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape, quoteattr

from .report import ExplanationReport

FORMATS = ("table", "radar", "text")

SIZE = 400
CENTER = SIZE / 2
RADIUS = 150.0
GRID = (0.25, 0.5, 0.75, 1.0)


def percent(score: float) -> int:
    """Whole percent, truncated; the epsilon absorbs binary round-off such as 0.29 * 100."""
    return max(0, min(100, int(math.floor(score * 100.0 + 1e-9))))


def _article(n: int) -> str:
    return "an" if n in (8, 11, 18) or 80 <= n <= 89 else "a"


def _label(term) -> str:
    return term.local_name if term.is_iri else term.value


def render_table(r: ExplanationReport) -> str:
    rows = ["| Feature | Match |", "|:---|---:|"]
    rows += [f"| {m.feature} | {percent(m.score)}% |" for m in r.matches]
    rows.append(f"| Global score | {percent(r.global_score)}% |")
    return "\n".join(rows) + "\n"


def _point(i: int, n: int, radius: float):
    angle = -math.pi / 2 + 2 * math.pi * i / n
    return CENTER + radius * math.cos(angle), CENTER + radius * math.sin(angle)


def render_radar(r: ExplanationReport) -> str:
    n = len(r.matches)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
        f"<title>{escape(_label(r.item))} vs {escape(_label(r.user))}: {percent(r.global_score)}%</title>",
        '<g class="grid" fill="none" stroke="#cccccc">',
    ]
    for level in GRID:
        out.append(f'<circle cx="{CENTER:.1f}" cy="{CENTER:.1f}" r="{RADIUS * level:.1f}"/>')
    for i in range(n):
        x, y = _point(i, n, RADIUS)
        out.append(f'<line x1="{CENTER:.1f}" y1="{CENTER:.1f}" x2="{x:.3f}" y2="{y:.3f}"/>')
    out.append("</g>")
    pts = " ".join("%.3f,%.3f" % _point(i, n, RADIUS * m.score) for i, m in enumerate(r.matches))
    out.append(
        f'<polygon class="scores" points="{pts}" fill="#3366cc" fill-opacity="0.35" '
        f'stroke="#3366cc" data-global="{percent(r.global_score)}"/>'
    )
    for i, m in enumerate(r.matches):
        x, y = _point(i, n, RADIUS + 18)
        anchor = "middle" if abs(x - CENTER) < 1 else ("start" if x > CENTER else "end")
        out.append(
            f'<text x="{x:.3f}" y="{y:.3f}" text-anchor="{anchor}" font-size="12" '
            f'data-score={quoteattr(str(percent(m.score)))}>{escape(m.feature)} {percent(m.score)}%</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_text(r: ExplanationReport) -> str:
    parts = ", ".join(f"{m.feature.lower()} {percent(m.score)} %" for m in r.matches)
    g = percent(r.global_score)
    noun = "feature" if len(r.matches) == 1 else "features"
    return (
        f"{_label(r.item)} compared with the stated preferences of {_label(r.user)}: {parts}. "
        f"Averaged over {len(r.matches)} {noun} this is {_article(g)} {g} % global match.\n"
    )


def render_report(r: ExplanationReport, fmt: str) -> str:
    if fmt == "table":
        return render_table(r)
    if fmt == "radar":
        return render_radar(r)
    if fmt == "text":
        return render_text(r)
    raise ValueError(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")
