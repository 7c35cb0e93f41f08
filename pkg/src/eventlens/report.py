"""Report tables and scatter plots.

Tables render to Markdown (cells tagged ``[G]``/``[O]``/``[R]`` by colour) or
plain CSV. Scatter plots are hand-written SVG 1.1; a company's full,
pre-event and post-event plots share one :class:`AxisSpec` so they can be
compared side by side.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Optional, Sequence
from xml.sax.saxutils import escape

from .correlation import (PRICE_TYPES, CorrelationMatrix, CorrelationReportTable,
                          Coefficient, classify)
from .model import CompanySeries, WindowLabel

TABLE_COLUMNS = PRICE_TYPES + ("Avg.",)
NA = "N/A"
_Q4 = Decimal("0.0001")


def format_coefficient(value: Coefficient) -> str:
    """Four decimals, ties rounded away from zero; ``None`` becomes ``N/A``."""
    if value is None:
        return NA
    d = Decimal(repr(float(value))).quantize(_Q4, rounding=ROUND_HALF_UP)
    if d == 0:
        d = abs(d)
    return f"{d:.4f}"


def _tagged(value: Coefficient) -> str:
    text = format_coefficient(value)
    if value is None:
        return text
    return f"{text} {classify(value).color.token}"


def render_table(table: CorrelationReportTable, fmt: str = "markdown") -> bytes:
    """Render one window's table with its Average row."""
    body = [(r.company, [r.cell(c) for c in TABLE_COLUMNS]) for r in table.rows]
    body.append(("Average", [table.average_row.cell(c) for c in TABLE_COLUMNS]))
    header = ["Company", *TABLE_COLUMNS]

    if fmt == "markdown":
        lines = [f"### {table.window.value}", "",
                 "| " + " | ".join(header) + " |",
                 "|" + "|".join(["---"] * len(header)) + "|"]
        for name, cells in body:
            lines.append("| " + " | ".join([name, *map(_tagged, cells)]) + " |")
        return ("\n".join(lines) + "\n").encode("utf-8")
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for name, cells in body:
            writer.writerow([name, *map(format_coefficient, cells)])
        return buf.getvalue().encode("utf-8")
    raise ValueError(f"unknown table format {fmt!r}")


def render_matrix(matrix: CorrelationMatrix) -> bytes:
    """Full pairwise matrix as CSV, 4 decimals, ``N/A`` for undefined cells."""
    lines = ["," + ",".join(matrix.columns)]
    for a in matrix.columns:
        lines.append(",".join([a, *(format_coefficient(matrix[a][b]) for b in matrix.columns)]))
    return ("\n".join(lines) + "\n").encode("utf-8")


# -- scatter plots ----------------------------------------------------------

Y_STEP = 25


@dataclass(frozen=True)
class AxisSpec:
    x_min: float = 0.0
    x_max: float = 100.0
    y_min: float = 0.0
    y_max: float = float(Y_STEP)

    @classmethod
    def for_series(cls, full: CompanySeries) -> "AxisSpec":
        """Y ceiling is the smallest multiple of 25 covering the highest close."""
        top = max(full.column("Close"), default=0.0)
        return cls(y_max=float(max(Y_STEP, Y_STEP * math.ceil(top / Y_STEP))))

    def y_ticks(self, max_ticks: int = 10) -> list[float]:
        step = Y_STEP * max(1, math.ceil(self.y_max / Y_STEP / max_ticks))
        ticks = []
        y = 0
        while y <= self.y_max:
            ticks.append(float(y))
            y += step
        return ticks


@dataclass(frozen=True)
class ScatterPlot:
    company: str
    window: WindowLabel
    points: tuple[tuple[float, float], ...]
    axes: AxisSpec

    @classmethod
    def from_series(cls, series: CompanySeries, window: WindowLabel,
                    axes: Optional[AxisSpec] = None) -> "ScatterPlot":
        axes = axes or AxisSpec.for_series(series)
        return cls(series.company, WindowLabel(window),
                   tuple(zip(series.column("Score"), series.column("Close"))), axes)


_W, _H = 480, 360
_LEFT, _RIGHT, _TOP, _BOTTOM = 64, 460, 44, 304
X_TICKS = (0, 25, 50, 75, 100)


def _n(x: float) -> str:
    return f"{x:.2f}"


def render_scatter(plot: ScatterPlot) -> bytes:
    """Score (x) against closing price (y) as an SVG document."""
    ax = plot.axes

    def px(score):
        return _LEFT + (score - ax.x_min) / (ax.x_max - ax.x_min) * (_RIGHT - _LEFT)

    def py(price):
        return _BOTTOM - (price - ax.y_min) / (ax.y_max - ax.y_min) * (_BOTTOM - _TOP)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>',
        f'<text id="title" x="{_W / 2:.2f}" y="24" text-anchor="middle" font-family="sans-serif" '
        f'font-size="15">{escape(plot.company)} — {plot.window.value}</text>',
        '<g id="axes" stroke="black" stroke-width="1" font-family="sans-serif" font-size="11">',
        f'<line x1="{_LEFT}" y1="{_BOTTOM}" x2="{_RIGHT}" y2="{_BOTTOM}"/>',
        f'<line x1="{_LEFT}" y1="{_BOTTOM}" x2="{_LEFT}" y2="{_TOP}"/>',
    ]
    for t in X_TICKS:
        x = _n(px(t))
        out.append(f'<line x1="{x}" y1="{_BOTTOM}" x2="{x}" y2="{_BOTTOM + 5}"/>')
        out.append(f'<text x="{x}" y="{_BOTTOM + 18}" text-anchor="middle" stroke="none">{t}</text>')
    for t in ax.y_ticks():
        y = _n(py(t))
        out.append(f'<line x1="{_LEFT - 5}" y1="{y}" x2="{_LEFT}" y2="{y}"/>')
        out.append(f'<text x="{_LEFT - 8}" y="{y}" text-anchor="end" dominant-baseline="middle" '
                   f'stroke="none">{t:g}</text>')
    out.append(f'<text x="{(_LEFT + _RIGHT) / 2:.2f}" y="{_H - 16}" text-anchor="middle" '
               f'stroke="none">Trend score</text>')
    out.append(f'<text x="16" y="{(_TOP + _BOTTOM) / 2:.2f}" text-anchor="middle" stroke="none" '
               f'transform="rotate(-90 16 {(_TOP + _BOTTOM) / 2:.2f})">Close (USD)</text>')
    out.append('</g>')
    out.append('<g id="points" fill="steelblue" fill-opacity="0.6" stroke="none">')
    for score, close in plot.points:
        out.append(f'<circle cx="{_n(px(score))}" cy="{_n(py(close))}" r="2.5"/>')
    out.append('</g>')
    out.append('</svg>')
    return ("\n".join(out) + "\n").encode("utf-8")


def axes_fragment(svg: bytes) -> bytes:
    """The ``<g id="axes">`` element of a rendered plot, for geometry comparisons."""
    start = svg.index(b'<g id="axes"')
    return svg[start:svg.index(b"</g>", start) + 4]


def company_plots(full: CompanySeries, windows: Sequence[tuple[WindowLabel, CompanySeries]]
                  ) -> list[ScatterPlot]:
    """One plot per window, all on the axes derived from the full series."""
    axes = AxisSpec.for_series(full)
    return [ScatterPlot.from_series(s, label, axes) for label, s in windows]
