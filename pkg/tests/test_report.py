import re
import xml.etree.ElementTree as ET
from decimal import Decimal

import pytest

from eventlens.correlation import (PRICE_TYPES, CorrelationRow, aggregate_table, classify,
                                   matrix_from_columns)
from eventlens.errors import EmptyInput
from eventlens.model import WindowLabel, split_by_event
from eventlens.report import (AxisSpec, ScatterPlot, axes_fragment, company_plots,
                              format_coefficient, render_matrix, render_scatter, render_table)

from conftest import make_series
import published_tables as pt

SVG_NS = "{http://www.w3.org/2000/svg}"
TAG = re.compile(r" \[[GOR]\]")


def table_for(label):
    rows, _ = pt.TABLES[label]
    return aggregate_table([
        CorrelationRow(name, label, {k: None if v is None else float(v)
                                     for k, v in zip(pt.COLUMNS, cells[:4])})
        for name, cells in rows.items()])


@pytest.mark.parametrize("value,text", [
    (None, "N/A"),
    (0.76645, "0.7665"),
    (-0.76645, "-0.7665"),
    (0.29465, "0.2947"),
    (-0.10475, "-0.1048"),
    (0.3, "0.3000"),
    (-0.00001, "0.0000"),
    (1.0, "1.0000"),
])
def test_format_coefficient(value, text):
    assert format_coefficient(value) == text


def test_markdown_moderna_row_green():
    md = render_table(table_for("Full")).decode()
    line = next(l for l in md.splitlines() if l.startswith("| Moderna"))
    assert "Moderna | 0.7661 | 0.7657 | 0.7669 | 0.7669 | 0.7664" in TAG.sub("", line)
    assert line.count("[G]") == 5


def test_markdown_na_row():
    md = render_table(table_for("PreRollout")).decode()
    assert "| NovaVax | N/A | N/A | N/A | N/A | N/A |" in md


def test_markdown_layout_and_average():
    md = render_table(table_for("Full")).decode().splitlines()
    assert md[2] == "| Company | Open | Close | High | Low | Avg. |"
    body = [l for l in md if l.startswith("| ") and not l.startswith("| Company")]
    assert [l.split(" | ")[0][2:] for l in body] == [*pt.FULL, "Average"]
    assert TAG.sub("", body[-1]) == "| Average | 0.3957 | 0.3967 | 0.4004 | 0.3947 | 0.3969 |"


def test_csv_has_no_tags():
    out = render_table(table_for("PostRollout"), "csv").decode()
    assert "[" not in out
    lines = out.splitlines()
    assert lines[0] == "Company,Open,Close,High,Low,Avg."
    assert lines[3] == "NovaVax,N/A,N/A,N/A,N/A,N/A"
    assert lines[-1] == "Average,-0.1158,-0.0762,-0.1050,-0.1048,-0.1004"


def test_render_is_deterministic():
    assert render_table(table_for("Full")) == render_table(table_for("Full"))
    assert render_table(table_for("Full"), "csv") == render_table(table_for("Full"), "csv")


def test_empty_table_propagates():
    with pytest.raises(EmptyInput):
        render_table(aggregate_table([]))


def test_unknown_format():
    with pytest.raises(ValueError):
        render_table(table_for("Full"), "html")


@pytest.mark.parametrize("label", ["Full", "PreRollout", "PostRollout"])
def test_cells_reparse_and_tags_match_classification(label):
    table = table_for(label)
    md = render_table(table).decode()
    cells = re.findall(r"(-?\d\.\d{4}) \[([GOR])\]", md)
    values = [r.cell(c) for r in table.rows for c in PRICE_TYPES + ("Avg.",)]
    values += [table.average_row.cell(c) for c in PRICE_TYPES + ("Avg.",)]
    values = [v for v in values if v is not None]
    assert len(cells) == len(values)
    for (text, tag), v in zip(cells, values):
        assert abs(Decimal(text) - Decimal(repr(v))) <= Decimal("0.00005")
        assert tag == classify(v).color.value[0]


def test_render_matrix():
    m = matrix_from_columns({"A": [1, 2, 3], "B": [3, 2, 1], "C": [5, 5, 5]})
    assert render_matrix(m).decode().splitlines() == [
        ",A,B,C",
        "A,1.0000,-1.0000,N/A",
        "B,-1.0000,1.0000,N/A",
        "C,N/A,N/A,N/A",
    ]


# -- scatter -------------------------------------------------------------------------

def test_axis_ceiling():
    s = make_series([100.0, 175.2, 150.0], [10, 20, 30])
    assert AxisSpec.for_series(s).y_max == 200.0
    assert AxisSpec.for_series(make_series([175.0], [1])).y_max == 175.0
    assert AxisSpec.for_series(make_series([3.0], [1])).y_max == 25.0
    assert AxisSpec.for_series(make_series([], [])).y_max == 25.0


def test_y_ticks_are_multiples_of_25():
    for top in (25, 200, 975, 3000):
        ticks = AxisSpec(y_max=float(top)).y_ticks()
        assert ticks[0] == 0 and all(t % 25 == 0 for t in ticks) and ticks[-1] <= top
        assert len(ticks) <= 11
    assert AxisSpec(y_max=200.0).y_ticks() == [0, 25, 50, 75, 100, 125, 150, 175, 200]


def test_empty_plot_is_valid_svg():
    svg = render_scatter(ScatterPlot("NovaVax", WindowLabel.FULL, (), AxisSpec()))
    root = ET.fromstring(svg)
    assert root.tag == SVG_NS + "svg"
    assert root.findall(f".//{SVG_NS}circle") == []
    assert root.find(f".//{SVG_NS}text[@id='title']").text == "NovaVax — Full"


def test_plot_points_title_and_escaping():
    s = make_series([10, 20, 30], [0, 50, 100], company="Johnson & Johnson")
    svg = render_scatter(ScatterPlot.from_series(s, WindowLabel.POST))
    root = ET.fromstring(svg)
    assert len(root.findall(f".//{SVG_NS}circle")) == 3
    assert root.find(f".//{SVG_NS}text[@id='title']").text == "Johnson & Johnson — PostRollout"
    xt = [t.text for t in root.find(f"{SVG_NS}g[@id='axes']").iter(SVG_NS + "text")]
    assert all(str(v) in xt for v in (0, 25, 50, 75, 100))


def test_plot_deterministic():
    s = make_series([10, 20, 30], [0, 50, 100])
    p = ScatterPlot.from_series(s, WindowLabel.FULL)
    assert render_scatter(p) == render_scatter(p)


def test_company_plots_share_axes():
    closes = [30.0, 60.0, 175.2, 120.0, 90.0, 80.0]
    s = make_series(closes, [5, 10, 80, 60, 40, 30])
    pre, post = split_by_event(s, s.dates[3])
    plots = company_plots(s, [(WindowLabel.FULL, s), (WindowLabel.PRE, pre), (WindowLabel.POST, post)])
    assert {p.axes.y_max for p in plots} == {200.0}
    frags = {axes_fragment(render_scatter(p)) for p in plots}
    assert len(frags) == 1
    assert [len(p.points) for p in plots] == [6, 3, 3]
