from __future__ import annotations

import io
from fractions import Fraction

import pytest
from rich.console import Console
from rich.table import Table

from clutterforge import render
from clutterforge.clutter import builtin
from clutterforge.gf import build_field
from clutterforge.polyhedral import FractionalPoint, Integral
from clutterforge.verify import ConditionResult, SweepSummary, Theorem, TheoremReport, Verdict

TRUE = ConditionResult(Verdict.TRUE, "double description")
FALSE = ConditionResult(Verdict.FALSE, "minor search", derived=True)
UNKNOWN = ConditionResult(Verdict.UNKNOWN, "budget")


def _render(*renderables: object) -> str:
    stream = io.StringIO()
    console = Console(file=stream, width=120, color_system=None)
    console.print(*renderables)
    return stream.getvalue()


@pytest.mark.parametrize(
    "result,text,color",
    [(TRUE, "TRUE", "green"), (FALSE, "FALSE", "red"), (UNKNOWN, "UNKNOWN", "yellow")],
)
def test_verdict_text(result: ConditionResult, text: str, color: str) -> None:
    rendered = render.verdict_text(result)
    assert rendered.plain == text
    assert rendered.style == render.VERDICT_STYLES[result.verdict]
    style_color = render.VERDICT_STYLES[result.verdict].color
    assert style_color is not None
    assert style_color.name == color


def test_report_table() -> None:
    report = TheoremReport(Theorem.ODD, "S1", TRUE, FALSE, UNKNOWN)
    table = render.report_table(report)
    assert isinstance(table, Table)
    assert table.row_count == 3
    output = _render(table)
    assert "odd: S1" in output
    assert "minor search [derived]" in output
    assert "minor_free" in output


@pytest.mark.parametrize(
    "conditions,expected",
    [
        ((TRUE, TRUE, TRUE), "all conditions agree"),
        ((TRUE, FALSE, TRUE), "conditions DISAGREE"),
        ((TRUE, UNKNOWN, TRUE), "UNKNOWN: some condition ran out of budget"),
    ],
)
def test_agreement_text(
    conditions: tuple[ConditionResult, ConditionResult, ConditionResult], expected: str
) -> None:
    report = TheoremReport(Theorem.GF4, "S", *conditions)
    assert render.agreement_text(report).plain == expected


def test_ideal_line() -> None:
    ideal = ConditionResult(Verdict.TRUE, "polyhedral", Integral(7))
    assert render.ideal_line(ideal) == (
        "IDEAL (0 fractional extreme points of 7 candidates examined)"
    )
    half = Fraction(1, 2)
    point = FractionalPoint((half, half, half), (0, 1, 2), ())
    not_ideal = ConditionResult(Verdict.FALSE, "polyhedral", point)
    assert render.ideal_line(not_ideal) == "NOT IDEAL (fractional extreme point (1/2, 1/2, 1/2))"
    assert render.ideal_line(UNKNOWN) == "UNKNOWN (budget)"


def test_field_tables() -> None:
    tables = render.field_tables(build_field(4))
    assert len(tables) == 2
    assert all(t.row_count == 4 for t in tables)
    assert all(len(t.columns) == 5 for t in tables)


def test_incidence_table() -> None:
    table = render.incidence_table(builtin("Delta3"))
    assert table.row_count == 3
    assert len(table.columns) == 3


def test_write_csv() -> None:
    reports = [
        TheoremReport(Theorem.ODD, "S1", TRUE, TRUE, TRUE),
        TheoremReport(Theorem.ODD, "S2", TRUE, FALSE, TRUE),
        TheoremReport(Theorem.ODD, "S3", TRUE, UNKNOWN, TRUE),
    ]
    stream = io.StringIO()
    render.write_csv(reports, stream)
    lines = stream.getvalue().splitlines()
    assert lines[0] == ",".join(render.CSV_COLUMNS)
    assert lines[1:] == [
        "S1,odd,true,true,true,true",
        "S2,odd,true,false,true,false",
        "S3,odd,true,unknown,true,unknown",
    ]


def test_summary_json() -> None:
    summary = SweepSummary()
    summary.add(TheoremReport(Theorem.MFMC, "S1", TRUE, TRUE, TRUE))
    summary.add(TheoremReport(Theorem.MFMC, "S2", FALSE, TRUE, TRUE))
    summary.add(TheoremReport(Theorem.MFMC, "S3", UNKNOWN, TRUE, TRUE))
    assert render.summary_json(summary) == {
        "total": 3,
        "agreements": 1,
        "disagreements": 1,
        "unknowns": 1,
    }
