"""
rich renderables and JSON/CSV serializers for the command line.
"""

from __future__ import annotations

import csv
from collections.abc import Iterable
from typing import IO, Any

from rich.style import Style
from rich.table import Table
from rich.text import Text

from clutterforge import gf
from clutterforge.clutter import Clutter
from clutterforge.config import Budget
from clutterforge.formats import certificate_json
from clutterforge.gf import FieldSpec
from clutterforge.matroid import CircuitMatroid, StructureReport
from clutterforge.polyhedral import FractionalPoint, Integral
from clutterforge.verify import ConditionResult, SweepSummary, TheoremReport, Verdict
from clutterforge.vspace import Subspace
from clutterforge.witnesses import LocalizationProfile

VERDICT_STYLES = {
    Verdict.TRUE: Style(color="green", bold=True),
    Verdict.FALSE: Style(color="red", bold=True),
    Verdict.UNKNOWN: Style(color="yellow"),
}

CSV_COLUMNS = ("instance", "theorem", "polyhedral", "structure", "minor_free", "agreement")


def verdict_text(result: ConditionResult) -> Text:
    return Text(result.verdict.value.upper(), style=VERDICT_STYLES[result.verdict])


def field_tables(f: FieldSpec) -> list[Table]:
    names = [gf.element_name(f, x) for x in f.elements]
    tables = []
    for title, op in (("+", gf.add), ("*", gf.mul)):
        table = Table(title=f"{f} {title}", show_lines=False)
        table.add_column(title, style="bold")
        for name in names:
            table.add_column(name, justify="right")
        for x in f.elements:
            table.add_row(names[x], *(names[op(f, x, y)] for y in f.elements))
        tables.append(table)
    return tables


def report_table(report: TheoremReport) -> Table:
    table = Table(title=f"{report.theorem.value}: {report.instance}")
    table.add_column("condition")
    table.add_column("verdict")
    table.add_column("method")
    for name, result in report.conditions.items():
        method = result.method + (" [derived]" if result.derived else "")
        table.add_row(name, verdict_text(result), Text(method))
    return table


def agreement_text(report: TheoremReport) -> Text:
    if report.agreement is None:
        return Text(
            "UNKNOWN: some condition ran out of budget", style=VERDICT_STYLES[Verdict.UNKNOWN]
        )
    if report.agreement:
        return Text("all conditions agree", style=VERDICT_STYLES[Verdict.TRUE])
    return Text("conditions DISAGREE", style=VERDICT_STYLES[Verdict.FALSE])


def ideal_line(result: ConditionResult) -> str:
    cert = result.certificate
    if isinstance(cert, Integral):
        return (f"IDEAL (0 fractional extreme points of {cert.extreme_points} "
                "candidates examined)")
    if isinstance(cert, FractionalPoint):
        return f"NOT IDEAL ({cert})"
    return str(result)


def incidence_table(C: Clutter) -> Table:
    table = Table(show_header=True)
    for x in C.ground:
        table.add_column(str(x), justify="center")
    for row in C.member_sets():
        inside = set(row)
        table.add_row(*("1" if x in inside else "." for x in C.ground))
    return table


def structure_table(M: CircuitMatroid, report: StructureReport) -> Table:
    table = Table(title=str(M))
    table.add_column("component")
    table.add_column("kind")
    table.add_column("series classes")
    for comp in report.components:
        classes = " ".join("{" + ",".join(map(str, c)) + "}" for c in comp.series)
        table.add_row(",".join(map(str, comp.elements)), comp.describe(), classes)
    return table


def profile_table(profile: LocalizationProfile) -> Table:
    table = Table(title=f"localization at {profile.alpha}, sigma={profile.sigma}")
    table.add_column("size")
    table.add_column("members")
    table.add_row("1", " ".join("{" + str(x) + "}" for x in profile.singletons))
    for j, component in enumerate(profile.components, start=1):
        edges = sorted(" ".join(sorted(map(str, e))) for e in component)
        table.add_row(f"2 (component {j})", "; ".join(edges))
    table.add_row(">=3", str(len(profile.larger)))
    return table


def condition_json(result: ConditionResult, S: Subspace, budget: Budget | None) -> dict[str, Any]:
    return {
        "verdict": result.verdict.value,
        "method": result.method,
        "derived": result.derived,
        "certificate": certificate_json(result.certificate, S, budget),
    }


def report_json(report: TheoremReport, S: Subspace, budget: Budget | None = None) -> dict[str, Any]:
    return {
        "theorem": report.theorem.value,
        "instance": report.instance,
        "agreement": report.agreement,
        "conditions": {
            name: condition_json(result, S, budget)
            for name, result in report.conditions.items()
        },
    }


def summary_json(summary: SweepSummary) -> dict[str, int]:
    return {
        "total": summary.total,
        "agreements": summary.agreements,
        "disagreements": summary.disagreements,
        "unknowns": summary.unknowns,
    }


def write_csv(reports: Iterable[TheoremReport], stream: IO[str]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in reports:
        agreement = "unknown" if r.agreement is None else str(r.agreement).lower()
        writer.writerow([
            r.instance,
            r.theorem.value,
            r.polyhedral.verdict.value,
            r.structure.verdict.value,
            r.minor_free.verdict.value,
            agreement,
        ])
