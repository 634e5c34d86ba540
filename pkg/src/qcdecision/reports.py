"""Text and CSV rendering for sweeps and decision reports."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from importlib import resources
from pathlib import Path
from typing import Sequence

from .decision import DecisionVector, SolveResult
from .sampling import SweepResult
from .scenarios import NamedScenario


def round_half_away(value: float) -> int:
    """Round to the nearest integer, halves away from zero (2.5 -> 3, -2.5 -> -3)."""
    return int(Decimal(repr(value)).quantize(Decimal(1), rounding=ROUND_HALF_UP))


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def sweep_csv(result: SweepResult) -> str:
    return _csv_text(
        ("swept_value", "n"),
        [(f"{row.swept_value:.6f}", row.sample_size) for row in result.rows],
    )


def value_table_csv(result: SolveResult) -> str:
    return _csv_text(
        ("s1", "s2", "s3", "s4", "value"),
        [(*d.as_tuple(), repr(value)) for d, value in result.value_table],
    )


@dataclass(frozen=True)
class ReportRow:
    case_name: str
    decision: DecisionVector
    best_value: float

    @property
    def display_value(self) -> int:
        return round_half_away(self.best_value)


def report_rows(scenarios: Sequence[NamedScenario], results: Sequence[SolveResult]) -> list[ReportRow]:
    return [ReportRow(s.name, r.best_decision, r.best_value) for s, r in zip(scenarios, results)]


def decision_report_text(rows: Sequence[ReportRow]) -> str:
    headers = ("case", "s1", "s2", "s3", "s4", "best return")
    body = [(row.case_name, *map(str, row.decision.as_tuple()), str(row.display_value)) for row in rows]
    widths = [max(len(h), *(len(r[i]) for r in body)) if body else len(h) for i, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(w) if i == 0 else h.rjust(w) for i, (h, w) in enumerate(zip(headers, widths)))]
    lines.append("  ".join("-" * w for w in widths))
    for r in body:
        lines.append("  ".join(c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in enumerate(zip(r, widths))))
    return "\n".join(line.rstrip() for line in lines) + "\n"


def decision_csv(rows: Sequence[ReportRow]) -> str:
    return _csv_text(
        ("name", "s1", "s2", "s3", "s4", "value"),
        [(row.case_name, *row.decision.as_tuple(), repr(row.best_value)) for row in rows],
    )


def write_text(path: str | Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def published_table1() -> list[ReportRow]:
    """The six published optimal decisions and rounded returns, as report rows."""
    raw = resources.files("qcdecision").joinpath("data/table1_published.json").read_text(encoding="utf-8")
    return [
        ReportRow(f"case {c['case']}", DecisionVector(*c["decision"]), float(c["best_return"]))
        for c in json.loads(raw)["cases"]
    ]


def compare_to_published(rows: Sequence[ReportRow]) -> list[tuple[ReportRow, ReportRow, bool]]:
    """Pair computed rows with the published ones by position.

    A pair matches when the decisions agree and the computed value rounds
    to the published return.
    """
    out = []
    for computed, published in zip(rows, published_table1()):
        ok = computed.decision == published.decision and computed.display_value == published.display_value
        out.append((computed, published, ok))
    return out
