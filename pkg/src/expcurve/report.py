"""Machine-readable reports: versioned JSON and plain CSV.

Balls are always written as outward-rounded ``[lo,hi]`` decimal strings, never
as midpoints. Output depends only on the inputs, so equal configurations give
byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path

from flint import acb, arb

from .balls import Verdict, all_verdicts, interval_strings
from .cf_core import LogOnly

SCHEMA = "expcurve/report/1"
DIGITS = 20


def ball_text(x: arb, digits: int = DIGITS) -> str:
    lo_s, hi_s = interval_strings(x, digits)
    return f"[{lo_s},{hi_s}]"


def cell(value) -> str | int | bool | None | list | dict:
    """JSON-ready form of one report value."""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, int):
        # huge exact integers stay exact but as text
        return value if abs(value) < 2**53 else str(value)
    if isinstance(value, arb):
        return ball_text(value)
    if isinstance(value, acb):
        return [ball_text(value.real), ball_text(value.imag)]
    if isinstance(value, LogOnly):
        return f"LogOnly(ln={ball_text(value.ln)})"
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, dict):
        return {str(k): cell(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [cell(v) for v in value]
    return str(value)


def _csv_text(value) -> str:
    v = cell(value)
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, dict)):
        return json.dumps(v, sort_keys=True)
    return str(v)


@dataclass
class Report:
    command: str
    config: dict
    columns: tuple
    rows: list = field(default_factory=list)
    verdicts: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def add(self, row: dict, verdict: Verdict | None = None) -> None:
        """Append a row; a verdict, when given, counts towards the summary."""
        self.rows.append(row)
        if verdict is not None:
            self.verdicts.append(verdict)

    @property
    def verdict(self) -> Verdict:
        return all_verdicts(self.verdicts)

    def summary(self) -> dict:
        counts = {v.value: 0 for v in Verdict}
        for v in self.verdicts:
            counts[v.value] += 1
        return {"counts": counts, "overall": self.verdict.value, "checks": len(self.verdicts)}

    def exit_code(self) -> int:
        if any(v is Verdict.FALSE for v in self.verdicts):
            return 1
        if any(v is Verdict.UNDECIDED for v in self.verdicts):
            return 2
        return 0


def to_json(report: Report) -> str:
    doc = {
        "schema": SCHEMA,
        "command": report.command,
        "config": cell(report.config),
        "columns": list(report.columns),
        "rows": [{c: cell(row.get(c)) for c in report.columns} for row in report.rows],
        "summary": report.summary(),
        "notes": list(report.notes),
    }
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def to_csv(report: Report) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
    writer.writerow(report.columns)
    for row in report.rows:
        writer.writerow([_csv_text(row.get(c)) for c in report.columns])
    return buf.getvalue()


def emit_report(report: Report, fmt: str = "json", path: str | Path | None = None) -> int:
    """Write the report and return the number of bytes written."""
    if fmt == "json":
        text = to_json(report)
    elif fmt == "csv":
        text = to_csv(report)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    data = text.encode("utf-8")
    if path is None or str(path) == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        Path(path).write_bytes(data)
    return len(data)
