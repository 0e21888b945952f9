"""Text and JSON Lines rendering of command reports."""

from dataclasses import dataclass, field
from io import StringIO
from typing import Dict, Iterable, List, Optional, Union

import orjson
from rich.console import Console
from rich.table import Table

from plurilag.algebra.diffpoly import DiffPoly
from plurilag.algebra.jets import JetSpace
from plurilag.algebra.render import render
from plurilag.core.logging import get_logger
from plurilag.models.requests import OutputFormat
from plurilag.models.responses import (
    CheckRecord,
    EquationRecord,
    EquationStatus,
    HeaderRecord,
    MatrixRecord,
    PolynomialRecord,
    SummaryRecord,
)

logger = get_logger(__name__)

Record = Union[HeaderRecord, EquationRecord, CheckRecord, PolynomialRecord, MatrixRecord, SummaryRecord]

TEXT_WIDTH = 160


@dataclass
class Report:
    """Records of one command run, header first, summary appended by `finish`."""

    header: HeaderRecord
    records: List[Record] = field(default_factory=list)
    summary: Optional[SummaryRecord] = None

    def add(self, record: Record) -> None:
        self.records.append(record)

    def extend(self, records: Iterable[Record]) -> None:
        self.records.extend(records)

    def polynomial(self, name: str, value: DiffPoly, space: JetSpace) -> None:
        self.add(PolynomialRecord(name=name, value=render(value, space)))

    def check(self, name: str, residual: DiffPoly, space: JetSpace, detail: Optional[str] = None) -> bool:
        """Record an identity whose residual must vanish."""
        passed = not residual
        self.add(CheckRecord(name=name, passed=passed, residual=render(residual, space), detail=detail))
        if not passed:
            logger.error(f"check failed: {name}")
        return passed

    def flag(self, name: str, passed: bool, detail: Optional[str] = None) -> bool:
        self.add(CheckRecord(name=name, passed=passed, residual="0" if passed else "?", detail=detail))
        if not passed:
            logger.error(f"check failed: {name}")
        return passed

    @property
    def checks(self) -> List[CheckRecord]:
        return [r for r in self.records if isinstance(r, CheckRecord)]

    @property
    def equations(self) -> List[EquationRecord]:
        return [r for r in self.records if isinstance(r, EquationRecord)]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks) and all(
            e.status != EquationStatus.NONZERO_RESIDUAL for e in self.equations
        )

    def counts(self) -> Dict[str, int]:
        counts: Dict[str, int] = {}
        if self.equations:
            for status in EquationStatus:
                counts[status.value] = sum(1 for e in self.equations if e.status == status)
        if self.checks:
            counts["checks-passed"] = sum(1 for c in self.checks if c.passed)
            counts["checks-failed"] = sum(1 for c in self.checks if not c.passed)
        return counts

    def finish(self) -> SummaryRecord:
        self.summary = SummaryRecord(passed=self.passed, counts=self.counts())
        return self.summary

    def all_records(self) -> List[Record]:
        summary = self.summary or self.finish()
        return [self.header, *self.records, summary]


class ReportService:
    """Service for serialising reports."""

    def to_jsonl(self, report: Report) -> str:
        """One JSON object per line, keys sorted, no timestamps."""
        lines = [
            orjson.dumps(record.model_dump(mode="json"), option=orjson.OPT_SORT_KEYS).decode()
            for record in report.all_records()
        ]
        return "\n".join(lines) + "\n"

    def to_text(self, report: Report) -> str:
        out = StringIO()
        console = Console(file=out, width=TEXT_WIDTH, color_system=None, highlight=False, markup=False)
        header = report.header
        title = f"{header.command}: N={header.n}"
        if header.k_max is not None:
            title += f", k_max={header.k_max}"
        if header.omit is not None:
            title += f", omit={header.omit}"
        console.print(title)

        polynomials = [r for r in report.records if isinstance(r, PolynomialRecord)]
        if polynomials:
            table = Table(show_header=True, box=None)
            table.add_column("name")
            table.add_column("value", overflow="fold")
            for record in polynomials:
                table.add_row(record.name, record.value)
            console.print(table)

        equations = report.equations
        if equations:
            for record in equations:
                if record.status == EquationStatus.NONZERO_RESIDUAL:
                    console.print(
                        f"{record.status.value} {record.family} {tuple(record.indices)} "
                        f"I={tuple(record.multi_index)}: {record.reduced}"
                    )
            console.print(
                "equations: " + ", ".join(f"{k}={v}" for k, v in report.counts().items() if not k.startswith("checks"))
            )

        for record in report.records:
            if isinstance(record, CheckRecord):
                mark = "PASS" if record.passed else "FAIL"
                line = f"[{mark}] {record.name}"
                if record.detail:
                    line += f" ({record.detail})"
                if not record.passed:
                    line += f": {record.residual}"
                console.print(line)
            elif isinstance(record, MatrixRecord):
                console.print(f"{record.name}:")
                for row in record.rows:
                    console.print("  " + " ".join("1" if entry else "0" for entry in row))

        summary = report.summary or report.finish()
        console.print("PASSED" if summary.passed else "FAILED")
        return out.getvalue()

    def render(self, report: Report, output_format: OutputFormat) -> str:
        if output_format == OutputFormat.STRUCTURED:
            return self.to_jsonl(report)
        return self.to_text(report)


# Global report service instance
report_service = ReportService()
