"""
Canonical rendering of computed values and replay reports.
"""
from fractions import Fraction
from typing import Any, List, Tuple

import sympy

from app.core.exceptions import DomainError, ReportFormatError
from app.models.lattice import DivisorClass, IntersectionLattice
from app.models.matrix import format_rational
from app.schemas.base import AssertionStatus, ReportFormat
from app.schemas.report import LatticeExport, ReplayReport

PREDICATES = ("nonintegral", "integral", "assumed")

_COLUMNS = ("ID", "STATUS", "COMPUTED", "EXPECTED", "DESCRIPTION")


def render_value(value: Any) -> str:
    """Exact, deterministic string for any value a replay step computes"""
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, Fraction, sympy.Rational)):
        return format_rational(value)
    if isinstance(value, DivisorClass):
        return value.render()
    if isinstance(value, sympy.Expr):
        return str(value)
    if isinstance(value, str):
        try:
            return format_rational(value)
        except DomainError:
            return value.strip()
    if isinstance(value, dict):
        return "{" + ", ".join(f"{key}: {render_value(item)}" for key, item in value.items()) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(render_value(item) for item in value) + "]"
    raise TypeError(f"Cannot render {type(value).__name__}")


def _as_fraction(value: Any):
    if isinstance(value, bool):
        return None
    if isinstance(value, (int, Fraction, sympy.Rational)):
        return Fraction(format_rational(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            return None
    return None


def judge(computed: Any, expected: Any) -> Tuple[str, str, AssertionStatus]:
    """(computed text, expected text, status) for one assertion"""
    computed_text = render_value(computed)
    if expected == "assumed":
        return computed_text, "assumed", AssertionStatus.ASSUMED
    if expected in ("nonintegral", "integral"):
        value = _as_fraction(computed)
        ok = value is not None and (value.denominator != 1) == (expected == "nonintegral")
        return computed_text, expected, AssertionStatus.PASS if ok else AssertionStatus.FAIL
    expected_text = render_value(expected)
    status = AssertionStatus.PASS if computed_text == expected_text else AssertionStatus.FAIL
    return computed_text, expected_text, status


def overall_status(statuses: List[str]) -> AssertionStatus:
    return AssertionStatus.FAIL if AssertionStatus.FAIL.value in statuses else AssertionStatus.PASS


def _text_table(report: ReplayReport) -> str:
    rows = [
        (a.id, a.status, a.computed, a.expected, a.description)
        for a in report.assertions
    ]
    widths = [
        max([len(_COLUMNS[i])] + [len(row[i]) for row in rows]) for i in range(len(_COLUMNS) - 1)
    ]

    def line(cells) -> str:
        padded = [cell.ljust(width) for cell, width in zip(cells, widths)]
        return " | ".join(padded + [cells[-1]]).rstrip()

    out = [f"scenario: {report.scenario}", line(_COLUMNS), "-+-".join("-" * w for w in widths) + "-+-" + "-" * 11]
    out.extend(line(row) for row in rows)
    if report.cases:
        out.append("")
        out.append("cases:")
        for case in report.cases:
            out.append(f"  {case.case}: {case.outcome}")
            for constraint in case.constraints:
                out.append(f"    - {constraint}")
            if case.certificate:
                out.append(f"    certificate: {case.certificate}")
    out.append("")
    out.append(f"overall: {report.overall}")
    return "\n".join(out) + "\n"


def emit_report(report: ReplayReport, fmt: str) -> str:
    try:
        fmt = ReportFormat(fmt)
    except ValueError:
        raise ReportFormatError(str(fmt))
    if fmt == ReportFormat.JSON:
        return report.model_dump_json(indent=2) + "\n"
    return _text_table(report)


def exit_code(report: ReplayReport) -> int:
    return 0 if report.passed else 1


def export_lattice(lattice: IntersectionLattice) -> LatticeExport:
    return LatticeExport(
        name=lattice.name,
        basis=list(lattice.basis),
        gram=[[format_rational(e) for e in row] for row in lattice.gram.to_rows()],
        named={label: [format_rational(c) for c in coords] for label, coords in lattice.named.items()},
    )
