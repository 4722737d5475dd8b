"""
Command line entry point: ``python -m app.cli [--format text|json] [--out PATH] <command> ...``

Exit codes: 0 on success (or a passing replay), 1 on a failing replay, 2 on
invalid input.
"""
import argparse
import sys
from pathlib import Path
from typing import List, Optional, Tuple, Type, TypeVar

from pydantic import BaseModel, ValidationError

from app.core.config import settings
from app.core.exceptions import ScenarioValidationError, WorkbenchError
from app.core.logging_config import get_logger, log_error, setup_logging
from app.models.matrix import format_rational
from app.schemas.base import ReportFormat
from app.schemas.report import HJChainResponse, LatticeExport, LefschetzResponse, SearchResponse
from app.schemas.scenario import LefschetzCaseSchema, QuotientSetupSchema
from app.services.operations import analyse_case, hj_response, quotient_lattice_export, search_classes
from app.services.replay import run_scenario
from app.services.report import emit_report, exit_code

logger = get_logger("cli")

Schema = TypeVar("Schema", bound=BaseModel)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="workbench", description="Exact intersection-theory workbench")
    parser.add_argument(
        "--format", choices=[f.value for f in ReportFormat], default=settings.default_format,
        help="output format (default: %(default)s)",
    )
    parser.add_argument("--out", type=Path, help="write output to this file instead of stdout")
    commands = parser.add_subparsers(dest="command", required=True)

    replay = commands.add_parser("replay", help="run a scenario and report every assertion")
    replay.add_argument("scenario", help="built-in scenario name or path to a scenario JSON file")

    search = commands.add_parser("search", help="classes on NS(X) with given K.D and D^2")
    search.add_argument("--kd", type=int, required=True)
    search.add_argument("--d2", type=int, required=True)

    quotient = commands.add_parser("quotient", help="resolved cyclic quotient lattice from a setup file")
    quotient.add_argument("setup", type=Path)

    lefschetz = commands.add_parser("lefschetz", help="fixed-point constraints for one involution branch")
    lefschetz.add_argument("case", type=Path)

    hj = commands.add_parser("hj", help="resolution chain of 1/n(1,a)")
    hj.add_argument("n", type=int)
    hj.add_argument("a", type=int)
    return parser


def _load(path: Path, schema: Type[Schema]) -> Schema:
    try:
        return schema.model_validate_json(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ScenarioValidationError(str(path), "file not found")
    except ValidationError as exc:
        error = exc.errors()[0]
        entry = ".".join(str(part) for part in error["loc"]) or str(path)
        raise ScenarioValidationError(entry, error["msg"])


def _search_text(response: SearchResponse) -> str:
    lines = [f"K.D = {response.kd}, D^2 = {response.d2}: {len(response.solutions)} class(es)"]
    for solution in response.solutions:
        lines.append(
            f"  (a, b, c) = ({solution.a}, {solution.b}, {solution.c})  s = {solution.s}  "
            f"D = {solution.combination}  coords = [{', '.join(solution.coords)}]"
        )
    return "\n".join(lines) + "\n"


def _lattice_text(export: LatticeExport) -> str:
    width = max(len(entry) for row in export.gram for entry in row) if export.basis else 1
    label_width = max(len(label) for label in export.basis) if export.basis else 1
    lines = [f"lattice {export.name} (rank {len(export.basis)})"]
    lines.append(" " * (label_width + 2) + " ".join(label.rjust(width) for label in export.basis))
    for label, row in zip(export.basis, export.gram):
        lines.append(f"{label.ljust(label_width)}  " + " ".join(entry.rjust(width) for entry in row))
    for label, coords in export.named.items():
        lines.append(f"{label} = [{', '.join(coords)}]")
    return "\n".join(lines) + "\n"


def _lefschetz_text(response: LefschetzResponse) -> str:
    lines = [f"case {response.case}"]
    for entry in response.entries:
        lines.extend(f"  - {constraint}" for constraint in entry.constraints)
        lines.append(f"  outcome: {entry.outcome}")
        if entry.certificate:
            lines.append(f"  certificate: {entry.certificate}")
    return "\n".join(lines) + "\n"


def _hj_text(response: HJChainResponse) -> str:
    chain = ", ".join(str(c) for c in response.self_intersections)
    discrepancies = ", ".join(format_rational(d) for d in response.discrepancies)
    return f"1/{response.n}(1,{response.a}): chain [{chain}], discrepancies [{discrepancies}]\n"


def _render(model: BaseModel, fmt: str, text) -> str:
    if fmt == ReportFormat.JSON.value:
        return model.model_dump_json(indent=2) + "\n"
    return text(model)


def execute(args: argparse.Namespace) -> Tuple[str, int]:
    """Rendered output and exit code for parsed arguments"""
    if args.command == "replay":
        report = run_scenario(args.scenario)
        return emit_report(report, args.format), exit_code(report)
    if args.command == "search":
        return _render(search_classes(args.kd, args.d2), args.format, _search_text), 0
    if args.command == "quotient":
        export = quotient_lattice_export(_load(args.setup, QuotientSetupSchema))
        return _render(export, args.format, _lattice_text), 0
    if args.command == "lefschetz":
        response = analyse_case(_load(args.case, LefschetzCaseSchema))
        return _render(response, args.format, _lefschetz_text), 0
    return _render(hj_response(args.n, args.a), args.format, _hj_text), 0


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(log_level=settings.log_level, log_file=settings.log_file)
    try:
        output, code = execute(args)
    except WorkbenchError as exc:
        log_error(logger, exc, {"operation": args.command})
        print(f"error: {exc.message}", file=sys.stderr)
        return 2
    if args.out:
        args.out.write_text(output, encoding="utf-8")
    else:
        sys.stdout.write(output)
    return code


if __name__ == "__main__":
    sys.exit(main())
