"""
Scenario loading and the end-to-end replay pipeline.

Assertions run in the order their checks are declared on ``ReplayPipeline``;
that order is the dependency order and part of the report contract.  Shared
artifacts (lattices, quotient data, involution actions) are built once and
memoized together with any build error, so every assertion that depends on a
broken artifact fails with the same diagnostic.
"""
import time
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import sympy
from pydantic import ValidationError

from app.core.config import settings
from app.core.exceptions import DomainError, ScenarioValidationError, WorkbenchError
from app.core.logging_config import get_logger, log_assertion
from app.models.curves import CurveRecord, MarkedPoint
from app.models.lattice import DivisorClass, IntersectionLattice
from app.models.lefschetz import CaseEntry, FixedLocusRequirements
from app.models.matrix import RationalMatrix, format_rational
from app.models.quotient import CyclicQuotientSetup, InvolutionSpec, QuotientLattice, QuotientPoint
from app.models.search import SearchProblem
from app.schemas.base import AssertionStatus
from app.schemas.report import AssertionResult, CaseEntrySchema, ReplayReport
from app.schemas.scenario import (
    CurvesSection,
    InvolutionSchema,
    LatticeSchema,
    QuotientSchema,
    QuotientSetupSchema,
    ScenarioSchema,
    TableSchema,
)
from app.services import class_search, curves, lefschetz, quotient
from app.services.arithmetic import determinant, is_perfect_square, rank
from app.services.lattice import (
    class_from_combination,
    compare_gram,
    coords_from_pairings,
    embed_by_pairings,
    equivalence_pairs,
    lattice_from_rows,
    numerically_equal,
    pair,
    parse_combination,
    register_class,
    restrict_lattice,
)
from app.services.report import PREDICATES, judge, overall_status, render_value

logger = get_logger("services.replay")

CANONICAL_LABEL = "K"

Check = Callable[["ReplayPipeline"], Any]

STEPS: Dict[str, Tuple[str, Check]] = {}


def step(assertion_id: str, description: str):
    """Register a pipeline check; declaration order is execution order"""
    def decorator(func: Check) -> Check:
        if assertion_id in STEPS:
            raise ValueError(f"Duplicate pipeline step {assertion_id}")
        STEPS[assertion_id] = (description, func)
        return func
    return decorator


# ---------------------------------------------------------------------------
# Loading and validation
# ---------------------------------------------------------------------------

def resolve_scenario_path(source: Union[str, Path]) -> Path:
    """A path to a JSON file, or the name of a built-in scenario"""
    path = Path(source)
    if path.is_file():
        return path
    builtin = settings.scenario_dir / f"{source}.json"
    if builtin.is_file():
        return builtin
    raise ScenarioValidationError(str(source), "no such scenario file or built-in scenario name")


def _validation_entry(exc: ValidationError) -> Tuple[str, str]:
    error = exc.errors()[0]
    entry = ".".join(str(part) for part in error["loc"]) or "<root>"
    return entry, error["msg"]


def parse_scenario(raw: Union[str, bytes, Dict[str, Any]]) -> ScenarioSchema:
    try:
        if isinstance(raw, dict):
            scenario = ScenarioSchema.model_validate(raw)
        else:
            scenario = ScenarioSchema.model_validate_json(raw)
    except ValidationError as exc:
        raise ScenarioValidationError(*_validation_entry(exc))
    validate_scenario(scenario)
    return scenario


def load_scenario(source: Union[str, Path]) -> ScenarioSchema:
    path = resolve_scenario_path(source)
    logger.debug("Loading scenario from %s", path)
    return parse_scenario(path.read_text(encoding="utf-8"))


def _combination_labels(text: str, entry: str) -> List[str]:
    try:
        return list(parse_combination(text))
    except DomainError as exc:
        raise ScenarioValidationError(entry, exc.message)


def _require_labels(labels: Sequence[str], known: set, entry: str) -> None:
    unknown = [label for label in labels if label not in known]
    if unknown:
        raise ScenarioValidationError(entry, f"unknown label(s) {', '.join(unknown)}")


def _equivalence_labels(statements: Sequence[str], entry: str) -> List[str]:
    try:
        pairs = equivalence_pairs(statements)
    except DomainError as exc:
        raise ScenarioValidationError(entry, exc.message)
    labels = []
    for lhs, rhs in pairs:
        labels += _combination_labels(lhs, entry) + _combination_labels(rhs, entry)
    return labels


def _quotient_labels(schema: QuotientSchema) -> List[str]:
    labels = [f"{label}'" for label in schema.curves]
    for point in schema.points:
        chain = quotient.hj_chain(*point.quotient_type)
        labels += list(_quotient_point(point).chain_labels(len(chain)))
    return labels


def validate_scenario(scenario: ScenarioSchema) -> None:
    """Reject scenarios with dangling labels or unknown assertions before anything is computed"""
    ids = [assertion.id for assertion in scenario.assertions]
    for i, assertion_id in enumerate(ids):
        if assertion_id not in STEPS:
            raise ScenarioValidationError(f"assertions[{i}].id", f"unknown assertion id {assertion_id!r}")
        if ids.index(assertion_id) != i:
            raise ScenarioValidationError(f"assertions[{i}].id", f"duplicate assertion id {assertion_id!r}")

    if not scenario.lattices:
        raise ScenarioValidationError("lattices", "at least one lattice is required")
    section = scenario.curves
    record_labels = [record.label for record in section.records]
    if len(set(record_labels)) != len(record_labels):
        raise ScenarioValidationError("curves.records", "duplicate curve labels")
    if sorted(section.table.labels) != sorted(record_labels):
        raise ScenarioValidationError("curves.table.labels", "table labels must be exactly the record labels")
    points = len(section.marked_points)
    for i, record in enumerate(section.records):
        if len(record.mults) != points:
            raise ScenarioValidationError(
                f"curves.records[{i}].mults", f"{record.label} has {len(record.mults)} multiplicities for {points} points"
            )
    if scenario.ball_quotient:
        try:
            curves.validate_ball_quotient([_record(record) for record in section.records])
        except DomainError as exc:
            raise ScenarioValidationError("curves.records", exc.message)

    base = scenario.lattices[0]
    _require_labels(base.basis, set(record_labels), "lattices[0].basis")
    surface_labels = set(record_labels) | set(section.named_classes) | {CANONICAL_LABEL}
    for key in section.extra_meetings:
        _require_labels([part.strip() for part in key.split(",")], set(record_labels), f"curves.extra_meetings.{key}")
    for name, text in section.named_classes.items():
        _require_labels(_combination_labels(text, f"curves.named_classes.{name}"), set(record_labels), f"curves.named_classes.{name}")
    _require_labels(_combination_labels(section.canonical, "curves.canonical"), set(record_labels), "curves.canonical")
    _require_labels(_equivalence_labels(section.equivalences, "curves.equivalences"), surface_labels, "curves.equivalences")
    _require_labels(scenario.search.profile, surface_labels, "search.profile")
    _require_labels([label for pair_ in scenario.search.relabel for label in pair_], surface_labels, "search.relabel")

    quotient_names = {}
    for i, schema in enumerate(scenario.quotients):
        entry = f"quotients[{i}]"
        if schema.source_lattice not in {lattice.name for lattice in scenario.lattices}:
            raise ScenarioValidationError(f"{entry}.source_lattice", f"unknown lattice {schema.source_lattice!r}")
        _require_labels(schema.curves, set(record_labels), f"{entry}.curves")
        if schema.canonical:
            _require_labels(_combination_labels(schema.canonical, f"{entry}.canonical"), set(schema.curves), f"{entry}.canonical")
        if schema.fibre:
            _require_labels(_combination_labels(schema.fibre, f"{entry}.fibre"), set(schema.curves), f"{entry}.fibre")
        labels = set(_quotient_labels(schema))
        known = labels | {CANONICAL_LABEL}
        if schema.expected is not None:
            _require_labels(schema.expected.labels, labels, f"{entry}.expected.labels")
        _require_labels(schema.reduced_basis, labels, f"{entry}.reduced_basis")
        _require_labels(_equivalence_labels(schema.equivalences, f"{entry}.equivalences"), known, f"{entry}.equivalences")
        for k, text in enumerate(schema.reducible_fibres):
            _require_labels(_combination_labels(text, f"{entry}.reducible_fibres[{k}]"), labels, f"{entry}.reducible_fibres[{k}]")
        quotient_names[schema.name] = labels

    for i, schema in enumerate(scenario.involutions):
        entry = f"involutions[{i}]"
        if schema.quotient not in quotient_names:
            raise ScenarioValidationError(f"{entry}.quotient", f"unknown quotient {schema.quotient!r}")
        labels = quotient_names[schema.quotient]
        members = [label for pair_ in schema.swaps for label in pair_] + list(schema.fixed_labels)
        members += [label for left, right in schema.chain_orbit_pairs for label in list(left) + list(right)]
        _require_labels(members, labels, f"{entry}.swaps")
        spec = involution_spec(schema)
        images = {image for image, _ in spec.orbits()}
        if schema.expected is not None:
            _require_labels(schema.expected.labels, images, f"{entry}.expected.labels")
        _require_labels(schema.determinant_basis, images, f"{entry}.determinant_basis")
        if schema.canonical:
            _require_labels(_combination_labels(schema.canonical, f"{entry}.canonical"), images, f"{entry}.canonical")
        _require_labels(
            _equivalence_labels(schema.equivalences, f"{entry}.equivalences"),
            images | {CANONICAL_LABEL},
            f"{entry}.equivalences",
        )


# ---------------------------------------------------------------------------
# Schema -> model conversion
# ---------------------------------------------------------------------------

def _record(schema) -> CurveRecord:
    return CurveRecord(
        label=schema.label,
        genus=schema.genus,
        mults=tuple(schema.mults),
        extra_nodes=schema.extra_nodes,
        sigma_invariant=schema.sigma_invariant,
        totally_geodesic=schema.totally_geodesic,
    )


def _quotient_point(schema) -> QuotientPoint:
    return QuotientPoint(MarkedPoint(schema.label, tuple(schema.quotient_type)), schema.exceptional_prefix)


def table_matrix(table: TableSchema) -> RationalMatrix:
    return RationalMatrix.from_rows(table.matrix)


def curve_records(section: CurvesSection) -> Tuple[CurveRecord, ...]:
    """Records in the order of the intersection table"""
    by_label = {record.label: _record(record) for record in section.records}
    return tuple(by_label[label] for label in section.table.labels)


def quotient_setup(schema: QuotientSchema, section: CurvesSection) -> CyclicQuotientSetup:
    records = {record.label: record for record in curve_records(section)}
    table = table_matrix(section.table)
    indices = [section.table.labels.index(label) for label in schema.curves]
    return CyclicQuotientSetup(
        name=schema.name,
        order=schema.order,
        points=tuple(_quotient_point(point) for point in schema.points),
        curves=tuple(records[label] for label in schema.curves),
        source_gram=table.submatrix(indices),
        canonical=parse_combination(schema.canonical) if schema.canonical else {},
    )


def standalone_setup(schema: QuotientSetupSchema) -> CyclicQuotientSetup:
    """Setup for the quotient subcommand: curves and table travel together"""
    records = {record.label: _record(record) for record in schema.curves}
    missing = [label for label in schema.table.labels if label not in records]
    if missing or len(schema.table.labels) != len(records):
        raise ScenarioValidationError("table.labels", "table labels must be exactly the curve labels")
    return CyclicQuotientSetup(
        name=schema.name,
        order=schema.order,
        points=tuple(_quotient_point(point) for point in schema.points),
        curves=tuple(records[label] for label in schema.table.labels),
        source_gram=table_matrix(schema.table),
        canonical=parse_combination(schema.canonical) if schema.canonical else {},
    )


def involution_spec(schema: InvolutionSchema) -> InvolutionSpec:
    return InvolutionSpec(
        swaps=tuple(tuple(pair_) for pair_ in schema.swaps),
        fixed_labels=tuple(schema.fixed_labels),
        chain_orbit_pairs=tuple((tuple(left), tuple(right)) for left, right in schema.chain_orbit_pairs),
        image_labels=dict(schema.image_labels),
    )


def surface_lattice(schema: LatticeSchema, section: CurvesSection) -> IntersectionLattice:
    """The Neron-Severi lattice with every tabulated curve, named class and K registered"""
    lattice = lattice_from_rows(schema.name, schema.basis, schema.gram)
    table = section.table
    table_index = {label: i for i, label in enumerate(table.labels)}
    for label in table.labels:
        if lattice.has_label(label):
            continue
        row = table_index[label]
        embed_by_pairings(lattice, label, [table.matrix[row][table_index[b]] for b in lattice.basis])
    for name, text in section.named_classes.items():
        register_class(lattice, name, class_from_combination(lattice, text))
    register_class(lattice, CANONICAL_LABEL, class_from_combination(lattice, section.canonical))
    return lattice


def _requirements_text(requirements: FixedLocusRequirements) -> List[str]:
    return [
        f"e(fixed locus) = {requirements.e_fixed}",
        f"sum A_i^2 = {requirements.sum_self_intersection}",
        f"sum K.A_i = {requirements.canonical_degree}",
    ]


# ---------------------------------------------------------------------------
# Pipeline
# ---------------------------------------------------------------------------

class ReplayPipeline:
    """Runs the assertions a scenario lists, in dependency order"""

    def __init__(self, scenario: ScenarioSchema):
        self.scenario = scenario
        self._artifacts: Dict[str, Tuple[Any, Optional[WorkbenchError]]] = {}
        self._cases: List[CaseEntry] = []
        self._notes: List[str] = []

    # -- artifacts ----------------------------------------------------------

    def artifact(self, name: str) -> Any:
        if name not in self._artifacts:
            try:
                self._artifacts[name] = (getattr(self, f"_build_{name}")(), None)
            except WorkbenchError as exc:
                logger.debug("Artifact %s failed: %s", name, exc.message, extra={"scenario": self.scenario.name})
                self._artifacts[name] = (None, exc)
        value, error = self._artifacts[name]
        if error is not None:
            raise error
        return value

    def note(self, text: str) -> None:
        self._notes.append(text)

    def _surface(self, label: str):
        if label not in self.scenario.surfaces:
            raise DomainError(f"Scenario has no surface invariants for {label}")
        return self.scenario.surfaces[label]

    def _quotient_schema(self) -> QuotientSchema:
        if not self.scenario.quotients:
            raise DomainError("Scenario defines no quotient")
        return self.scenario.quotients[0]

    def _involution_schema(self) -> InvolutionSchema:
        if not self.scenario.involutions:
            raise DomainError("Scenario defines no involution")
        return self.scenario.involutions[0]

    def _build_records(self) -> Tuple[CurveRecord, ...]:
        return curve_records(self.scenario.curves)

    def _build_table(self) -> RationalMatrix:
        return table_matrix(self.scenario.curves.table)

    def _build_extras(self):
        return curves.parse_extras(self.scenario.curves.extra_meetings)

    def _build_nsx(self) -> IntersectionLattice:
        return surface_lattice(self.scenario.lattices[0], self.scenario.curves)

    def _build_search(self):
        search = self.scenario.search
        return class_search.enumerate_classes(SearchProblem(self.artifact("nsx"), search.kd, search.d2))

    def _build_search_pair(self) -> Tuple[DivisorClass, DivisorClass]:
        solutions = self.artifact("search")
        if len(solutions) != 2:
            raise DomainError(f"Expected exactly two classes from the search, found {len(solutions)}")
        return solutions[0].divisor, solutions[1].divisor

    def _build_quotient(self) -> QuotientLattice:
        return quotient.build_quotient_lattice(quotient_setup(self._quotient_schema(), self.scenario.curves))

    def _build_canonical_y(self) -> DivisorClass:
        q = self.artifact("quotient")
        return register_class(q.lattice, CANONICAL_LABEL, quotient.canonical_on_resolution(q))

    def _build_nsy(self) -> IntersectionLattice:
        self.artifact("canonical_y")
        schema = self._quotient_schema()
        return restrict_lattice(self.artifact("quotient").lattice, schema.reduced_basis, f"NS({schema.name})")

    def _build_fibre(self) -> DivisorClass:
        schema = self._quotient_schema()
        if not schema.fibre:
            raise DomainError(f"Quotient {schema.name} names no fibre class")
        return quotient.pullback(self.artifact("quotient"), schema.fibre)

    def _build_involution(self) -> InvolutionSpec:
        return involution_spec(self._involution_schema())

    def _build_candidates(self):
        return lefschetz.alpha_c1_candidates(
            self.artifact("nsy"), self.artifact("involution"), self.scenario.lefschetz.c1_label
        )

    def _build_actions(self):
        nsy = self.artifact("nsy")
        spec = self.artifact("involution")
        c1_label = self.scenario.lefschetz.c1_label
        return [
            lefschetz.build_action(nsy, spec, candidate, c1_label)
            for candidate in self.artifact("candidates").candidates
        ]

    def _action_with_trace(self, value: int):
        for action in self.artifact("actions"):
            if lefschetz.trace(action) == value:
                return action
        raise DomainError(f"No candidate action has trace {value}")

    def _build_free_quotient(self) -> IntersectionLattice:
        schema = self._involution_schema()
        self.artifact("canonical_y")
        z = quotient.free_involution_quotient(self.artifact("quotient").lattice, self.artifact("involution"), schema.name)
        if schema.canonical:
            register_class(z, CANONICAL_LABEL, class_from_combination(z, schema.canonical))
        return z

    def _build_y_genera(self) -> Dict[str, int]:
        """Geometric genus of every generator of the resolved quotient"""
        q = self.artifact("quotient")
        genera = {label: 0 for label in q.exceptional_labels}
        for record in q.setup.curves:
            genera[q.transform_of(record.label)] = quotient.quotient_genus(
                record.genus, q.setup.order, record.branch_count
            )
        return genera

    def _build_contradiction_class(self) -> DivisorClass:
        source = self.scenario.lefschetz.contradiction_source
        if not source:
            raise DomainError("Scenario names no contradiction class")
        q = self.artifact("quotient")
        return quotient.pullback(q, quotient.pushforward(q, source))

    def _build_contradiction_on_nsy(self) -> DivisorClass:
        v = self.artifact("contradiction_class")
        nsy = self.artifact("nsy")
        return coords_from_pairings(nsy, [pair(v, v.lattice.generator(label)) for label in nsy.basis])

    def _fixed_branches(self, requirements: FixedLocusRequirements):
        section = self.scenario.lefschetz
        return [
            lefschetz.fixed_curve_class_solve(
                self.artifact("nsy"),
                [target] * len(section.test_curves),
                requirements.sum_self_intersection,
                include_c1=True,
                ansatz=section.ansatz,
                test_curves=section.test_curves,
                c1_label=section.c1_label,
            )
            for target in section.target_branches
        ]

    def _fixed_c1_case(self, h20_sign: int):
        """Requirements, branch solutions and surviving hypothesis when alpha fixes C1'"""
        trace_value = lefschetz.trace(self._action_with_trace(0))
        e_fixed = lefschetz.topological_constraint(trace_value, h20_sign)
        requirements = lefschetz.fixed_locus_requirements(e_fixed, h20_sign)
        branches = self._fixed_branches(requirements)
        outcome = lefschetz.fixed_locus_outcome(requirements, branches)

        certificates = []
        for target, branch in zip(self.scenario.lefschetz.target_branches, branches):
            text = f"pairings {target}: {branch.kind}"
            if branch.classes:
                text += " (" + ", ".join(cls.render() for cls in branch.classes) + ")"
            if branch.discriminant is not None and branch.kind == "none":
                text += f", discriminant {format_rational(branch.discriminant)} not a square"
            certificates.append(text)
        if outcome is None:
            verdict = "eliminated"
        else:
            verdict = f"fixed locus of {2 * outcome.isolated_pairs} points and {len(outcome.curves)} curves"
        self._cases.append(CaseEntry(
            case=f"alpha(C1') = C1', alpha = {h20_sign:+d} on H^2(O)",
            constraints=_requirements_text(requirements),
            outcome=verdict,
            certificate="; ".join(certificates),
        ))
        return requirements, branches, outcome

    def _build_fixed_c1_minus(self):
        return self._fixed_c1_case(-1)

    def _build_fixed_c1_plus(self):
        return self._fixed_c1_case(1)

    def _moved_requirements(self, h20_sign: int) -> FixedLocusRequirements:
        trace_value = lefschetz.trace(self._action_with_trace(-2))
        return lefschetz.fixed_locus_requirements(lefschetz.topological_constraint(trace_value, h20_sign), h20_sign)

    def _determinant_blocks(self) -> List[Tuple[RationalMatrix, Tuple[int, int]]]:
        section = self.scenario.lefschetz
        if section.determinant_blocks:
            return [
                (RationalMatrix.from_rows(block.matrix), (block.per_m, block.constant))
                for block in section.determinant_blocks
            ]
        z = self.artifact("free_quotient")
        spec = self.artifact("involution")
        blocks = [(RationalMatrix.from_rows([[-2]]), (2, 0))]
        for left, right in spec.chain_orbit_pairs:
            images = [spec.image_name(a, b) for a, b in zip(left, right)]
            blocks.append((z.gram.submatrix([z.index(label) for label in images]), (0, 1)))
        curves_block = z.gram.submatrix([z.index(label) for label in section.determinant_curves])
        blocks.append((curves_block, (0, 1)))
        return blocks

    def _build_moved_c1_minus(self):
        requirements = self._moved_requirements(-1)
        verdict = lefschetz.nonsquare_determinant_obstruction(self._determinant_blocks())
        invariants = lefschetz.resolved_quotient_invariants(
            self._noether("Y").e, requirements.e_fixed, 1
        )
        self._cases.append(CaseEntry(
            case="alpha(C1') moved, alpha = -1 on H^2(O)",
            constraints=_requirements_text(requirements) + [
                f"e = {invariants.e}", f"K^2 = {invariants.K2}", f"b2 = {invariants.b2}",
            ],
            outcome="eliminated" if verdict.never_square else "open",
            certificate=f"|det| = {verdict.describe()}"
            + (f", odd constant exponent of {verdict.certificate_prime}" if verdict.never_square else ""),
        ))
        return requirements, verdict, invariants

    def _build_moved_c1_plus(self):
        section = self.scenario.lefschetz
        requirements = self._moved_requirements(1)
        offset = int(requirements.canonical_degree.subs(lefschetz.M, 0))
        reduced = lefschetz.reduce_with_canonical_degree(
            self.artifact("nsy"),
            self.artifact("nsy").class_of(CANONICAL_LABEL),
            requirements.sum_self_intersection,
            offset,
            section.ansatz,
        )
        modular = lefschetz.modular_nonsolvability(reduced, settings.certificate_modulus)
        self._cases.append(CaseEntry(
            case="alpha(C1') moved, alpha = +1 on H^2(O)",
            constraints=_requirements_text(requirements) + [f"{reduced} = 0"],
            outcome="eliminated" if not modular.solvable else "open",
            certificate=modular.describe(),
        ))
        return requirements, reduced, modular

    def _noether(self, label: str):
        surface = self._surface(label)
        return quotient.noether_invariants(surface.K2, surface.chi, surface.q, surface.pg)

    def contradiction_pairing(self) -> Fraction:
        """Pairing of the pulled-back class with its image under the trace-0 action"""
        v = self.artifact("contradiction_on_nsy")
        return pair(v, lefschetz.apply_action(self._action_with_trace(0), v))

    # -- checks: curves -----------------------------------------------------

    @step("curves.table-reproduction", "Genus and multiplicity data reproduce the curve intersection table")
    def check_table_reproduction(self):
        report = curves.verify_table(self.artifact("records"), self.artifact("table"), self.artifact("extras"))
        for mismatch in report.mismatches:
            self.note(mismatch.describe())
        return len(report.mismatches)

    @step("curves.derived-entries", "Entries needing no extra meetings or nodes match [matched, derived]")
    def check_derived_entries(self):
        records = self.artifact("records")
        table = self.artifact("table")
        extras = self.artifact("extras")
        derived = matched = 0
        for i, left in enumerate(records):
            for j in range(i, len(records)):
                right = records[j]
                if i == j:
                    if left.extra_nodes:
                        continue
                    computed = curves.self_intersection(left)
                else:
                    if extras.get(curves.extras_key(left.label, right.label), 0):
                        continue
                    computed = curves.cross_intersection(left, right)
                derived += 1
                matched += computed == table[i, j]
        return [matched, derived]

    @step("curves.arithmetic-genera", "Adjunction p_a of every tabulated curve")
    def check_arithmetic_genera(self):
        return [
            curves.arithmetic_genus(curves.self_intersection(record), curves.canonical_degree(record))
            for record in self.artifact("records")
        ]

    @step("curves.genus-consistency", "p_a = g + delta for every tabulated curve")
    def check_genus_consistency(self):
        return all(curves.genus_consistent(record) for record in self.artifact("records"))

    @step("curves.canonical-degrees", "K.C = 3g - 3 for every totally geodesic curve")
    def check_canonical_degrees(self):
        return [curves.canonical_degree(record) for record in self.artifact("records")]

    @step("curves.canonical-row", "The canonical curve's table row equals the canonical degrees")
    def check_canonical_row(self):
        section = self.scenario.curves
        terms = parse_combination(section.canonical)
        table = self.artifact("table")
        labels = section.table.labels
        row = [
            sum((c * table[labels.index(label), j] for label, c in terms.items()), Fraction(0))
            for j in range(len(labels))
        ]
        return row == [curves.canonical_degree(record) for record in self.artifact("records")]

    # -- checks: NS(X) -------------------------------------------------------

    @step("nsx.determinant", "Determinant of the Neron-Severi Gram matrix")
    def check_nsx_determinant(self):
        return determinant(self.artifact("nsx").gram)

    @step("nsx.embedding", "Curves embedded by their pairings reproduce the whole table")
    def check_nsx_embedding(self):
        section = self.scenario.curves
        mismatches = compare_gram(self.artifact("nsx"), section.table.labels, self.artifact("table"))
        for mismatch in mismatches:
            self.note(mismatch.describe())
        return len(mismatches)

    @step("nsx.equivalences", "Stated numerical equivalences hold on the surface")
    def check_nsx_equivalences(self):
        report = quotient.verify_equivalences(
            self.artifact("nsx"), equivalence_pairs(self.scenario.curves.equivalences)
        )
        for failure in report.failures:
            self.note(f"{failure.lhs} != {failure.rhs}")
        return report.all_hold

    @step("albanese.fibre", "Albanese fibre class: [F^2, K.F, p_a(F)]")
    def check_albanese_fibre(self):
        nsx = self.artifact("nsx")
        fibre = nsx.class_of("F")
        canonical = nsx.class_of(CANONICAL_LABEL)
        square, degree = pair(fibre, fibre), pair(canonical, fibre)
        return [square, degree, curves.arithmetic_genus(square, degree)]

    # -- checks: Reider and the class search ----------------------------------

    def _reider(self, part: str):
        return class_search.reider_survivors(class_search.reider_cases(self._surface("X").K2, part))

    @step("reider.survivors", "Separation cases with an integral genus >= 2 when L = K")
    def check_reider_survivors(self):
        return [case.name for case, _ in self._reider(class_search.SEPARATION)]

    @step("reider.basepoint-free", "Base-point cases surviving the genus bound")
    def check_reider_basepoint(self):
        return [case.name for case, _ in self._reider(class_search.BASEPOINT)]

    @step("reider.case-2d", "The 3B case needs an argument beyond intersection numbers")
    def check_reider_case_2d(self):
        nsx = self.artifact("nsx")
        third = nsx.class_of(CANONICAL_LABEL) / 3
        pairings = [pair(third, nsx.class_of(label)) for label in self.scenario.curves.table.labels]
        self.note("K/3 pairs integrally with every tabulated curve, so numerics alone keep it")
        return all(value.denominator == 1 for value in pairings)

    @step("reider.genus", "Arithmetic genus of a curve with K.B = 2 and B^2 = 0")
    def check_reider_genus(self):
        search = self.scenario.search
        return curves.arithmetic_genus(search.d2, search.kd)

    @step("reider.smoothness", "Such a curve is smooth")
    def check_reider_smoothness(self):
        return "non-numerical"

    @step("search.enumeration", "Pairing triples (D.E1, D.E3, D.C1) of all classes found")
    def check_search_enumeration(self):
        return [list(solution.triple) for solution in self.artifact("search")]

    @step("search.classes", "Coordinates of the classes found in the lattice basis")
    def check_search_classes(self):
        return [list(solution.divisor.coords) for solution in self.artifact("search")]

    @step("search.oracle", "Box search agrees with the two-squares enumeration")
    def check_search_oracle(self):
        search = self.scenario.search
        problem = SearchProblem(self.artifact("nsx"), search.kd, search.d2)
        oracle = class_search.brute_force_classes(problem, settings.oracle_box_radius)
        return oracle == [solution.triple for solution in self.artifact("search")]

    def _profile(self, d: DivisorClass, labels: Sequence[str]):
        nsx = self.artifact("nsx")
        return class_search.pairing_profile(d, [nsx.class_of(label) for label in labels])

    @step("search.profile-first", "Pairings of the first class with the profile curves")
    def check_profile_first(self):
        return self._profile(self.artifact("search_pair")[0], self.scenario.search.profile)

    @step("search.profile-second", "Pairings of the second class with the profile curves")
    def check_profile_second(self):
        return self._profile(self.artifact("search_pair")[1], self.scenario.search.profile)

    @step("search.pairing", "Pairing of the two classes")
    def check_search_pairing(self):
        first, second = self.artifact("search_pair")
        return pair(first, second)

    @step("search.integrality", "The two classes cannot both be integral")
    def check_search_integrality(self):
        first, second = self.artifact("search_pair")
        return class_search.integrality_obstruction(first, second).obstructed

    @step("search.relabeling", "Swapping indistinguishable curves exchanges the two profiles")
    def check_search_relabeling(self):
        first, second = self.artifact("search_pair")
        swap = {}
        for a, b in self.scenario.search.relabel:
            swap[a], swap[b] = b, a
        labels = self.scenario.search.profile
        relabeled = [swap.get(label, label) for label in labels]
        return (
            self._profile(second, relabeled) == self._profile(first, labels)
            and self._profile(first, relabeled) == self._profile(second, labels)
        )

    @step("search.naming", "The curve paired to zero is named C1 by convention")
    def check_search_naming(self):
        nsx = self.artifact("nsx")
        return pair(self.artifact("search_pair")[0], nsx.class_of("C1"))

    @step("orbit.disjointness", "Automorphism images of the curve are disjoint from it")
    def check_orbit_disjointness(self):
        first = self.artifact("search_pair")[0]
        return pair(first, first)

    # -- checks: cyclic quotient ----------------------------------------------

    @step("quotient.hj-chains", "Self-intersections of the resolution chains, one per singularity type")
    def check_hj_chains(self):
        seen = []
        for point in self._quotient_schema().points:
            chain = list(quotient.hj_chain(*point.quotient_type).self_intersections)
            if chain not in seen:
                seen.append(chain)
        return seen

    @step("quotient.singular-canonical-square", "[K^2 / d, square of the pulled-back canonical class]")
    def check_singular_canonical_square(self):
        q = self.artifact("quotient")
        pulled = quotient.pullback(q, q.setup.canonical)
        return [quotient.quotient_canonical_square(self._surface("X").K2, q.setup.order), pair(pulled, pulled)]

    @step("quotient.table", "Divisibility rule reproduces the resolved quotient table")
    def check_quotient_table(self):
        schema = self._quotient_schema()
        if schema.expected is None:
            raise DomainError(f"Quotient {schema.name} has no expected table")
        mismatches = compare_gram(self.artifact("quotient").lattice, schema.expected.labels, table_matrix(schema.expected))
        for mismatch in mismatches:
            self.note(mismatch.describe())
        return len(mismatches)

    @step("quotient.genera", "Riemann-Hurwitz genera of the curve images")
    def check_quotient_genera(self):
        genera = self.artifact("y_genera")
        q = self.artifact("quotient")
        return [genera[q.transform_of(record.label)] for record in q.setup.curves]

    @step("quotient.canonical-class", "Canonical class of the resolution")
    def check_canonical_class(self):
        return self.artifact("canonical_y")

    @step("quotient.canonical-square", "K^2 of the resolution")
    def check_canonical_square(self):
        canonical = self.artifact("canonical_y")
        return pair(canonical, canonical)

    def _y_arithmetic_genus(self, label: str) -> Fraction:
        lattice = self.artifact("quotient").lattice
        curve = lattice.generator(label)
        return curves.arithmetic_genus(pair(curve, curve), pair(self.artifact("canonical_y"), curve))

    @step("quotient.arithmetic-genera", "Adjunction p_a of the tabulated curves on the resolution")
    def check_quotient_arithmetic_genera(self):
        schema = self._quotient_schema()
        labels = schema.expected.labels if schema.expected else self.artifact("quotient").lattice.basis
        return [self._y_arithmetic_genus(label) for label in labels]

    @step("quotient.adjunction", "Every generator has integral p_a at least its geometric genus; chains are rational")
    def check_quotient_adjunction(self):
        genera = self.artifact("y_genera")
        ok = True
        for label, genus in genera.items():
            p_a = self._y_arithmetic_genus(label)
            if p_a.denominator != 1 or p_a < genus:
                self.note(f"p_a({label}) = {format_rational(p_a)}")
                ok = False
        exceptional = self.artifact("quotient").exceptional_labels
        return ok and all(self._y_arithmetic_genus(label) == 0 for label in exceptional)

    @step("quotient.equivalences", "Stated numerical equivalences hold on the resolution")
    def check_quotient_equivalences(self):
        self.artifact("canonical_y")
        report = quotient.verify_equivalences(
            self.artifact("quotient").lattice, equivalence_pairs(self._quotient_schema().equivalences)
        )
        for failure in report.failures:
            self.note(f"{failure.lhs} != {failure.rhs}")
        return report.all_hold

    @step("quotient.projection-formula", "Pullbacks of image curves pair as (A.B)/d")
    def check_projection_formula(self):
        failures = quotient.projection_formula_holds(self.artifact("quotient"))
        for left, right in failures:
            self.note(f"{left}.{right}")
        return not failures

    @step("fibre.pullback", "Pullback of the Albanese fibre image")
    def check_fibre_pullback(self):
        return self.artifact("fibre")

    @step("fibre.invariants", "[F'^2, K.F', p_a(F')]")
    def check_fibre_invariants(self):
        fibre = self.artifact("fibre")
        square, degree = pair(fibre, fibre), pair(self.artifact("canonical_y"), fibre)
        return [square, degree, curves.arithmetic_genus(square, degree)]

    @step("fibre.exceptional-orthogonal", "The pulled-back fibre misses every exceptional curve")
    def check_fibre_orthogonal(self):
        return not quotient.exceptional_orthogonality(self.artifact("fibre"), self.artifact("quotient"))

    @step("fibre.reducible-fibres", "F' minus each exceptional configuration is divisible by 3 numerically")
    def check_reducible_fibres(self):
        q = self.artifact("quotient")
        fibre = self.artifact("fibre")
        results = []
        for text in self._quotient_schema().reducible_fibres:
            residual = (fibre - class_from_combination(q.lattice, text)) / q.setup.order
            pairings = [pair(residual, q.lattice.generator(label)) for label in q.lattice.basis]
            results.append(all(value.denominator == 1 for value in pairings))
        return results

    # -- checks: Noether ------------------------------------------------------

    @step("noether.X", "[e, b2, h11] of the surface")
    def check_noether_x(self):
        n = self._noether("X")
        return [n.e, n.b2, n.h11]

    @step("noether.Y", "[e, b2, h11] of the resolved quotient")
    def check_noether_y(self):
        n = self._noether("Y")
        return [n.e, n.b2, n.h11]

    @step("noether.Z", "[e, b2, h11] of the free quotient")
    def check_noether_z(self):
        n = self._noether("Z")
        return [n.e, n.b2, n.h11]

    @step("noether.free-quotient", "e and K^2 halve under the free involution")
    def check_noether_free(self):
        y, z = self._surface("Y"), self._surface("Z")
        return self._noether("Y").e == 2 * self._noether("Z").e and y.K2 == 2 * z.K2

    # -- checks: the involution on NS(Y) ----------------------------------------

    @step("nsy.rank", "Rank of the reduced Neron-Severi lattice")
    def check_nsy_rank(self):
        nsy = self.artifact("nsy")
        nondegenerate = rank(nsy.gram)
        if nondegenerate != nsy.rank:
            raise DomainError(f"{nsy.name} basis is degenerate: Gram rank {nondegenerate} of {nsy.rank}")
        return nondegenerate

    @step("involution.c1-quadratic", "Square of the C1' image along the admissible family, coefficients in x")
    def check_c1_quadratic(self):
        candidates = self.artifact("candidates")
        return sympy.Poly(candidates.quadratic, candidates.parameter).all_coeffs()

    @step("involution.c1-candidates", "Admissible images of C1'")
    def check_c1_candidates(self):
        return list(self.artifact("candidates").candidates)

    @step("lefschetz.traces", "Trace of each candidate action on NS")
    def check_traces(self):
        return [lefschetz.trace(action) for action in self.artifact("actions")]

    @step("lefschetz.euler-fixed", "Euler number of the fixed locus for each trace and sign on H^2(O)")
    def check_euler_fixed(self):
        values = []
        for action in self.artifact("actions"):
            for sign in (-1, 1):
                values.append(lefschetz.topological_constraint(lefschetz.trace(action), sign))
        return values

    # -- checks: alpha moves C1' --------------------------------------------------

    @step("moved-c1.minus.requirements", "[e, sum A^2, sum K.A] with alpha = -1 on H^2(O)")
    def check_moved_minus_requirements(self):
        requirements = self._moved_requirements(-1)
        return [requirements.e_fixed, requirements.sum_self_intersection, requirements.canonical_degree]

    @step("moved-c1.minus.determinant", "|det| of the curve configuration on the quotient")
    def check_moved_minus_determinant(self):
        return self.artifact("moved_c1_minus")[1].describe()

    @step("moved-c1.minus.never-square", "The determinant is never a square, so the lattice is not unimodular")
    def check_moved_minus_never_square(self):
        return self.artifact("moved_c1_minus")[1].never_square

    @step("moved-c1.minus.sample", "[|det| at m = 2, its square root if any]")
    def check_moved_minus_sample(self):
        value = self.artifact("moved_c1_minus")[1].evaluate(2)
        return [value, is_perfect_square(value)]

    @step("moved-c1.minus.rank", "[b2 of the quotient, number of curves in the configuration]")
    def check_moved_minus_rank(self):
        invariants = self.artifact("moved_c1_minus")[2]
        spec = self.artifact("involution")
        count = 2 * lefschetz.M + sum(len(left) for left, _ in spec.chain_orbit_pairs)
        count += len(self.scenario.lefschetz.determinant_curves)
        return [invariants.b2, sympy.expand(count)]

    @step("moved-c1.plus.requirements", "[e, sum A^2, sum K.A] with alpha = +1 on H^2(O)")
    def check_moved_plus_requirements(self):
        requirements = self._moved_requirements(1)
        return [requirements.e_fixed, requirements.sum_self_intersection, requirements.canonical_degree]

    @step("moved-c1.plus.reduction", "Eliminating the ansatz gives the stated Diophantine equation")
    def check_moved_plus_reduction(self):
        reduced = self.artifact("moved_c1_plus")[1]
        target = lefschetz.parse_equation(self.scenario.lefschetz.case2_equation)
        self.note(f"{reduced} = 0")
        return sympy.expand(reduced - target) == 0

    @step("moved-c1.plus.modular", "Residue search certifies the equation has no integer solution")
    def check_moved_plus_modular(self):
        return self.artifact("moved_c1_plus")[2].describe()

    @step("moved-c1.plus.search", "Integer solutions found in the search box")
    def check_moved_plus_search(self):
        return len(lefschetz.integer_search(self.artifact("moved_c1_plus")[1], settings.brute_force_bound))

    # -- checks: alpha fixes C1' --------------------------------------------------

    @step("fixed-c1.minus.requirements", "[e, sum A^2, sum K.A] with alpha = -1 on H^2(O)")
    def check_fixed_minus_requirements(self):
        requirements = self.artifact("fixed_c1_minus")[0]
        return [requirements.e_fixed, requirements.sum_self_intersection, requirements.canonical_degree]

    @step("fixed-c1.minus.fixed-curves", "Fixed-curve classes per target pairing")
    def check_fixed_minus_curves(self):
        return [[branch.kind, list(branch.classes)] for branch in self.artifact("fixed_c1_minus")[1]]

    @step("fixed-c1.minus.fixed-locus", "[isolated point pairs, fixed curves] that survive")
    def check_fixed_minus_locus(self):
        outcome = self.artifact("fixed_c1_minus")[2]
        if outcome is None:
            return "eliminated"
        return [outcome.isolated_pairs, len(outcome.curves)]

    @step("fixed-c1.plus.requirements", "[e, sum A^2, sum K.A] with alpha = +1 on H^2(O)")
    def check_fixed_plus_requirements(self):
        requirements = self.artifact("fixed_c1_plus")[0]
        return [requirements.e_fixed, requirements.sum_self_intersection, requirements.canonical_degree]

    @step("fixed-c1.plus.fixed-curves", "Fixed-curve classes per target pairing")
    def check_fixed_plus_curves(self):
        return [[branch.kind, list(branch.classes)] for branch in self.artifact("fixed_c1_plus")[1]]

    @step("fixed-c1.plus.fixed-locus", "[isolated point pairs, fixed curves] that survive")
    def check_fixed_plus_locus(self):
        outcome = self.artifact("fixed_c1_plus")[2]
        if outcome is None:
            return "eliminated"
        return [outcome.isolated_pairs, len(outcome.curves)]

    # -- checks: the contradiction ----------------------------------------------

    @step("contradiction.representative", "The chosen representative is numerically the surviving class")
    def check_contradiction_representative(self):
        nsx = self.artifact("nsx")
        source = class_from_combination(nsx, self.scenario.lefschetz.contradiction_source)
        return numerically_equal(self.artifact("search_pair")[0], source)

    @step("contradiction.pullback", "Pullback of the pushed-forward curve class")
    def check_contradiction_pullback(self):
        return self.artifact("contradiction_class")

    @step("contradiction.self-pairing", "Square of the pulled-back class")
    def check_contradiction_self_pairing(self):
        v = self.artifact("contradiction_class")
        return pair(v, v)

    @step("contradiction.pairing", "Pairing of the pulled-back class with its involution image")
    def check_contradiction_pairing(self):
        return self.contradiction_pairing()

    @step("contradiction.nonintegral", "That pairing is not an integer")
    def check_contradiction_nonintegral(self):
        v = self.artifact("contradiction_on_nsy")
        image = lefschetz.apply_action(self._action_with_trace(0), v)
        return class_search.integrality_obstruction(v, image).obstructed

    @step("contradiction.involution-symmetry", "The action squares to the identity on the class")
    def check_contradiction_symmetry(self):
        action = self._action_with_trace(0)
        v = self.artifact("contradiction_on_nsy")
        image = lefschetz.apply_action(action, v)
        return lefschetz.apply_action(action, image) == v and pair(image, v) == pair(v, image)

    # -- checks: free quotient ----------------------------------------------------

    @step("free-quotient.table", "Orbit pairings reproduce the free quotient table")
    def check_free_table(self):
        schema = self._involution_schema()
        if schema.expected is None:
            raise DomainError(f"Involution {schema.name} has no expected table")
        mismatches = compare_gram(self.artifact("free_quotient"), schema.expected.labels, table_matrix(schema.expected))
        for mismatch in mismatches:
            self.note(mismatch.describe())
        return len(mismatches)

    @step("free-quotient.determinant", "Determinant of the generating curves of the free quotient")
    def check_free_determinant(self):
        z = self.artifact("free_quotient")
        indices = [z.index(label) for label in self._involution_schema().determinant_basis]
        return determinant(z.gram.submatrix(indices))

    @step("free-quotient.equivalences", "Stated numerical equivalences hold on the free quotient")
    def check_free_equivalences(self):
        report = quotient.verify_equivalences(
            self.artifact("free_quotient"), equivalence_pairs(self._involution_schema().equivalences)
        )
        for failure in report.failures:
            self.note(f"{failure.lhs} != {failure.rhs}")
        return report.all_hold

    @step("free-quotient.canonical-square", "K^2 of the free quotient")
    def check_free_canonical_square(self):
        canonical = self.artifact("free_quotient").class_of(CANONICAL_LABEL)
        return pair(canonical, canonical)

    def _z_arithmetic_genera(self) -> List[Tuple[str, Fraction]]:
        z = self.artifact("free_quotient")
        schema = self._involution_schema()
        labels = schema.expected.labels if schema.expected else z.basis
        canonical = z.class_of(CANONICAL_LABEL)
        result = []
        for label in labels:
            curve = z.generator(label)
            result.append((label, curves.arithmetic_genus(pair(curve, curve), pair(canonical, curve))))
        return result

    @step("free-quotient.arithmetic-genera", "Adjunction p_a of the tabulated image curves")
    def check_free_arithmetic_genera(self):
        return [p_a for _, p_a in self._z_arithmetic_genera()]

    @step("free-quotient.nodes", "Nodes of each image curve: p_a minus its geometric genus")
    def check_free_nodes(self):
        spec = self.artifact("involution")
        genera = self.artifact("y_genera")
        orbit_genus = {}
        for image, members in spec.orbits():
            genus = genera[members[0]]
            orbit_genus[image] = genus if len(members) == 2 else quotient.quotient_genus(genus, 2, 0)
        return [curves.node_count(p_a, orbit_genus[label]) for label, p_a in self._z_arithmetic_genera()]

    @step("free-quotient.moved-c1-block", "Determinant of the block the moved-C1' case relies on")
    def check_free_block(self):
        z = self.artifact("free_quotient")
        labels = self.scenario.lefschetz.determinant_curves
        return determinant(z.gram.submatrix([z.index(label) for label in labels]))

    # -- driver -------------------------------------------------------------------

    def run(self) -> ReplayReport:
        requested = {assertion.id: assertion.expected for assertion in self.scenario.assertions}
        results = []
        logger.info(
            "Replaying %s with %d assertions", self.scenario.name, len(requested),
            extra={"scenario": self.scenario.name, "operation": "replay"},
        )
        for assertion_id, (description, check) in STEPS.items():
            if assertion_id not in requested:
                continue
            expected = requested[assertion_id]
            self._notes = []
            started = time.perf_counter()
            try:
                computed_text, expected_text, status = judge(check(self), expected)
            except (WorkbenchError, ArithmeticError) as exc:
                message = exc.message if isinstance(exc, WorkbenchError) else str(exc)
                computed_text = f"error: {message}"
                expected_text = expected if expected in PREDICATES else render_value(expected)
                status = AssertionStatus.FAIL
            status = AssertionStatus(status)
            log_assertion(
                logger, self.scenario.name, assertion_id, status.value,
                (time.perf_counter() - started) * 1000,
            )
            if self._notes:
                description = f"{description} ({'; '.join(self._notes)})"
            results.append(AssertionResult(
                id=assertion_id,
                description=description,
                computed=computed_text,
                expected=expected_text,
                status=status,
            ))
        overall = overall_status([result.status for result in results])
        logger.info(
            "Replay of %s finished: %s", self.scenario.name, overall.value,
            extra={"scenario": self.scenario.name, "status": overall.value},
        )
        return ReplayReport(
            scenario=self.scenario.name,
            overall=overall,
            assertions=results,
            cases=[CaseEntrySchema.model_validate(case) for case in self._cases],
        )


def _as_scenario(source: Union[str, Path, ScenarioSchema]) -> ScenarioSchema:
    if isinstance(source, ScenarioSchema):
        validate_scenario(source)
        return source
    return load_scenario(source)


def run_scenario(source: Union[str, Path, ScenarioSchema]) -> ReplayReport:
    return ReplayPipeline(_as_scenario(source)).run()


def contradiction_pairing(source: Union[str, Path, ScenarioSchema]) -> Fraction:
    """Pairing of the pulled-back class with its image under the accepted involution"""
    return ReplayPipeline(_as_scenario(source)).contradiction_pairing()
