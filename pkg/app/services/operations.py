"""
Request-level operations shared by the command line and the HTTP API.
"""
from app.core.logging_config import get_logger
from app.models.lefschetz import FixedLocusHypothesis
from app.models.matrix import format_rational
from app.models.search import SearchProblem
from app.schemas.report import (
    CaseEntrySchema,
    HJChainResponse,
    LatticeExport,
    LefschetzResponse,
    SearchResponse,
    SearchSolutionSchema,
)
from app.schemas.scenario import LefschetzCaseSchema, QuotientSetupSchema
from app.services import class_search, lefschetz, quotient
from app.services.lattice import cartwright_steger_lattice, register_class
from app.services.replay import CANONICAL_LABEL, standalone_setup
from app.services.report import export_lattice

logger = get_logger("services.operations")


def search_classes(kd: int, d2: int) -> SearchResponse:
    """Classes on the built-in NS(X) with K.D = kd and D^2 = d2"""
    solutions = class_search.enumerate_classes(SearchProblem(cartwright_steger_lattice(), kd, d2))
    return SearchResponse(
        kd=kd,
        d2=d2,
        solutions=[
            SearchSolutionSchema(
                a=solution.a,
                b=solution.b,
                c=solution.c,
                s=solution.s,
                coords=list(solution.divisor.coords),
                combination=solution.divisor.render(),
            )
            for solution in solutions
        ],
    )


def hj_response(n: int, a: int) -> HJChainResponse:
    chain = quotient.hj_chain(n, a)
    return HJChainResponse(
        n=n,
        a=a,
        self_intersections=list(chain.self_intersections),
        discrepancies=list(quotient.discrepancies(chain)),
    )


def quotient_lattice_export(schema: QuotientSetupSchema) -> LatticeExport:
    """Resolved quotient lattice, with K registered when the setup names a canonical class"""
    q = quotient.build_quotient_lattice(standalone_setup(schema))
    if schema.canonical:
        register_class(q.lattice, CANONICAL_LABEL, quotient.canonical_on_resolution(q))
    return export_lattice(q.lattice)


def analyse_case(case: LefschetzCaseSchema) -> LefschetzResponse:
    """Both fixed-point formulas for one (trace, sign) branch, and the residual of a proposed fixed locus"""
    e_fixed = lefschetz.topological_constraint(case.trace, case.h20_sign, case.q_terms)
    requirements = lefschetz.fixed_locus_requirements(e_fixed, case.h20_sign)
    constraints = [
        f"e(fixed locus) = {e_fixed}",
        f"sum A_i^2 = {requirements.sum_self_intersection}",
        f"sum K.A_i = {requirements.canonical_degree}",
    ]
    residual = None
    outcome = "requirements only"
    certificate = ""
    if case.hypothesis is not None:
        hypothesis = FixedLocusHypothesis(
            isolated_pairs=case.hypothesis.isolated_pairs,
            curves=tuple(tuple(curve) for curve in case.hypothesis.curves),
            h20_sign=case.h20_sign,
        )
        residual = lefschetz.holomorphic_constraint(hypothesis)
        euler_ok = hypothesis.euler_number == e_fixed
        if residual == 0 and euler_ok:
            outcome = "consistent"
        else:
            outcome = "eliminated"
        certificate = (
            f"holomorphic residual {format_rational(residual)}; "
            f"Euler number {hypothesis.euler_number} vs {e_fixed}"
        )
    logger.debug("Case %s: %s", case.name, outcome, extra={"operation": "lefschetz"})
    return LefschetzResponse(
        case=case.name,
        e_fixed=e_fixed,
        sum_self_intersection=requirements.sum_self_intersection,
        canonical_degree=str(requirements.canonical_degree),
        residual=residual,
        entries=[CaseEntrySchema(case=case.name, constraints=constraints, outcome=outcome, certificate=certificate)],
    )
