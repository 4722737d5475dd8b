"""
Involution actions on NS(Y) and the fixed-point case analysis.

Symbolic work (the C1' quadratic, eliminations in m) goes through sympy; every
number that leaves this module is an exact Fraction or integer.
"""
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple, Union

import sympy
from sympy import factorint
from sympy.parsing.sympy_parser import (
    convert_xor,
    implicit_multiplication_application,
    parse_expr,
    standard_transformations,
)

from app.core.exceptions import DomainError, InvolutionError
from app.core.logging_config import get_logger
from app.models.lattice import DivisorClass, IntersectionLattice
from app.models.lefschetz import (
    ActionMatrix,
    C1Candidates,
    DeterminantVerdict,
    FixedCurveSolution,
    FixedLocusHypothesis,
    FixedLocusRequirements,
    ModularVerdict,
)
from app.models.matrix import RationalLike, RationalMatrix, as_rational, to_sympy
from app.models.quotient import InvolutionSpec
from app.services.arithmetic import determinant, is_perfect_square, rational_is_square, solve_linear_system
from app.services.lattice import class_from_combination, pair

logger = get_logger("services.lefschetz")

DEFAULT_ANSATZ = ("E1'+R3", "E3'+R2")
DEFAULT_C1 = "C1'"
DEFAULT_TEST_CURVES = ("E1'", "E2'", "E3'")

_TRANSFORMS = standard_transformations + (implicit_multiplication_application, convert_xor)

M = sympy.Symbol("m")


@dataclass(frozen=True)
class ResolvedInvariants:
    """Invariants of the resolved quotient Y/alpha as expressions in m"""
    e: sympy.Expr
    K2: sympy.Expr
    b2: sympy.Expr


def build_action(
    lattice: IntersectionLattice,
    spec: InvolutionSpec,
    c1_image: Optional[DivisorClass] = None,
    c1_label: str = DEFAULT_C1,
) -> ActionMatrix:
    """Matrix of the involution; images outside the basis are taken from registered classes"""
    mapping = spec.permutation()
    columns = []
    for label in lattice.basis:
        if label == c1_label and c1_image is not None:
            image = c1_image
        elif label in mapping:
            image = lattice.class_of(mapping[label])
        else:
            raise InvolutionError(f"No image given for {label}", {"label": label})
        if image.lattice != lattice:
            raise InvolutionError(f"Image of {label} lives on {image.lattice.name}", {"label": label})
        columns.append(image.coords)

    matrix = RationalMatrix.from_columns(columns)
    if matrix.transpose() @ lattice.gram @ matrix != lattice.gram:
        raise InvolutionError(f"Action does not preserve the intersection form of {lattice.name}")
    if matrix @ matrix != RationalMatrix.identity(lattice.rank):
        raise InvolutionError(f"Action on {lattice.name} is not an involution")
    action = ActionMatrix(lattice=lattice, matrix=matrix)
    logger.debug("Action on %s has trace %s", lattice.name, action.trace, extra={"lattice": lattice.name})
    return action


def trace(action: ActionMatrix) -> int:
    value = action.trace
    if value.denominator != 1:
        raise DomainError(f"Trace {value} is not an integer")
    return value.numerator


def apply_action(action: ActionMatrix, d: DivisorClass) -> DivisorClass:
    if d.lattice != action.lattice:
        raise DomainError(f"Class on {d.lattice.name} cannot be acted on by an action on {action.lattice.name}")
    return DivisorClass(action.lattice, action.matrix.apply(d.coords))


def alpha_c1_candidates(
    lattice: IntersectionLattice,
    spec: InvolutionSpec,
    c1_label: str = DEFAULT_C1,
) -> C1Candidates:
    """Images of C1' compatible with the known images of the swapped curves.

    The image is sought in the span of the non-chain generators plus a chain part
    Sigma; Sigma^2 <= 0 because the chains are negative definite, and the E1'
    coefficient x is taken integral.
    """
    chain_members = {label for left, right in spec.chain_orbit_pairs for label in left + right}
    span = [label for label in lattice.basis if label not in chain_members]
    mapping = spec.permutation()
    known = [label for pair_ in spec.swaps for label in pair_]
    c1 = lattice.class_of(c1_label)

    generators = [lattice.class_of(label) for label in span]
    rows = [[pair(g, lattice.class_of(mapping[label])) for g in generators] for label in known]
    rhs = [pair(c1, lattice.class_of(label)) for label in known]
    solution = solve_linear_system(RationalMatrix.from_rows(rows), rhs)
    if not solution.consistent or solution.dimension != 1:
        raise DomainError(
            f"Expected a one-parameter family for the image of {c1_label}, got {solution.kind}"
            f" of dimension {solution.dimension}"
        )

    direction = solution.null_basis[0]
    pivot = next(i for i, value in enumerate(direction) if value)
    direction = tuple(value / direction[pivot] for value in direction)
    particular = tuple(p - solution.particular[pivot] * n for p, n in zip(solution.particular, direction))
    base = sum((g * c for g, c in zip(generators, particular)), lattice.zero())
    step = sum((g * c for g, c in zip(generators, direction)), lattice.zero())

    x = sympy.Symbol("x")
    quadratic = sympy.expand(
        to_sympy(pair(step, step)) * x ** 2 + 2 * to_sympy(pair(base, step)) * x + to_sympy(pair(base, base))
    )
    sigma_square = sympy.expand(to_sympy(pair(c1, c1)) - quadratic)
    region = sympy.solve_univariate_inequality(sigma_square <= 0, x, relational=False)
    if region.is_empty:
        values = []
    else:
        if not (region.inf.is_finite and region.sup.is_finite):
            raise DomainError(f"Unbounded family of images for {c1_label}: Sigma^2 = {sigma_square}")
        values = list(range(int(sympy.ceiling(region.inf)), int(sympy.floor(region.sup)) + 1))

    candidates = []
    for value in sorted(values, reverse=True):
        if sigma_square.subs(x, value) == 0:
            candidates.append(base + step * value)
        else:
            logger.debug("x=%d leaves Sigma^2=%s; not enumerated", value, sigma_square.subs(x, value))
    return C1Candidates(base=base, direction=step, quadratic=quadratic, parameter=x, candidates=tuple(candidates))


def topological_constraint(trace_ns: int, h20_sign: int, q_terms: int = 0) -> int:
    """Euler number of the fixed locus; q_terms is the trace on odd cohomology"""
    if h20_sign not in (-1, 1):
        raise DomainError(f"h20_sign must be +1 or -1, got {h20_sign}")
    return 2 + trace_ns + 2 * h20_sign - q_terms


def holomorphic_constraint(hypothesis: FixedLocusHypothesis) -> Fraction:
    """Zero iff the hypothesis satisfies the holomorphic fixed-point relation"""
    lhs = Fraction(1 + hypothesis.h20_sign)
    rhs = Fraction(hypothesis.euler_number, 4) + sum((Fraction(a2, 4) for _, a2 in hypothesis.curves), Fraction(0))
    return lhs - rhs


def fixed_locus_requirements(e_fixed: int, h20_sign: int) -> FixedLocusRequirements:
    """Sum of A_i^2 and of K.A_i forced by both fixed-point formulas"""
    sum_self = 4 * (1 + h20_sign) - e_fixed
    return FixedLocusRequirements(
        e_fixed=e_fixed,
        h20_sign=h20_sign,
        sum_self_intersection=sum_self,
        canonical_degree=sympy.expand(2 * M - e_fixed - sum_self),
    )


def resolved_quotient_invariants(e_y: int, e_fixed: int, chi: int) -> ResolvedInvariants:
    """Y/alpha with its 2m nodes resolved, q = 0"""
    e = sympy.expand(sympy.Rational(e_y + e_fixed, 2) + 2 * M)
    K2 = sympy.expand(12 * chi - e)
    return ResolvedInvariants(e=e, K2=K2, b2=sympy.expand(e - 2))


def _ansatz(lattice: IntersectionLattice, include_c1: bool, ansatz: Sequence[str], c1_label: str) -> List[DivisorClass]:
    labels = list(ansatz) + ([c1_label] if include_c1 else [])
    return [class_from_combination(lattice, label) for label in labels]


def fixed_curve_class_solve(
    lattice: IntersectionLattice,
    linear_targets: Sequence[RationalLike],
    quadratic_target: RationalLike,
    include_c1: bool,
    ansatz: Sequence[str] = DEFAULT_ANSATZ,
    test_curves: Sequence[str] = DEFAULT_TEST_CURVES,
    c1_label: str = DEFAULT_C1,
) -> FixedCurveSolution:
    """Classify rational A in the ansatz span with prescribed test pairings and A^2"""
    generators = _ansatz(lattice, include_c1, ansatz, c1_label)
    tests = [lattice.class_of(label) for label in test_curves]
    if len(linear_targets) != len(tests):
        raise DomainError(f"{len(linear_targets)} targets for {len(tests)} test curves")
    target = as_rational(quadratic_target)
    rows = RationalMatrix.from_rows([[pair(t, g) for g in generators] for t in tests])
    solution = solve_linear_system(rows, [as_rational(v) for v in linear_targets])

    def assemble(coefficients) -> DivisorClass:
        return sum((g * c for g, c in zip(generators, coefficients)), lattice.zero())

    if not solution.consistent:
        return FixedCurveSolution(kind="inconsistent")
    if solution.dimension > 1:
        return FixedCurveSolution(kind="underdetermined")
    if solution.is_unique:
        point = solution.particular
        a_class = assemble(point)
        if pair(a_class, a_class) == target:
            return FixedCurveSolution(kind="unique", solutions=(point,), classes=(a_class,))
        return FixedCurveSolution(kind="none")

    direction = solution.null_basis[0]
    pivot = next(i for i, value in enumerate(direction) if value)
    direction = tuple(value / direction[pivot] for value in direction)
    particular = tuple(p - solution.particular[pivot] * n for p, n in zip(solution.particular, direction))
    P, N = assemble(particular), assemble(direction)
    a2, a1, a0 = pair(N, N), 2 * pair(P, N), pair(P, P) - target
    t = sympy.Symbol("t")
    reduced = sympy.expand(to_sympy(a2) * t ** 2 + to_sympy(a1) * t + to_sympy(a0))

    if a2 == 0:
        if a1 != 0:
            roots = [-a0 / a1]
        elif a0 == 0:
            return FixedCurveSolution(kind="underdetermined", reduced=reduced)
        else:
            return FixedCurveSolution(kind="none", reduced=reduced)
        discriminant = None
    else:
        discriminant = a1 * a1 - 4 * a2 * a0
        root = rational_is_square(discriminant)
        if root is None:
            logger.debug("Discriminant %s is not a rational square", discriminant)
            return FixedCurveSolution(kind="none", discriminant=discriminant, reduced=reduced)
        roots = sorted({(-a1 - root) / (2 * a2), (-a1 + root) / (2 * a2)})

    points = tuple(tuple(p + r * n for p, n in zip(particular, direction)) for r in roots)
    return FixedCurveSolution(
        kind="unique",
        solutions=points,
        classes=tuple(assemble(point) for point in points),
        discriminant=discriminant,
        reduced=reduced,
    )


def reduce_with_canonical_degree(
    lattice: IntersectionLattice,
    canonical: DivisorClass,
    quadratic_target: RationalLike,
    canonical_offset: int,
    ansatz: Sequence[str] = DEFAULT_ANSATZ,
) -> sympy.Expr:
    """Eliminate y from A^2 = target and K.A = 2m + offset for A = xP + yQ.

    Returns a primitive polynomial in x and m (zero on solutions) with positive x^2 coefficient.
    """
    if len(ansatz) != 2:
        raise DomainError("The canonical-degree elimination needs exactly two ansatz classes")
    P, Q = (class_from_combination(lattice, label) for label in ansatz)
    x, y = sympy.symbols("x y")
    square = to_sympy(pair(P, P)) * x ** 2 + 2 * to_sympy(pair(P, Q)) * x * y + to_sympy(pair(Q, Q)) * y ** 2
    degree = to_sympy(pair(canonical, P)) * x + to_sympy(pair(canonical, Q)) * y
    solved = sympy.solve(sympy.Eq(degree, 2 * M + canonical_offset), y)
    if len(solved) != 1:
        raise DomainError("K.A does not determine the second ansatz coefficient")
    expr = sympy.expand(square.subs(y, solved[0]) - to_sympy(quadratic_target))
    _, primitive = sympy.Poly(expr, x, M).primitive()
    reduced = primitive.as_expr()
    if primitive.coeff_monomial(x ** 2) < 0:
        reduced = -reduced
    return sympy.expand(reduced)


def parse_equation(equation: Union[str, sympy.Expr]) -> sympy.Expr:
    """'2x^2 = (m-4)^2 - 3' -> 2*x**2 - (m-4)**2 + 3"""
    if isinstance(equation, sympy.Expr):
        return sympy.expand(equation)
    sides = equation.split("=")
    if len(sides) > 2:
        raise DomainError(f"Equation has more than one '=': {equation!r}")
    try:
        parsed = [parse_expr(side, transformations=_TRANSFORMS) for side in sides]
    except (SyntaxError, TypeError, sympy.SympifyError) as exc:
        raise DomainError(f"Cannot parse equation {equation!r}") from exc
    lhs = parsed[0]
    rhs = parsed[1] if len(parsed) == 2 else sympy.Integer(0)
    return sympy.expand(lhs - rhs)


def _integer_terms(expr: sympy.Expr, variables: Sequence[sympy.Symbol]) -> List[Tuple[Tuple[int, ...], int]]:
    poly = sympy.Poly(expr, *variables)
    _, poly = poly.clear_denoms()
    return [(tuple(monomial), int(coefficient)) for monomial, coefficient in poly.terms()]


def _evaluate(terms: List[Tuple[Tuple[int, ...], int]], values: Sequence[int]) -> int:
    total = 0
    for monomial, coefficient in terms:
        term = coefficient
        for value, exponent in zip(values, monomial):
            term *= value ** exponent
        total += term
    return total


def modular_nonsolvability(equation: Union[str, sympy.Expr], modulus: int) -> ModularVerdict:
    """Search all residue tuples mod ``modulus``; no solution certifies integer non-solvability"""
    if modulus < 2:
        raise DomainError(f"Modulus must be at least 2, got {modulus}")
    expr = parse_equation(equation)
    variables = sorted(expr.free_symbols, key=str)
    terms = _integer_terms(expr, variables)
    checked = 0
    for values in product(range(modulus), repeat=len(variables)):
        checked += 1
        if _evaluate(terms, values) % modulus == 0:
            witness = {str(v): value for v, value in zip(variables, values)}
            return ModularVerdict(str(equation), modulus, True, witness, checked)
    return ModularVerdict(str(equation), modulus, False, None, checked)


def integer_search(
    equation: Union[str, sympy.Expr],
    bound: int,
    square_variable: str = "x",
) -> List[Dict[str, int]]:
    """Integer solutions with every variable in [-bound, bound] of an equation A*x^2 + B(rest) = 0"""
    expr = parse_equation(equation)
    x = next((s for s in expr.free_symbols if str(s) == square_variable), None)
    if x is None:
        raise DomainError(f"Equation does not involve {square_variable}")
    rest = sorted((s for s in expr.free_symbols if s != x), key=str)
    in_x = sympy.Poly(expr, x)
    if in_x.degree() != 2 or in_x.coeff_monomial(x) != 0 or not in_x.coeff_monomial(x ** 2).is_number:
        raise DomainError(f"Equation is not of the form A*{square_variable}^2 + B(others) = 0")
    leading = in_x.coeff_monomial(x ** 2)
    remainder = sympy.expand(expr - leading * x ** 2)
    scale = sympy.Poly(expr, x, *rest).clear_denoms()[0]
    leading = int(leading * scale)
    terms = _integer_terms(remainder * scale, rest) if rest else []

    solutions = []
    for values in product(range(-bound, bound + 1), repeat=len(rest)):
        value = -_evaluate(terms, values) if rest else -int(remainder * scale)
        if value % leading:
            continue
        quotient = value // leading
        if quotient < 0:
            continue
        root = is_perfect_square(quotient)
        if root is None or root > bound:
            continue
        assignment = {str(v): val for v, val in zip(rest, values)}
        for signed in sorted({root, -root}):
            solutions.append({square_variable: signed, **assignment})
    return solutions


def nonsquare_determinant_obstruction(
    blocks: Sequence[Tuple[RationalMatrix, Tuple[int, int]]],
) -> DeterminantVerdict:
    """|det| of a block matrix whose block i repeats a_i*m + c_i times.

    Never a square when some prime has even m-coefficient and odd constant in its exponent.
    """
    exponents: Dict[int, Tuple[int, int]] = {}
    for block, (per_m, constant) in blocks:
        value = determinant(block)
        if value == 0:
            return DeterminantVerdict(exponents={}, never_square=False, degenerate=True)
        if value.denominator != 1:
            raise DomainError(f"Block determinant {value} is not an integer")
        for prime, power in factorint(abs(value.numerator)).items():
            a, c = exponents.get(int(prime), (0, 0))
            exponents[int(prime)] = (a + per_m * power, c + constant * power)
    exponents = dict(sorted(exponents.items()))
    certificates = [p for p, (a, c) in exponents.items() if a % 2 == 0 and c % 2 == 1]
    return DeterminantVerdict(
        exponents=exponents,
        never_square=bool(certificates),
        certificate_prime=certificates[0] if certificates else None,
    )


def fixed_locus_outcome(
    requirements: FixedLocusRequirements,
    branches: Sequence[FixedCurveSolution],
) -> Optional[FixedLocusHypothesis]:
    """The fixed locus left once every target branch is classified.

    None when the case is eliminated; a hypothesis with no curves when only A = 0 survives.
    """
    for branch in branches:
        if branch.kind == "underdetermined":
            raise DomainError("A target branch is underdetermined; the case cannot be closed")
        if any(not cls.is_zero() for cls in branch.classes):
            raise DomainError("A nonzero fixed-curve class survives; the case stays open")
    if requirements.sum_self_intersection != 0:
        return None
    solved = sympy.solve(sympy.Eq(requirements.canonical_degree, 0), M)
    if len(solved) != 1 or not solved[0].is_integer or solved[0] < 0:
        return None
    hypothesis = FixedLocusHypothesis(isolated_pairs=int(solved[0]), curves=(), h20_sign=requirements.h20_sign)
    if holomorphic_constraint(hypothesis) != 0 or hypothesis.euler_number != requirements.e_fixed:
        return None
    return hypothesis
