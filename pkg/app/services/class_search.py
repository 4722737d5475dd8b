"""
Class enumeration on NS(X) by the coordinate quadratic, integrality obstructions
and Reider's case list.
"""
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

from app.core.exceptions import DomainError
from app.core.logging_config import get_logger
from app.models.lattice import DivisorClass
from app.models.search import IntegralityVerdict, ReiderCase, SearchProblem, SearchSolution
from app.services.arithmetic import two_square_representations
from app.services.lattice import NS_X_GRAM, coords_from_pairings, pair

logger = get_logger("services.class_search")

BASEPOINT = "basepoint"
SEPARATION = "separation"

_BASEPOINT_CASES = (
    ReiderCase("1a", 0, (-1,)),
    ReiderCase("1b", 1, (0,)),
)
_SEPARATION_CASES = (
    ReiderCase("2a", 0, (-2, -1)),
    ReiderCase("2b", 1, (-1, 0)),
    ReiderCase("2c", 2, (0,)),
)
_THREE_B_CASE = ReiderCase("2d", 3, (1,), special=True)


def _check_shape(problem: SearchProblem) -> None:
    gram = problem.lattice.gram
    if problem.lattice.rank != 3 or any(
        gram[i, j] != NS_X_GRAM[i][j] for i in range(3) for j in range(3)
    ):
        raise DomainError(
            f"Class search needs the NS(X) Gram in basis (E1, E3, C1); got lattice {problem.lattice.name}"
        )


def quadratic_residual(a: int, b: int, c: int, d2: int) -> int:
    """Zero iff the class with pairings (a, b, c) has square d2"""
    return 2 * c * c - 2 * (3 * b - a) * c + 5 * a * a + 7 * b * b - 12 * a * b + 18 * d2


def enumerate_classes(problem: SearchProblem) -> List[SearchSolution]:
    """All integral pairing triples (a, b, c) with b = K.D, sorted by (a, c)"""
    _check_shape(problem)
    b, d2 = problem.target_kd, problem.target_d2
    bound = 4 * b * b - 36 * d2
    if bound < 0:
        logger.debug("Empty search: 4b^2 - 36D^2 = %d", bound)
        return []

    triples = {}
    for u, s in two_square_representations(bound):
        if u % 3:
            continue
        for t in {u // 3, -(u // 3)}:
            a = b + t
            for numerator in ((3 * b - a) - s, (3 * b - a) + s):
                if numerator % 2:
                    continue
                c = numerator // 2
                triples[(a, c)] = s

    solutions = []
    for (a, c), s in sorted(triples.items()):
        divisor = coords_from_pairings(problem.lattice, (a, b, c))
        solutions.append(SearchSolution(a=a, b=b, c=c, s=s, target_d2=d2, divisor=divisor))
    logger.debug("Search K.D=%d D^2=%d found %d classes", b, d2, len(solutions))
    return solutions


def brute_force_classes(problem: SearchProblem, radius: int) -> List[Tuple[int, int, int]]:
    """Box scan of |a|, |c| <= radius with b = K.D; cross-check for enumerate_classes"""
    b, d2 = problem.target_kd, problem.target_d2
    return [
        (a, b, c)
        for a in range(-radius, radius + 1)
        for c in range(-radius, radius + 1)
        if quadratic_residual(a, b, c, d2) == 0
    ]


def integrality_obstruction(d1: DivisorClass, d2: DivisorClass) -> IntegralityVerdict:
    value = pair(d1, d2)
    return IntegralityVerdict(compatible=value.denominator == 1, value=value)


def pairing_profile(d: DivisorClass, named: Sequence[DivisorClass]) -> List[Fraction]:
    return [pair(d, other) for other in named]


def reider_cases(L_squared: int, part: str) -> List[ReiderCase]:
    """Literal (B.L, B^2) table; the 3B case only when L^2 = 9"""
    if part == BASEPOINT:
        if L_squared < 5:
            raise DomainError(f"Base-point part needs L^2 >= 5, got {L_squared}", details={"bound": 5})
        return list(_BASEPOINT_CASES)
    if part == SEPARATION:
        if L_squared < 9:
            raise DomainError(f"Separation part needs L^2 >= 9, got {L_squared}", details={"bound": 9})
        cases = list(_SEPARATION_CASES)
        if L_squared == 9:
            cases.append(_THREE_B_CASE)
        return cases
    raise DomainError(f"Unknown Reider part {part!r}")


def reider_survivors(cases: Iterable[ReiderCase], min_genus: int = 2) -> List[Tuple[ReiderCase, int]]:
    """(case, B^2) options whose adjunction genus with L = K is an integer >= min_genus"""
    survivors = []
    for case in cases:
        for b2 in case.b2_options:
            genus = case.arithmetic_genus(b2)
            if genus.denominator == 1 and genus >= min_genus:
                survivors.append((case, b2))
    return survivors
