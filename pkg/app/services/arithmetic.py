"""
Exact number theory and linear algebra over the rationals.

Square tests go through sympy's integer roots; elimination and determinants
through sympy matrices, converted back to ``Fraction`` at the boundary.
"""
from fractions import Fraction
from math import isqrt
from typing import List, Optional, Sequence, Tuple

import sympy
from sympy import integer_nthroot

from app.core.exceptions import DomainError
from app.core.logging_config import get_logger
from app.models.matrix import AffineSolution, RationalLike, RationalMatrix, as_rational, to_sympy

logger = get_logger("services.arithmetic")


def is_perfect_square(n: int) -> Optional[int]:
    """Non-negative square root of n, or None"""
    if n < 0:
        raise DomainError(f"is_perfect_square needs n >= 0, got {n}", details={"n": n})
    root, exact = integer_nthroot(n, 2)
    return int(root) if exact else None


def rational_is_square(q: RationalLike) -> Optional[Fraction]:
    q = as_rational(q)
    if q < 0:
        return None
    num = is_perfect_square(q.numerator)
    den = is_perfect_square(q.denominator)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def two_square_representations(n: int) -> List[Tuple[int, int]]:
    """All ordered (u, s) with u, s >= 0 and u^2 + s^2 = n, sorted by u"""
    if n < 0:
        raise DomainError(f"two_square_representations needs n >= 0, got {n}", details={"n": n})
    pairs = []
    for u in range(isqrt(n) + 1):
        s = is_perfect_square(n - u * u)
        if s is not None:
            pairs.append((u, s))
    return pairs


def _to_fraction_vector(column: sympy.Matrix) -> Tuple[Fraction, ...]:
    return tuple(as_rational(entry) for entry in column)


def solve_linear_system(coeffs: RationalMatrix, rhs: Sequence[RationalLike]) -> AffineSolution:
    """Solve coeffs * x = rhs exactly. Inconsistency is returned, not raised."""
    if len(rhs) != coeffs.rows:
        raise DomainError(
            f"Right-hand side has {len(rhs)} entries for {coeffs.rows} equations",
            details={"rows": coeffs.rows, "rhs": len(rhs)},
        )
    matrix = coeffs.to_sympy()
    target = sympy.Matrix([to_sympy(v) for v in rhs])
    try:
        solution, parameters = matrix.gauss_jordan_solve(target)
    except ValueError:
        logger.debug("Inconsistent %dx%d system", coeffs.rows, coeffs.cols)
        return AffineSolution(consistent=False)

    particular = solution.subs({p: 0 for p in parameters})
    null_basis = tuple(_to_fraction_vector(v) for v in matrix.nullspace())
    logger.debug("Solved %dx%d system, family dimension %d", coeffs.rows, coeffs.cols, len(null_basis))
    return AffineSolution(
        consistent=True,
        particular=_to_fraction_vector(particular),
        null_basis=null_basis,
    )


def determinant(m: RationalMatrix) -> Fraction:
    """Exact determinant by fraction-free (Bareiss) elimination"""
    if not m.is_square:
        raise DomainError(f"Determinant of a non-square {m.rows}x{m.cols} matrix")
    if m.rows == 0:
        return Fraction(1)
    return as_rational(m.to_sympy().det(method="bareiss"))


def rank(m: RationalMatrix) -> int:
    return int(m.to_sympy().rank())
