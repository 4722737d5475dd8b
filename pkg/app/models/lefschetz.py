from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import sympy

from app.core.exceptions import DomainError
from app.models.lattice import DivisorClass, IntersectionLattice
from app.models.matrix import RationalMatrix


@dataclass(frozen=True)
class ActionMatrix:
    """Matrix of an involution on a lattice; column j is the image of basis vector j"""
    lattice: IntersectionLattice
    matrix: RationalMatrix

    @property
    def trace(self) -> Fraction:
        return self.matrix.trace()


@dataclass(frozen=True)
class FixedLocusHypothesis:
    """Fixed locus made of 2m isolated points and curves given as (genus, self-intersection)"""
    isolated_pairs: int
    curves: Tuple[Tuple[int, int], ...] = ()
    h20_sign: int = -1

    def __post_init__(self):
        object.__setattr__(self, "curves", tuple(tuple(c) for c in self.curves))
        if self.isolated_pairs < 0:
            raise DomainError("isolated_pairs must be non-negative")
        if any(g < 0 for g, _ in self.curves):
            raise DomainError("Fixed curve genera must be non-negative")
        if self.h20_sign not in (-1, 1):
            raise DomainError(f"h20_sign must be +1 or -1, got {self.h20_sign}")

    @property
    def euler_number(self) -> int:
        return 2 * self.isolated_pairs + sum(2 - 2 * g for g, _ in self.curves)


@dataclass(frozen=True)
class C1Candidates:
    """Affine family for the image of C1' and the admissible members"""
    base: DivisorClass
    direction: DivisorClass
    quadratic: sympy.Expr
    parameter: sympy.Symbol
    candidates: Tuple[DivisorClass, ...]


@dataclass(frozen=True)
class FixedCurveSolution:
    """Outcome of the fixed-curve elimination.

    ``kind`` is one of unique, none, underdetermined, inconsistent; ``solutions``
    hold coefficient tuples over the ansatz generators.
    """
    kind: str
    solutions: Tuple[Tuple[Fraction, ...], ...] = ()
    classes: Tuple[DivisorClass, ...] = ()
    discriminant: Optional[Fraction] = None
    reduced: Optional[sympy.Expr] = None

    @property
    def has_rational_solution(self) -> bool:
        return self.kind in ("unique", "underdetermined")


@dataclass(frozen=True)
class FixedLocusRequirements:
    """What a zero holomorphic residual forces on the fixed curves"""
    e_fixed: int
    h20_sign: int
    sum_self_intersection: int
    canonical_degree: sympy.Expr


@dataclass(frozen=True)
class DeterminantVerdict:
    """Prime exponents of a determinant of the form prod p^(a*m + c)"""
    exponents: Dict[int, Tuple[int, int]]
    never_square: bool
    certificate_prime: Optional[int] = None
    degenerate: bool = False

    def evaluate(self, m: int) -> int:
        if self.degenerate:
            return 0
        value = 1
        for p, (a, c) in self.exponents.items():
            value *= p ** (a * m + c)
        return value

    def describe(self) -> str:
        if self.degenerate:
            return "determinant vanishes"
        parts = []
        for p, (a, c) in sorted(self.exponents.items()):
            exponent = str(sympy.Integer(a) * sympy.Symbol("m") + c)
            parts.append(f"{p}^({exponent})")
        return "*".join(parts) or "1"


@dataclass(frozen=True)
class ModularVerdict:
    equation: str
    modulus: int
    solvable: bool
    witness: Optional[Dict[str, int]] = None
    residues_checked: int = 0

    def describe(self) -> str:
        if self.solvable:
            return f"solutions mod {self.modulus}"
        return f"no solutions mod {self.modulus}"


@dataclass(frozen=True)
class CaseEntry:
    """One line of a case analysis"""
    case: str
    constraints: List[str] = field(default_factory=list)
    outcome: str = ""
    certificate: str = ""
