from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from app.core.exceptions import DomainError
from app.models.lattice import DivisorClass, IntersectionLattice


@dataclass(frozen=True)
class SearchProblem:
    """Classes D with K.D = target_kd and D^2 = target_d2 on NS(X)"""
    lattice: IntersectionLattice
    target_kd: int
    target_d2: int

    def __post_init__(self):
        for name in ("target_kd", "target_d2"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise DomainError(f"{name} must be an integer, got {value!r}")


@dataclass(frozen=True)
class SearchSolution:
    """a = D.E1, b = D.E3, c = D.C1 and s with s^2 = Delta/4"""
    a: int
    b: int
    c: int
    s: int
    target_d2: int
    divisor: DivisorClass

    def __post_init__(self):
        a, b, c, d2 = self.a, self.b, self.c, self.target_d2
        if 2 * c * c - 2 * (3 * b - a) * c + 5 * a * a + 7 * b * b - 12 * a * b + 18 * d2 != 0:
            raise DomainError(f"({a},{b},{c}) does not satisfy the coordinate quadratic for D^2={d2}")
        if (3 * a - 3 * b) ** 2 + self.s ** 2 != 4 * b * b - 36 * d2 or self.s < 0:
            raise DomainError(f"({a},{b},{c}) with s={self.s} violates the two-squares condition")

    @property
    def triple(self) -> Tuple[int, int, int]:
        return self.a, self.b, self.c


@dataclass(frozen=True)
class ReiderCase:
    """One (B.L, B^2) line of Reider's list; ``special`` marks L numerically 3B"""
    name: str
    bl: int
    b2_options: Tuple[int, ...]
    special: bool = False

    def arithmetic_genus(self, b2: int) -> Fraction:
        """p_a of B when L = K"""
        return 1 + Fraction(b2 + self.bl, 2)


@dataclass(frozen=True)
class IntegralityVerdict:
    compatible: bool
    value: Fraction

    @property
    def obstructed(self) -> Optional[Fraction]:
        return None if self.compatible else self.value
