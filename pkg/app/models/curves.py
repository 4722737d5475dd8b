from dataclasses import dataclass
from math import gcd
from typing import Tuple

from app.core.exceptions import DomainError


@dataclass(frozen=True)
class MarkedPoint:
    """A point with isotropy of type 1/n(1,a)"""
    label: str
    quotient_type: Tuple[int, int]

    def __post_init__(self):
        n, a = self.quotient_type
        if n < 2 or not 1 <= a < n or gcd(a, n) != 1:
            raise DomainError(
                f"Invalid quotient type 1/{n}(1,{a}) at {self.label}",
                details={"label": self.label, "quotient_type": [n, a]},
            )
        object.__setattr__(self, "quotient_type", (int(n), int(a)))


@dataclass(frozen=True)
class CurveRecord:
    """One tabulated curve: geometric genus, multiplicities at the marked points,
    ordinary nodes elsewhere."""
    label: str
    genus: int
    mults: Tuple[int, ...]
    extra_nodes: int = 0
    sigma_invariant: bool = True
    totally_geodesic: bool = True

    def __post_init__(self):
        object.__setattr__(self, "mults", tuple(int(m) for m in self.mults))
        if self.genus < 0:
            raise DomainError(f"Negative genus for {self.label}")
        if self.extra_nodes < 0:
            raise DomainError(f"Negative node count for {self.label}")
        if any(m < 0 for m in self.mults):
            raise DomainError(f"Negative multiplicity on {self.label}")

    @property
    def delta(self) -> int:
        """delta invariant: ordinary m-fold points plus nodes"""
        return sum(m * (m - 1) // 2 for m in self.mults) + self.extra_nodes

    @property
    def branch_count(self) -> int:
        return sum(self.mults)


@dataclass(frozen=True)
class TableMismatch:
    left: str
    right: str
    computed: object
    expected: object

    def describe(self) -> str:
        return f"{self.left}.{self.right}: computed {self.computed}, expected {self.expected}"


@dataclass(frozen=True)
class TableReport:
    checked: int
    mismatches: Tuple[TableMismatch, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.mismatches
