"""
Intersection lattices and divisor classes living on them.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple

from app.core.exceptions import (
    DomainError,
    DuplicateLabelError,
    LatticeMismatchError,
    UnknownLabelError,
)
from app.models.matrix import RationalLike, RationalMatrix, as_rational, format_rational


@dataclass(frozen=True)
class IntersectionLattice:
    """A Q-span of labelled generators with a symmetric Gram matrix.

    Name, basis and Gram are frozen. ``named`` is a mutable registry of classes
    added after construction (embedded curves, canonical classes): ``register``
    extends it in place, so every holder of the lattice sees the new label.
    It takes no part in equality or hashing.
    """
    name: str
    basis: Tuple[str, ...]
    gram: RationalMatrix
    named: Dict[str, Tuple[Fraction, ...]] = field(
        default_factory=dict, compare=False, hash=False, repr=False
    )

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(self.basis))
        if len(set(self.basis)) != len(self.basis):
            seen = set()
            for label in self.basis:
                if label in seen:
                    raise DuplicateLabelError(label, self.name)
                seen.add(label)
        if not self.gram.is_square or self.gram.rows != len(self.basis):
            raise DomainError(
                f"Gram of {self.name} is {self.gram.rows}x{self.gram.cols} for {len(self.basis)} generators"
            )
        if not self.gram.is_symmetric():
            raise DomainError(f"Gram of {self.name} is not symmetric")

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def labels(self) -> Tuple[str, ...]:
        return self.basis + tuple(self.named)

    def index(self, label: str) -> int:
        try:
            return self.basis.index(label)
        except ValueError:
            raise UnknownLabelError(label, self.name)

    def has_label(self, label: str) -> bool:
        return label in self.basis or label in self.named

    def zero(self) -> "DivisorClass":
        return DivisorClass(self, (Fraction(0),) * self.rank)

    def generator(self, label: str) -> "DivisorClass":
        coords = [Fraction(0)] * self.rank
        coords[self.index(label)] = Fraction(1)
        return DivisorClass(self, tuple(coords))

    def class_of(self, label: str) -> "DivisorClass":
        """Class of a generator or of a registered name"""
        if label in self.basis:
            return self.generator(label)
        if label in self.named:
            return DivisorClass(self, self.named[label])
        raise UnknownLabelError(label, self.name)

    def register(self, label: str, coords: Iterable[RationalLike]) -> "DivisorClass":
        if self.has_label(label):
            raise DuplicateLabelError(label, self.name)
        divisor = DivisorClass(self, tuple(coords))
        self.named[label] = divisor.coords
        return divisor

    def gram_entry(self, left: str, right: str) -> Fraction:
        return self.gram[self.index(left), self.index(right)]


@dataclass(frozen=True)
class DivisorClass:
    """Rational coordinates of a class in the basis of its lattice"""
    lattice: IntersectionLattice
    coords: Tuple[Fraction, ...]

    def __post_init__(self):
        coords = tuple(as_rational(c) for c in self.coords)
        if len(coords) != self.lattice.rank:
            raise DomainError(
                f"{len(coords)} coordinates given for {self.lattice.name} of rank {self.lattice.rank}"
            )
        object.__setattr__(self, "coords", coords)

    def _check(self, other: "DivisorClass") -> None:
        if self.lattice != other.lattice:
            raise LatticeMismatchError(self.lattice.name, other.lattice.name)

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        self._check(other)
        return DivisorClass(self.lattice, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        self._check(other)
        return DivisorClass(self.lattice, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(self.lattice, tuple(-a for a in self.coords))

    def __mul__(self, scalar: RationalLike) -> "DivisorClass":
        q = as_rational(scalar)
        return DivisorClass(self.lattice, tuple(q * a for a in self.coords))

    __rmul__ = __mul__

    def __truediv__(self, scalar: RationalLike) -> "DivisorClass":
        q = as_rational(scalar)
        if q == 0:
            raise DomainError("Division of a class by zero")
        return self * (1 / q)

    def coefficient(self, label: str) -> Fraction:
        return self.coords[self.lattice.index(label)]

    def as_mapping(self) -> Dict[str, Fraction]:
        return {label: c for label, c in zip(self.lattice.basis, self.coords) if c != 0}

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def render(self) -> str:
        """Formal combination in basis order, e.g. -3E1'+15E2'+7R1"""
        return render_combination(self.as_mapping())


def render_combination(terms: Mapping[str, RationalLike]) -> str:
    parts = []
    for label, coefficient in terms.items():
        q = as_rational(coefficient)
        if q == 0:
            continue
        sign = "-" if q < 0 else "+"
        magnitude = abs(q)
        body = label if magnitude == 1 else f"{format_rational(magnitude)}{label}"
        parts.append(f"{sign}{body}")
    if not parts:
        return "0"
    text = "".join(parts)
    return text[1:] if text.startswith("+") else text
