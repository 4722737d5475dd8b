"""
Value types for cyclic and free quotients.
"""
from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Tuple

from app.core.exceptions import DomainError, InvolutionError
from app.models.curves import CurveRecord, MarkedPoint
from app.models.lattice import IntersectionLattice
from app.models.matrix import RationalMatrix


@dataclass(frozen=True)
class HJChain:
    """Exceptional chain of the minimal resolution of 1/n(1,a)"""
    singularity: Tuple[int, int]
    self_intersections: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "self_intersections", tuple(self.self_intersections))
        if not self.self_intersections or any(c > -2 for c in self.self_intersections):
            raise DomainError(f"Chain entries must be <= -2: {self.self_intersections}")

    def __len__(self) -> int:
        return len(self.self_intersections)


@dataclass(frozen=True)
class QuotientPoint:
    """A singular point of the quotient; its chain components are labelled from ``exceptional_prefix``"""
    point: MarkedPoint
    exceptional_prefix: str

    @property
    def label(self) -> str:
        return self.point.label

    @property
    def quotient_type(self) -> Tuple[int, int]:
        return self.point.quotient_type

    def chain_labels(self, length: int) -> Tuple[str, ...]:
        if length == 1:
            return (self.exceptional_prefix,)
        return tuple(f"{self.exceptional_prefix}{k + 1}" for k in range(length))


@dataclass(frozen=True)
class CyclicQuotientSetup:
    """Curves invariant under a cyclic group of order ``order`` and the singular points of the quotient.

    Curve multiplicity vectors are indexed like the leading entries of ``points``;
    later points carry zero multiplicity on every curve.
    """
    name: str
    order: int
    points: Tuple[QuotientPoint, ...]
    curves: Tuple[CurveRecord, ...]
    source_gram: RationalMatrix
    canonical: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "curves", tuple(self.curves))
        if self.order < 2:
            raise DomainError(f"Group order must be at least 2, got {self.order}")
        if self.source_gram.rows != len(self.curves) or not self.source_gram.is_symmetric():
            raise DomainError(f"Source pairings of {self.name} must be a symmetric {len(self.curves)}-square matrix")
        for point in self.points:
            if point.quotient_type[0] != self.order:
                raise DomainError(
                    f"Point {point.label} has type 1/{point.quotient_type[0]}(1,{point.quotient_type[1]}) "
                    f"for a group of order {self.order}"
                )
        for curve in self.curves:
            if not curve.sigma_invariant:
                raise DomainError(f"Curve {curve.label} is not invariant under the group")
            if len(curve.mults) > len(self.points):
                raise DomainError(f"Curve {curve.label} has more multiplicities than quotient points")

    def multiplicity(self, curve: CurveRecord, point_index: int) -> int:
        return curve.mults[point_index] if point_index < len(curve.mults) else 0

    def curve_index(self, label: str) -> int:
        for i, curve in enumerate(self.curves):
            if curve.label == label:
                return i
        raise DomainError(f"Unknown curve {label} in setup {self.name}")


@dataclass(frozen=True)
class QuotientLattice:
    """Lattice of proper transforms and exceptional curves on the resolved quotient"""
    setup: CyclicQuotientSetup
    lattice: IntersectionLattice
    chains: Tuple[HJChain, ...]
    transform_labels: Mapping[str, str]
    chain_labels: Mapping[str, Tuple[str, ...]]

    @property
    def exceptional_labels(self) -> Tuple[str, ...]:
        return tuple(label for labels in self.chain_labels.values() for label in labels)

    def transform_of(self, source_label: str) -> str:
        try:
            return self.transform_labels[source_label]
        except KeyError:
            raise DomainError(f"No proper transform for {source_label} in {self.lattice.name}")


@dataclass(frozen=True)
class InvolutionSpec:
    """How an involution permutes the generators of a lattice.

    ``chain_orbit_pairs`` matches exceptional chains componentwise; ``image_labels``
    overrides the default orbit name (first member, lower-cased, primes dropped).
    """
    swaps: Tuple[Tuple[str, str], ...] = ()
    fixed_labels: Tuple[str, ...] = ()
    chain_orbit_pairs: Tuple[Tuple[Tuple[str, ...], Tuple[str, ...]], ...] = ()
    image_labels: Dict[str, str] = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "swaps", tuple(tuple(pair) for pair in self.swaps))
        object.__setattr__(self, "fixed_labels", tuple(self.fixed_labels))
        object.__setattr__(self, "chain_orbit_pairs", tuple(
            (tuple(left), tuple(right)) for left, right in self.chain_orbit_pairs
        ))
        for left, right in self.chain_orbit_pairs:
            if len(left) != len(right):
                raise InvolutionError(f"Chains {list(left)} and {list(right)} have different lengths")

    def permutation(self) -> Dict[str, str]:
        mapping: Dict[str, str] = {}

        def assign(source: str, target: str) -> None:
            if source in mapping:
                raise InvolutionError(f"Label {source} appears twice in the involution", {"label": source})
            mapping[source] = target

        for a, b in self.swaps:
            assign(a, b)
            assign(b, a)
        for label in self.fixed_labels:
            assign(label, label)
        for left, right in self.chain_orbit_pairs:
            for a, b in zip(left, right):
                assign(a, b)
                assign(b, a)
        return mapping

    def orbits(self) -> Tuple[Tuple[str, Tuple[str, ...]], ...]:
        """(image label, members) for every orbit, swaps first"""
        orbits = [(self.image_name(a, b), (a, b)) for a, b in self.swaps]
        orbits += [(self.image_name(label), (label,)) for label in self.fixed_labels]
        for left, right in self.chain_orbit_pairs:
            orbits += [(self.image_name(a, b), (a, b)) for a, b in zip(left, right)]
        return tuple(orbits)

    def image_name(self, first: str, second: Optional[str] = None) -> str:
        for label in (first, second):
            if label is not None and label in self.image_labels:
                return self.image_labels[label]
        return first.rstrip("'").lower()


@dataclass(frozen=True)
class NoetherInvariants:
    e: int
    b2: int
    h11: int
