"""
Pairing, coordinate recovery and numerical equivalence on intersection lattices.
"""
import re
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

from app.core.exceptions import (
    DegenerateGramError,
    DomainError,
    LatticeMismatchError,
    UnknownLabelError,
)
from app.core.logging_config import get_logger
from app.models.curves import TableMismatch
from app.models.lattice import DivisorClass, IntersectionLattice
from app.models.matrix import RationalLike, RationalMatrix, as_rational
from app.services.arithmetic import solve_linear_system

logger = get_logger("services.lattice")

NS_X_NAME = "NS(X)"
NS_X_BASIS = ("E1", "E3", "C1")
NS_X_GRAM = ((5, 9, 11), (9, 9, 9), (11, 9, -1))

Combination = Union[str, Mapping[str, RationalLike]]

_TERM = re.compile(
    r"\s*(?P<sign>[+-])?\s*(?P<coef>\d+(?:/\d+)?)?\s*\*?\s*(?P<label>[A-Za-z][A-Za-z0-9_]*'*)\s*"
)


def cartwright_steger_lattice() -> IntersectionLattice:
    """A fresh NS(X) with basis (E1, E3, C1)"""
    return IntersectionLattice(NS_X_NAME, NS_X_BASIS, RationalMatrix.from_rows(NS_X_GRAM))


def lattice_from_rows(name: str, basis: Sequence[str], rows: Sequence[Sequence[RationalLike]]) -> IntersectionLattice:
    return IntersectionLattice(name, tuple(basis), RationalMatrix.from_rows(rows))


def _same_lattice(d1: DivisorClass, d2: DivisorClass) -> IntersectionLattice:
    if d1.lattice is not d2.lattice and d1.lattice != d2.lattice:
        raise LatticeMismatchError(d1.lattice.name, d2.lattice.name)
    return d1.lattice


def pairing_vector(d: DivisorClass) -> Tuple[Fraction, ...]:
    """Pairings of d with every basis element"""
    return d.lattice.gram.apply(d.coords)


def pair(d1: DivisorClass, d2: DivisorClass) -> Fraction:
    _same_lattice(d1, d2)
    return sum((a * b for a, b in zip(d1.coords, pairing_vector(d2))), Fraction(0))


def coords_from_pairings(lattice: IntersectionLattice, pairings: Sequence[RationalLike]) -> DivisorClass:
    if len(pairings) != lattice.rank:
        raise DomainError(
            f"{len(pairings)} pairings given for {lattice.name} of rank {lattice.rank}"
        )
    solution = solve_linear_system(lattice.gram, [as_rational(p) for p in pairings])
    if not solution.is_unique:
        raise DegenerateGramError(lattice.name)
    return DivisorClass(lattice, solution.particular)


def numerically_equal(d1: DivisorClass, d2: DivisorClass) -> bool:
    """Equal pairings against the whole basis; coincides with equal coordinates on a nondegenerate lattice"""
    _same_lattice(d1, d2)
    return not any(pairing_vector(d1 - d2))


def register_class(lattice: IntersectionLattice, label: str, d: DivisorClass) -> DivisorClass:
    if d.lattice != lattice:
        raise LatticeMismatchError(lattice.name, d.lattice.name)
    registered = lattice.register(label, d.coords)
    logger.debug("Registered %s on %s", label, lattice.name, extra={"lattice": lattice.name})
    return registered


def embed_by_pairings(lattice: IntersectionLattice, label: str, pairings: Sequence[RationalLike]) -> DivisorClass:
    d = coords_from_pairings(lattice, pairings)
    return register_class(lattice, label, d)


def parse_combination(text: str) -> Dict[str, Fraction]:
    """Parse '-3E1'+15E2'+1/3R1' into label -> coefficient; repeated labels accumulate"""
    terms: Dict[str, Fraction] = {}
    stripped = text.strip()
    if stripped in ("", "0"):
        return terms
    pos = 0
    first = True
    while pos < len(stripped):
        match = _TERM.match(stripped, pos)
        if not match or match.end() == pos:
            raise DomainError(f"Cannot parse combination {text!r} at position {pos}")
        if not first and match.group("sign") is None:
            raise DomainError(f"Missing sign before {match.group('label')} in {text!r}")
        coefficient = as_rational(match.group("coef")) if match.group("coef") else Fraction(1)
        if match.group("sign") == "-":
            coefficient = -coefficient
        label = match.group("label")
        terms[label] = terms.get(label, Fraction(0)) + coefficient
        pos = match.end()
        first = False
    return terms


def class_from_combination(lattice: IntersectionLattice, combination: Combination) -> DivisorClass:
    """Evaluate a formal combination of generator and registered labels"""
    terms = parse_combination(combination) if isinstance(combination, str) else combination
    total = lattice.zero()
    for label, coefficient in terms.items():
        if not lattice.has_label(label):
            raise UnknownLabelError(label, lattice.name)
        total = total + lattice.class_of(label) * coefficient
    return total


def pairing_table(lattice: IntersectionLattice, labels: Sequence[str]) -> RationalMatrix:
    classes = [lattice.class_of(label) for label in labels]
    return RationalMatrix.from_rows([[pair(a, b) for b in classes] for a in classes])


def compare_gram(
    lattice: IntersectionLattice,
    labels: Sequence[str],
    expected: RationalMatrix,
) -> List[TableMismatch]:
    """Entries of the labelled expected table that the lattice does not reproduce"""
    if expected.rows != len(labels) or not expected.is_square:
        raise DomainError(f"Expected table is {expected.rows}x{expected.cols} for {len(labels)} labels")
    computed = pairing_table(lattice, labels)
    mismatches = []
    for i, left in enumerate(labels):
        for j in range(i, len(labels)):
            if computed[i, j] != expected[i, j]:
                mismatches.append(TableMismatch(left, labels[j], computed[i, j], expected[i, j]))
    return mismatches


def restrict_lattice(lattice: IntersectionLattice, labels: Sequence[str], name: str) -> IntersectionLattice:
    """Lattice on a nondegenerate subset of generators; every other generator is embedded by its pairings.

    Raises DomainError when an embedded generator does not reproduce the original
    Gram entries, i.e. it is not numerically in the span of ``labels``.
    """
    indices = [lattice.index(label) for label in labels]
    sub = IntersectionLattice(name, tuple(labels), lattice.gram.submatrix(indices))
    others = [label for label in lattice.basis if label not in labels]
    for label in others:
        row = lattice.index(label)
        embed_by_pairings(sub, label, [lattice.gram[row, j] for j in indices])
    for i, left in enumerate(others):
        for right in others[i:]:
            computed = pair(sub.class_of(left), sub.class_of(right))
            if computed != lattice.gram_entry(left, right):
                raise DomainError(
                    f"{left}.{right} = {lattice.gram_entry(left, right)} is not reproduced on {name}",
                    details={"computed": str(computed)},
                )
    for label, coords in lattice.named.items():
        if not sub.has_label(label):
            pairings = lattice.gram.apply(coords)
            embed_by_pairings(sub, label, [pairings[j] for j in indices])
    logger.debug("Restricted %s to %s of rank %d", lattice.name, name, sub.rank, extra={"lattice": name})
    return sub


def equivalence_pairs(statements: Iterable[str]) -> List[Tuple[str, str]]:
    """Split chains like 'A = B = C' into adjacent (lhs, rhs) pairs"""
    pairs = []
    for statement in statements:
        sides = [side.strip() for side in statement.split("=")]
        if len(sides) < 2 or not all(sides):
            raise DomainError(f"Equivalence needs at least two sides: {statement!r}")
        pairs.extend(zip(sides, sides[1:]))
    return pairs
