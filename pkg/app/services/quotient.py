"""
Cyclic-quotient and free-involution calculus.

The resolved quotient lattice is spanned by proper transforms of invariant
curves and the Hirzebruch-Jung chains over the singular points.  Pullbacks are
numerical: the exceptional part is fixed by orthogonality to every
exceptional curve.
"""
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, gcd
from typing import Dict, List, Mapping, Sequence, Tuple

from app.core.exceptions import DegenerateGramError, DivisibilityError, DomainError, InvolutionError
from app.core.logging_config import get_logger
from app.models.lattice import DivisorClass, IntersectionLattice
from app.models.matrix import RationalLike, RationalMatrix, as_rational
from app.models.quotient import (
    CyclicQuotientSetup,
    HJChain,
    InvolutionSpec,
    NoetherInvariants,
    QuotientLattice,
)
from app.services.arithmetic import solve_linear_system
from app.services.lattice import (
    Combination,
    class_from_combination,
    numerically_equal,
    pair,
    parse_combination,
)

logger = get_logger("services.quotient")


@dataclass(frozen=True)
class EquivalenceCheck:
    lhs: str
    rhs: str
    holds: bool


@dataclass(frozen=True)
class EquivalenceReport:
    checks: Tuple[EquivalenceCheck, ...]

    @property
    def failures(self) -> Tuple[EquivalenceCheck, ...]:
        return tuple(check for check in self.checks if not check.holds)

    @property
    def all_hold(self) -> bool:
        return not self.failures


def hj_chain(n: int, a: int) -> HJChain:
    """Negative-regular continued fraction of n/a"""
    if n < 2 or not 1 <= a < n or gcd(n, a) != 1:
        raise DomainError(f"Invalid cyclic quotient type 1/{n}(1,{a})", details={"n": n, "a": a})
    entries = []
    num, den = n, a
    while den:
        c = ceil(Fraction(num, den))
        entries.append(-c)
        num, den = den, c * den - num
    return HJChain(singularity=(n, a), self_intersections=tuple(entries))


def chain_gram(chain: HJChain) -> RationalMatrix:
    size = len(chain)
    return RationalMatrix.from_rows([
        [
            chain.self_intersections[i] if i == j else (1 if abs(i - j) == 1 else 0)
            for j in range(size)
        ]
        for i in range(size)
    ])


def discrepancies(chain: HJChain) -> Tuple[Fraction, ...]:
    """Coefficients a_i with K_res = pullback(K) + sum a_i E_i"""
    rhs = [-2 - c for c in chain.self_intersections]
    solution = solve_linear_system(chain_gram(chain), rhs)
    return solution.particular


def build_quotient_lattice(setup: CyclicQuotientSetup) -> QuotientLattice:
    d = setup.order
    curves = setup.curves
    chains = tuple(hj_chain(*point.quotient_type) for point in setup.points)
    transform_labels = {curve.label: f"{curve.label}'" for curve in curves}
    chain_labels = {
        point.label: point.chain_labels(len(chain)) for point, chain in zip(setup.points, chains)
    }
    basis = list(transform_labels.values()) + [label for labels in chain_labels.values() for label in labels]
    size = len(basis)
    grid = [[Fraction(0)] * size for _ in range(size)]

    for i, left in enumerate(curves):
        for j in range(i, len(curves)):
            right = curves[j]
            local = sum(
                setup.multiplicity(left, k) * setup.multiplicity(right, k) for k in range(len(setup.points))
            )
            residue = setup.source_gram[i, j] - local
            if residue.denominator != 1 or residue.numerator % d:
                raise DivisibilityError((left.label, right.label), residue, d)
            grid[i][j] = grid[j][i] = residue / d

    offset = len(curves)
    for k, (point, chain) in enumerate(zip(setup.points, chains)):
        block = chain_gram(chain)
        for r in range(len(chain)):
            for s in range(len(chain)):
                grid[offset + r][offset + s] = block[r, s]
        for i, curve in enumerate(curves):
            m = setup.multiplicity(curve, k)
            if not m:
                continue
            if len(chain) != 1:
                raise DomainError(
                    f"{curve.label} passes through {point.label}, whose chain has {len(chain)} components; "
                    "only one-component chains are supported for curves through a point"
                )
            grid[i][offset] = grid[offset][i] = Fraction(m)
        offset += len(chain)

    lattice = IntersectionLattice(f"{setup.name}", tuple(basis), RationalMatrix.from_rows(grid))
    logger.info(
        "Built quotient lattice %s with %d generators", lattice.name, lattice.rank,
        extra={"lattice": lattice.name, "operation": "build_quotient_lattice"},
    )
    return QuotientLattice(
        setup=setup,
        lattice=lattice,
        chains=chains,
        transform_labels=transform_labels,
        chain_labels=chain_labels,
    )


def _source_terms(image_class: Combination) -> Dict[str, Fraction]:
    if isinstance(image_class, str):
        return parse_combination(image_class)
    return {label: as_rational(c) for label, c in image_class.items()}


def pushforward(quotient: QuotientLattice, combination: Combination) -> Dict[str, Fraction]:
    """Image of a combination of invariant curves: each curve maps with degree d onto its image"""
    terms = _source_terms(combination)
    for label in terms:
        quotient.transform_of(label)
    return {label: c * quotient.setup.order for label, c in terms.items()}


def pullback(quotient: QuotientLattice, image_class: Combination) -> DivisorClass:
    """Numerical pullback of a combination of image curves, named by their source labels"""
    lattice = quotient.lattice
    base = lattice.zero()
    for label, coefficient in _source_terms(image_class).items():
        base = base + lattice.generator(quotient.transform_of(label)) * coefficient

    exceptional = quotient.exceptional_labels
    if not exceptional:
        return base
    indices = [lattice.index(label) for label in exceptional]
    block = lattice.gram.submatrix(indices)
    rhs = [-pair(base, lattice.generator(label)) for label in exceptional]
    solution = solve_linear_system(block, rhs)
    if not solution.is_unique:
        raise DegenerateGramError(lattice.name, f"Exceptional block of {lattice.name} is singular")
    for label, gamma in zip(exceptional, solution.particular):
        base = base + lattice.generator(label) * gamma
    return base


def canonical_on_resolution(quotient: QuotientLattice) -> DivisorClass:
    """Pullback of the quotient's canonical class plus the discrepancy part of every chain"""
    if not quotient.setup.canonical:
        raise DomainError(f"Setup {quotient.setup.name} does not name a canonical class")
    canonical = pullback(quotient, quotient.setup.canonical)
    for point, chain in zip(quotient.setup.points, quotient.chains):
        for label, a in zip(quotient.chain_labels[point.label], discrepancies(chain)):
            canonical = canonical + quotient.lattice.generator(label) * a
    return canonical


def quotient_canonical_square(K2: RationalLike, d: int) -> Fraction:
    """K^2 of X/G when G of order d acts freely off finitely many points"""
    return as_rational(K2) / d


def quotient_genus(g: int, d: int, fixed_points: int) -> int:
    """Riemann-Hurwitz for a cyclic cover of prime order d totally ramified at fixed_points"""
    numerator = 2 * g - 2 - (d - 1) * fixed_points
    if numerator % d:
        raise DomainError(
            f"Branch data (g={g}, d={d}, fixed={fixed_points}) is not consistent with Riemann-Hurwitz"
        )
    twice_genus = numerator // d + 2
    if twice_genus % 2 or twice_genus < 0:
        raise DomainError(f"Branch data (g={g}, d={d}, fixed={fixed_points}) gives a non-integral genus")
    return twice_genus // 2


def noether_invariants(K2: int, chi: int, q: int, pg: int) -> NoetherInvariants:
    if chi != 1 - q + pg:
        raise DomainError(f"chi={chi} differs from 1 - q + pg = {1 - q + pg}")
    e = 12 * chi - K2
    b2 = e - 2 + 4 * q
    return NoetherInvariants(e=e, b2=b2, h11=b2 - 2 * pg)


def free_involution_quotient(lattice: IntersectionLattice, spec: InvolutionSpec, name: str = "") -> IntersectionLattice:
    """Lattice of orbit images under an unramified double cover"""
    mapping = spec.permutation()
    missing = [label for label in lattice.basis if label not in mapping]
    unknown = [label for label in mapping if label not in lattice.basis]
    if missing or unknown:
        raise InvolutionError(
            "Involution does not partition the generators",
            {"missing": missing, "unknown": unknown},
        )
    gram = lattice.gram
    for left in lattice.basis:
        for right in lattice.basis:
            if lattice.gram_entry(mapping[left], mapping[right]) != lattice.gram_entry(left, right):
                raise InvolutionError(
                    f"Involution does not preserve {left}.{right}",
                    {"pair": [left, right]},
                )

    orbits = spec.orbits()
    images = [image for image, _ in orbits]
    if len(set(images)) != len(images):
        raise InvolutionError("Orbit image labels are not distinct", {"images": images})
    rows = []
    for _, members in orbits:
        row = []
        for _, others in orbits:
            total = sum(
                (gram[lattice.index(a), lattice.index(b)] for a in members for b in others), Fraction(0)
            )
            row.append(total / 2)
        rows.append(row)
    quotient = IntersectionLattice(name or f"{lattice.name}/2", tuple(images), RationalMatrix.from_rows(rows))
    logger.info(
        "Built free quotient %s with %d generators", quotient.name, quotient.rank,
        extra={"lattice": quotient.name, "operation": "free_involution_quotient"},
    )
    return quotient


def apply_permutation(d: DivisorClass, spec: InvolutionSpec) -> DivisorClass:
    """Image of a class under an involution that permutes generators"""
    mapping = spec.permutation()
    lattice = d.lattice
    image = lattice.zero()
    for label, coefficient in zip(lattice.basis, d.coords):
        if coefficient:
            if label not in mapping:
                raise InvolutionError(f"Involution does not act on {label}", {"label": label})
            image = image + lattice.generator(mapping[label]) * coefficient
    return image


def verify_equivalences(
    lattice: IntersectionLattice,
    pairs: Sequence[Tuple[Combination, Combination]],
) -> EquivalenceReport:
    checks = []
    for lhs, rhs in pairs:
        holds = numerically_equal(class_from_combination(lattice, lhs), class_from_combination(lattice, rhs))
        checks.append(EquivalenceCheck(str(lhs), str(rhs), holds))
    return EquivalenceReport(tuple(checks))


def projection_formula_holds(quotient: QuotientLattice) -> List[Tuple[str, str]]:
    """Curve pairs where pullback(A).pullback(B) differs from (A.B)/d; empty when the formula holds"""
    setup = quotient.setup
    pulled = {curve.label: pullback(quotient, {curve.label: 1}) for curve in setup.curves}
    failures = []
    for i, left in enumerate(setup.curves):
        for j in range(i, len(setup.curves)):
            right = setup.curves[j]
            if pair(pulled[left.label], pulled[right.label]) != setup.source_gram[i, j] / setup.order:
                failures.append((left.label, right.label))
    return failures


def exceptional_orthogonality(d: DivisorClass, quotient: QuotientLattice) -> Mapping[str, Fraction]:
    """Nonzero pairings of d with exceptional curves"""
    lattice = quotient.lattice
    values = {label: pair(d, lattice.generator(label)) for label in quotient.exceptional_labels}
    return {label: value for label, value in values.items() if value}
