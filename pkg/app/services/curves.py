"""
Intersection numbers of tabulated curves from genus and multiplicity data.
"""
from fractions import Fraction
from typing import Dict, FrozenSet, Mapping, Sequence

from app.core.exceptions import DomainError
from app.core.logging_config import get_logger
from app.models.curves import CurveRecord, TableMismatch, TableReport
from app.models.matrix import RationalMatrix

logger = get_logger("services.curves")

Extras = Mapping[FrozenSet[str], int]


def canonical_degree(curve: CurveRecord) -> int:
    """K.E = 3g - 3 for a totally geodesic curve"""
    if not curve.totally_geodesic:
        raise DomainError(f"{curve.label} is not totally geodesic; K.E is not determined by its genus")
    return 3 * curve.genus - 3


def cross_intersection(c1: CurveRecord, c2: CurveRecord, extra_meetings: int = 0) -> int:
    if c1.label == c2.label:
        raise DomainError(f"cross_intersection needs two distinct curves, got {c1.label} twice")
    if len(c1.mults) != len(c2.mults):
        raise DomainError(f"{c1.label} and {c2.label} have multiplicities at different point sets")
    if extra_meetings < 0:
        raise DomainError("extra_meetings must be non-negative")
    return sum(a * b for a, b in zip(c1.mults, c2.mults)) + extra_meetings


def self_intersection(curve: CurveRecord) -> int:
    return 1 - curve.genus + sum(m * (m - 1) for m in curve.mults) + 2 * curve.extra_nodes


def arithmetic_genus(D2, KD) -> Fraction:
    return 1 + Fraction(D2 + KD) / 2


def node_count(p_a, g: int) -> int:
    """Number of ordinary nodes that accounts for p_a - g"""
    delta = Fraction(p_a) - g
    if delta.denominator != 1 or delta < 0:
        raise DomainError(f"p_a={p_a} and g={g} do not differ by a non-negative integer")
    return int(delta)


def genus_consistent(curve: CurveRecord) -> bool:
    """Adjunction genus equals g + delta"""
    return arithmetic_genus(self_intersection(curve), canonical_degree(curve)) == curve.genus + curve.delta


def extras_key(left: str, right: str) -> FrozenSet[str]:
    return frozenset((left, right))


def parse_extras(raw: Mapping[str, int]) -> Dict[FrozenSet[str], int]:
    """Keys like 'C1,C2'"""
    extras = {}
    for key, value in raw.items():
        parts = [part.strip() for part in key.split(",")]
        if len(parts) != 2 or parts[0] == parts[1]:
            raise DomainError(f"Extra-meeting key must name two distinct curves: {key!r}")
        extras[extras_key(*parts)] = int(value)
    return extras


def verify_table(records: Sequence[CurveRecord], expected: RationalMatrix, extras: Extras) -> TableReport:
    """Recompute every entry of the expected table and list the mismatches"""
    if expected.rows != len(records) or not expected.is_square:
        raise DomainError(f"Expected table is {expected.rows}x{expected.cols} for {len(records)} curves")
    if not expected.is_symmetric():
        raise DomainError("Expected intersection table is not symmetric")

    mismatches = []
    checked = 0
    for i, left in enumerate(records):
        for j in range(i, len(records)):
            right = records[j]
            if i == j:
                computed = self_intersection(left)
            else:
                computed = cross_intersection(left, right, extras.get(extras_key(left.label, right.label), 0))
            checked += 1
            if computed != expected[i, j]:
                mismatches.append(TableMismatch(left.label, right.label, computed, expected[i, j]))
    logger.debug("Table check: %d entries, %d mismatches", checked, len(mismatches))
    return TableReport(checked=checked, mismatches=tuple(mismatches))


def validate_ball_quotient(records: Sequence[CurveRecord]) -> None:
    """A ball quotient has no curves of geometric genus 0 or 1"""
    offenders = [record.label for record in records if record.genus <= 1]
    if offenders:
        raise DomainError(
            f"Ball quotient cannot contain curves of genus <= 1: {', '.join(offenders)}",
            details={"labels": offenders},
        )
