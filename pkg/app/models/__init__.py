from .matrix import AffineSolution, Rational, RationalMatrix, as_rational, format_rational
from .lattice import DivisorClass, IntersectionLattice, render_combination
from .curves import CurveRecord, MarkedPoint, TableMismatch, TableReport
from .search import IntegralityVerdict, ReiderCase, SearchProblem, SearchSolution
from .quotient import (
    CyclicQuotientSetup,
    HJChain,
    InvolutionSpec,
    NoetherInvariants,
    QuotientLattice,
    QuotientPoint,
)
from .lefschetz import (
    ActionMatrix,
    C1Candidates,
    CaseEntry,
    DeterminantVerdict,
    FixedCurveSolution,
    FixedLocusHypothesis,
    FixedLocusRequirements,
    ModularVerdict,
)

__all__ = [
    "AffineSolution",
    "Rational",
    "RationalMatrix",
    "as_rational",
    "format_rational",
    "DivisorClass",
    "IntersectionLattice",
    "render_combination",
    "CurveRecord",
    "MarkedPoint",
    "TableMismatch",
    "TableReport",
    "IntegralityVerdict",
    "ReiderCase",
    "SearchProblem",
    "SearchSolution",
    "CyclicQuotientSetup",
    "HJChain",
    "InvolutionSpec",
    "NoetherInvariants",
    "QuotientLattice",
    "QuotientPoint",
    "ActionMatrix",
    "C1Candidates",
    "CaseEntry",
    "DeterminantVerdict",
    "FixedCurveSolution",
    "FixedLocusHypothesis",
    "FixedLocusRequirements",
    "ModularVerdict",
]
