"""
Scenario JSON: lattices, curve tables, quotient setups, involutions and the assertion list.
"""
from typing import Any, Dict, List, Optional, Tuple

from pydantic import Field, model_validator

from .base import BaseSchema, QuotientType, RationalRows


class LatticeSchema(BaseSchema):
    name: str
    basis: List[str]
    gram: RationalRows

    @model_validator(mode="after")
    def check_shape(self):
        if len(self.gram) != len(self.basis) or any(len(row) != len(self.basis) for row in self.gram):
            raise ValueError(f"gram of {self.name} must be {len(self.basis)}x{len(self.basis)}")
        return self


class TableSchema(BaseSchema):
    labels: List[str]
    matrix: RationalRows

    @model_validator(mode="after")
    def check_symmetric(self):
        size = len(self.labels)
        if len(self.matrix) != size or any(len(row) != size for row in self.matrix):
            raise ValueError(f"table must be {size}x{size}")
        for i in range(size):
            for j in range(i + 1, size):
                if self.matrix[i][j] != self.matrix[j][i]:
                    raise ValueError(f"table is not symmetric at {self.labels[i]}.{self.labels[j]}")
        return self


class MarkedPointSchema(BaseSchema):
    label: str
    quotient_type: QuotientType


class CurveRecordSchema(BaseSchema):
    label: str
    genus: int = Field(..., ge=0)
    mults: List[int]
    extra_nodes: int = Field(0, ge=0)
    sigma_invariant: bool = True
    totally_geodesic: bool = True


class CurvesSection(BaseSchema):
    marked_points: List[MarkedPointSchema]
    records: List[CurveRecordSchema]
    table: TableSchema
    extra_meetings: Dict[str, int] = Field(default_factory=dict)
    named_classes: Dict[str, str] = Field(default_factory=dict)
    equivalences: List[str] = Field(default_factory=list)
    canonical: str = "E3"


class QuotientPointSchema(BaseSchema):
    label: str
    quotient_type: QuotientType
    exceptional_prefix: str


class QuotientSchema(BaseSchema):
    """Cyclic quotient built from the scenario's curve table"""
    name: str
    order: int = Field(..., ge=2)
    source_lattice: str = "NS(X)"
    points: List[QuotientPointSchema]
    curves: List[str]
    canonical: str = ""
    expected: Optional[TableSchema] = None
    equivalences: List[str] = Field(default_factory=list)
    reduced_basis: List[str] = Field(default_factory=list)
    fibre: str = ""
    reducible_fibres: List[str] = Field(default_factory=list)


class QuotientSetupSchema(BaseSchema):
    """Self-contained quotient setup for the quotient subcommand and endpoint"""
    name: str = "quotient"
    order: int = Field(..., ge=2)
    points: List[QuotientPointSchema]
    curves: List[CurveRecordSchema]
    table: TableSchema
    canonical: str = ""


class InvolutionSchema(BaseSchema):
    name: str
    quotient: str
    swaps: List[Tuple[str, str]]
    fixed_labels: List[str] = Field(default_factory=list)
    chain_orbit_pairs: List[Tuple[List[str], List[str]]] = Field(default_factory=list)
    image_labels: Dict[str, str] = Field(default_factory=dict)
    expected: Optional[TableSchema] = None
    equivalences: List[str] = Field(default_factory=list)
    canonical: str = ""
    determinant_basis: List[str] = Field(default_factory=list)


class SurfaceSchema(BaseSchema):
    K2: int
    chi: int
    q: int
    pg: int


class DeterminantBlockSchema(BaseSchema):
    """A square block repeated per_m * m + constant times"""
    matrix: RationalRows
    per_m: int = 0
    constant: int = 1


class LefschetzSection(BaseSchema):
    ansatz: List[str] = Field(default_factory=lambda: ["E1'+R3", "E3'+R2"])
    c1_label: str = "C1'"
    test_curves: List[str] = Field(default_factory=lambda: ["E1'", "E2'", "E3'"])
    target_branches: List[int] = Field(default_factory=lambda: [0, 2])
    case2_equation: str = "2*x**2 = (m-4)**2 - 3"
    determinant_blocks: List[DeterminantBlockSchema] = Field(default_factory=list)
    determinant_curves: List[str] = Field(default_factory=lambda: ["r1", "r3"])
    contradiction_source: str = ""


class SearchSection(BaseSchema):
    """Search target and the curves the found classes are profiled against"""
    kd: int = 2
    d2: int = 0
    profile: List[str] = Field(default_factory=list)
    relabel: List[Tuple[str, str]] = Field(default_factory=list)


class AssertionSchema(BaseSchema):
    id: str
    expected: Any = None


class ScenarioSchema(BaseSchema):
    name: str
    description: str = ""
    ball_quotient: bool = True
    lattices: List[LatticeSchema]
    curves: CurvesSection
    quotients: List[QuotientSchema] = Field(default_factory=list)
    involutions: List[InvolutionSchema] = Field(default_factory=list)
    surfaces: Dict[str, SurfaceSchema] = Field(default_factory=dict)
    search: SearchSection = Field(default_factory=SearchSection)
    lefschetz: LefschetzSection = Field(default_factory=LefschetzSection)
    assertions: List[AssertionSchema]


class LefschetzHypothesisSchema(BaseSchema):
    isolated_pairs: int = Field(..., ge=0)
    curves: List[Tuple[int, int]] = Field(default_factory=list)


class LefschetzCaseSchema(BaseSchema):
    """One branch of the fixed-point analysis: trace on NS and sign on H^2(O)"""
    name: str = "case"
    trace: int
    h20_sign: int
    q_terms: int = 0
    hypothesis: Optional[LefschetzHypothesisSchema] = None

    @model_validator(mode="after")
    def check_sign(self):
        if self.h20_sign not in (-1, 1):
            raise ValueError("h20_sign must be +1 or -1")
        return self
