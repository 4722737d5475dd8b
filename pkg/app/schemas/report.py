from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from .base import AssertionStatus, BaseSchema, RationalRows, RationalStr


class AssertionResult(BaseSchema):
    id: str
    description: str
    computed: str
    expected: str
    status: AssertionStatus


class CaseEntrySchema(BaseSchema):
    case: str
    constraints: List[str] = Field(default_factory=list)
    outcome: str
    certificate: str = ""


class ReplayReport(BaseSchema):
    scenario: str
    overall: AssertionStatus
    assertions: List[AssertionResult]
    cases: List[CaseEntrySchema] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.overall == AssertionStatus.PASS.value


class LatticeExport(BaseSchema):
    """Derived lattice in the scenario lattice shape"""
    name: str
    basis: List[str]
    gram: RationalRows
    named: Dict[str, List[RationalStr]] = Field(default_factory=dict)


class HJChainResponse(BaseSchema):
    n: int
    a: int
    self_intersections: List[int]
    discrepancies: List[RationalStr]


class SearchRequest(BaseModel):
    kd: int
    d2: int


class SearchSolutionSchema(BaseSchema):
    a: int
    b: int
    c: int
    s: int
    coords: List[RationalStr]
    combination: str


class SearchResponse(BaseSchema):
    kd: int
    d2: int
    solutions: List[SearchSolutionSchema]


class LefschetzResponse(BaseSchema):
    case: str
    e_fixed: int
    sum_self_intersection: int
    canonical_degree: str
    residual: Optional[RationalStr] = None
    entries: List[CaseEntrySchema]
