from .base import AssertionStatus, BaseSchema, RationalStr, ReportFormat
from .scenario import (
    AssertionSchema,
    CurveRecordSchema,
    CurvesSection,
    DeterminantBlockSchema,
    InvolutionSchema,
    LatticeSchema,
    LefschetzCaseSchema,
    LefschetzHypothesisSchema,
    LefschetzSection,
    MarkedPointSchema,
    QuotientPointSchema,
    QuotientSchema,
    QuotientSetupSchema,
    ScenarioSchema,
    SearchSection,
    SurfaceSchema,
    TableSchema,
)
from .report import (
    AssertionResult,
    CaseEntrySchema,
    HJChainResponse,
    LatticeExport,
    LefschetzResponse,
    ReplayReport,
    SearchRequest,
    SearchResponse,
    SearchSolutionSchema,
)
