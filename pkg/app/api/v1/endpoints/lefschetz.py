from fastapi import APIRouter

from app.schemas.report import LefschetzResponse
from app.schemas.scenario import LefschetzCaseSchema
from app.services.operations import analyse_case

router = APIRouter()


@router.post("/", response_model=LefschetzResponse)
def analyse(case: LefschetzCaseSchema) -> LefschetzResponse:
    """
    Fixed-point constraints for one involution branch, and the residual of a proposed fixed locus.
    """
    return analyse_case(case)
