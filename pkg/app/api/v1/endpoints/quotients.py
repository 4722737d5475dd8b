from fastapi import APIRouter

from app.schemas.report import HJChainResponse, LatticeExport
from app.schemas.scenario import QuotientSetupSchema
from app.services.operations import hj_response, quotient_lattice_export

router = APIRouter()


@router.get("/hj/{n}/{a}", response_model=HJChainResponse)
def hj_chain(n: int, a: int) -> HJChainResponse:
    """
    Resolution chain and discrepancies of the cyclic quotient singularity 1/n(1,a).
    """
    return hj_response(n, a)


@router.post("/", response_model=LatticeExport)
def build_quotient(setup: QuotientSetupSchema) -> LatticeExport:
    """
    Resolved quotient lattice of a cyclic quotient setup.
    """
    return quotient_lattice_export(setup)
