from fastapi import APIRouter, Query

from app.schemas.report import SearchRequest, SearchResponse
from app.services.operations import search_classes

router = APIRouter()


@router.get("/", response_model=SearchResponse)
def search(
    kd: int = Query(..., description="Canonical degree K.D"),
    d2: int = Query(..., description="Self-intersection D^2"),
) -> SearchResponse:
    """
    Classes on NS(X) with the given canonical degree and square.
    """
    return search_classes(kd, d2)


@router.post("/", response_model=SearchResponse)
def search_body(request: SearchRequest) -> SearchResponse:
    return search_classes(request.kd, request.d2)
