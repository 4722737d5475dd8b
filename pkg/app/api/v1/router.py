from fastapi import APIRouter
from .endpoints import health, lefschetz, quotients, scenarios, search

api_router = APIRouter()

api_router.include_router(scenarios.router, prefix="/scenarios", tags=["scenarios"])
api_router.include_router(search.router, prefix="/search", tags=["search"])
api_router.include_router(quotients.router, prefix="/quotients", tags=["quotients"])
api_router.include_router(lefschetz.router, prefix="/lefschetz", tags=["lefschetz"])
api_router.include_router(health.router, tags=["monitoring"])
