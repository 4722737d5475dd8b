from typing import List

from fastapi import APIRouter

from app.core.config import settings
from app.schemas.report import ReplayReport
from app.schemas.scenario import ScenarioSchema
from app.services.replay import load_scenario, run_scenario

router = APIRouter()


@router.get("/", response_model=List[str])
def list_scenarios() -> List[str]:
    """
    Names of the built-in scenarios.
    """
    return settings.builtin_scenarios


@router.get("/{name}", response_model=ScenarioSchema)
def read_scenario(name: str) -> ScenarioSchema:
    """
    Get a built-in scenario document.
    """
    return load_scenario(name)


@router.get("/{name}/replay", response_model=ReplayReport)
def replay_builtin(name: str) -> ReplayReport:
    """
    Replay a built-in scenario and return the full report.
    """
    return run_scenario(name)


@router.post("/replay", response_model=ReplayReport)
def replay_document(scenario: ScenarioSchema) -> ReplayReport:
    """
    Replay a scenario posted in the request body.
    """
    return run_scenario(scenario)
