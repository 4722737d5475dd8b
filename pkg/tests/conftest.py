import json
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from app.main import app
from app.core.config import settings
from app.services.lattice import cartwright_steger_lattice
from app.services.replay import ReplayPipeline, load_scenario

DATA_DIR = Path(__file__).parent / "data"
BUILTIN = "cartwright-steger"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def scenario_dict() -> dict:
    """Fresh, mutable copy of the built-in scenario document."""
    path = settings.scenario_dir / f"{BUILTIN}.json"
    return json.loads(path.read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def builtin_pipeline() -> ReplayPipeline:
    """Pipeline of the built-in scenario; its artifacts are shared by every test in the session."""
    return ReplayPipeline(load_scenario(BUILTIN))


@pytest.fixture(scope="session")
def builtin_report(builtin_pipeline):
    """The built-in scenario replayed once per session."""
    return builtin_pipeline.run()


@pytest.fixture(scope="session")
def assertions_by_id(builtin_report) -> dict:
    return {assertion.id: assertion for assertion in builtin_report.assertions}


@pytest.fixture
def nsx():
    """NS(X) in the basis (E1, E3, C1)."""
    return cartwright_steger_lattice()


@pytest.fixture(scope="function")
def client():
    with TestClient(app) as test_client:
        yield test_client
