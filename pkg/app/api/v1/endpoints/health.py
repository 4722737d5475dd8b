"""
Health check endpoint.
"""
from datetime import datetime, timezone
from typing import Any, Dict

from fastapi import APIRouter

from app.core.config import settings
from app.core.logging_config import get_logger

logger = get_logger("health")
router = APIRouter()


@router.get("/health")
def health_check() -> Dict[str, Any]:
    """
    Service status and the scenarios available for replay.
    """
    scenarios = settings.builtin_scenarios
    status = "healthy" if scenarios else "degraded"
    if not scenarios:
        logger.warning("No built-in scenarios found in %s", settings.scenario_dir)
    return {
        "status": status,
        "timestamp": datetime.now(timezone.utc).isoformat().replace("+00:00", "Z"),
        "version": "1.0.0",
        "environment": settings.environment,
        "scenarios": scenarios,
    }
