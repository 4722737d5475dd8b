"""
Custom middleware for the FastAPI application
"""
import time
import uuid
from typing import Callable

from fastapi import Request, Response
from fastapi.responses import JSONResponse
from starlette.middleware.base import BaseHTTPMiddleware

from .exceptions import WorkbenchError
from .logging_config import get_logger

logger = get_logger("http")


class LoggingMiddleware(BaseHTTPMiddleware):
    """Request/response logging with a per-request id"""

    async def dispatch(self, request: Request, call_next: Callable) -> Response:
        request_id = str(uuid.uuid4())
        request.state.request_id = request_id
        start_time = time.perf_counter()
        logger.info(f"Request {request_id}: {request.method} {request.url.path}")

        response = await call_next(request)

        duration_ms = (time.perf_counter() - start_time) * 1000
        logger.info(
            f"Response {request_id}: {response.status_code}",
            extra={"operation": request.url.path, "duration": round(duration_ms, 3)},
        )
        response.headers["X-Request-ID"] = request_id
        return response


class ErrorHandlingMiddleware(BaseHTTPMiddleware):
    """Last-resort conversion of errors that escaped the exception handlers"""

    async def dispatch(self, request: Request, call_next: Callable) -> Response:
        try:
            return await call_next(request)
        except WorkbenchError as e:
            logger.error(
                f"Workbench error: {e.message} - Status: {e.status_code}",
                extra={"error_type": e.__class__.__name__},
            )
            return JSONResponse(
                status_code=e.status_code,
                content={
                    "error": {
                        "message": e.message,
                        "details": e.details,
                        "type": e.__class__.__name__,
                    }
                },
            )
        except Exception as e:
            request_id = getattr(request.state, "request_id", "unknown")
            logger.error(f"Unexpected error in request {request_id}: {e}", exc_info=True)
            return JSONResponse(
                status_code=500,
                content={
                    "error": {
                        "message": "Internal server error",
                        "request_id": request_id,
                        "type": "InternalServerError",
                    }
                },
            )
