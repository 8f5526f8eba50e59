"""API routes."""

from api.routes.runs import router as runs_router
from api.routes.solve import router as solve_router
from api.routes.verify import router as verify_router

__all__ = ["solve_router", "verify_router", "runs_router"]
