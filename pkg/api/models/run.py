"""
Run records kept by the registry and returned by the API.
"""

from datetime import datetime, timezone
from enum import Enum
from typing import Any, Optional

from pydantic import BaseModel, Field


def _now() -> datetime:
    return datetime.now(timezone.utc)


class RunKind(str, Enum):
    """What a run executed."""

    SOLVE = "solve"
    STUDY = "study"
    VERIFY = "verify"


class RunStatus(str, Enum):
    """Run status enum."""

    COMPLETED = "completed"  # Converged / all checks passed
    NOT_CONVERGED = "not_converged"  # Finished, but a row or check failed
    FAILED = "failed"  # Crashed suite


class RunRecord(BaseModel):
    """One executed run."""

    run_id: str
    kind: RunKind
    status: RunStatus
    created_at: datetime = Field(default_factory=_now)
    problem: Optional[str] = None
    exit_code: int = 0
    summary: dict[str, Any] = Field(default_factory=dict)
    out_dir: str


def status_for_exit_code(exit_code: int) -> RunStatus:
    if exit_code == 0:
        return RunStatus.COMPLETED
    if exit_code == 2:
        return RunStatus.NOT_CONVERGED
    return RunStatus.FAILED
