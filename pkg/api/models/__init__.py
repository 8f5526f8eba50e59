"""API models."""

from api.models.run import RunKind, RunRecord, RunStatus, status_for_exit_code

__all__ = [
    "RunKind",
    "RunRecord",
    "RunStatus",
    "status_for_exit_code",
]
