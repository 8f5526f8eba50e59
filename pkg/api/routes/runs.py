"""
Run registry routes.
"""

import uuid
from pathlib import Path
from typing import Callable, Optional

from fastapi import APIRouter, HTTPException

from api.models.run import RunKind, RunRecord, RunStatus, status_for_exit_code
from config import get_settings
from monge_ampere.errors import ConfigurationError
from runs.adapter import RunOutcome
from storage import get_storage

router = APIRouter(prefix="/v1/runs", tags=["runs"])


def execute_run(
    kind: RunKind,
    problem: Optional[str],
    run: Callable[[Path], RunOutcome],
) -> RunRecord:
    """Execute a run into its own output directory and record it."""
    run_id = str(uuid.uuid4())
    out_dir = Path(get_settings().output_dir) / run_id

    try:
        outcome = run(out_dir)
    except ConfigurationError as exc:
        raise HTTPException(status_code=400, detail=str(exc))

    record = RunRecord(
        run_id=run_id,
        kind=kind,
        status=status_for_exit_code(outcome.exit_code),
        problem=problem,
        exit_code=outcome.exit_code,
        summary=outcome.summary,
        out_dir=str(out_dir),
    )
    get_storage().create(record)
    return record


@router.get("", response_model=list[RunRecord])
def list_runs(status: Optional[RunStatus] = None):
    """List recorded runs, optionally filtered by status."""
    storage = get_storage()
    if status is not None:
        return storage.list_by_status(status)
    return storage.list_all()


@router.get("/{run_id}", response_model=RunRecord)
def get_run(run_id: str):
    """Get one run with its summary."""
    run = get_storage().get(run_id)
    if run is None:
        raise HTTPException(status_code=404, detail="Run not found")
    return run


@router.get("/stats/counts")
def get_run_counts():
    """Get counts of runs by status."""
    return get_storage().count_by_status()
