"""
In-memory run registry.

Records live for the lifetime of the process; artifacts stay on disk under
each record's out_dir.
"""

from functools import lru_cache
from typing import Optional

from api.models.run import RunRecord, RunStatus


class RunStorage:
    """In-memory run storage."""

    def __init__(self):
        self._runs: dict[str, RunRecord] = {}

    def create(self, run: RunRecord) -> None:
        """Store a new run."""
        if run.run_id in self._runs:
            raise KeyError(f"Run {run.run_id} already exists")
        self._runs[run.run_id] = run

    def get(self, run_id: str) -> Optional[RunRecord]:
        """Retrieve a run by ID."""
        return self._runs.get(run_id)

    def list_all(self) -> list[RunRecord]:
        """List all runs, oldest first."""
        return sorted(self._runs.values(), key=lambda r: r.created_at)

    def list_by_status(self, status: RunStatus) -> list[RunRecord]:
        return [r for r in self.list_all() if r.status == status]

    def count_by_status(self) -> dict[str, int]:
        """Count runs by status."""
        counts = {status.value: 0 for status in RunStatus}
        for run in self._runs.values():
            counts[run.status.value] += 1
        return counts

    def clear(self) -> None:
        self._runs.clear()


@lru_cache
def get_storage() -> RunStorage:
    """Get the singleton storage instance."""
    return RunStorage()
