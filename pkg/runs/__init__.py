"""Run adapter: executes solve, study and verify requests for the CLI and the API."""

from runs.adapter import RunAdapter, RunOutcome, get_adapter
from runs.requests import SolveRequest, StudyRequest, VerifyRequest, parse_h, parse_h_list

__all__ = [
    "RunAdapter",
    "RunOutcome",
    "SolveRequest",
    "StudyRequest",
    "VerifyRequest",
    "get_adapter",
    "parse_h",
    "parse_h_list",
]
