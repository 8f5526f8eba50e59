"""
Solve and convergence-study routes.

Runs execute synchronously; the response is the recorded run.
"""

from fastapi import APIRouter

from api.models.run import RunKind, RunRecord
from api.routes.runs import execute_run
from runs import SolveRequest, StudyRequest, get_adapter

router = APIRouter(prefix="/v1/solve", tags=["solve"])


@router.post("", response_model=RunRecord)
def solve_problem(request: SolveRequest):
    """Solve one catalog problem at one mesh length."""
    adapter = get_adapter()
    return execute_run(RunKind.SOLVE, request.problem, lambda out: adapter.solve(request, out))


@router.post("/study", response_model=RunRecord)
def study_problem(request: StudyRequest):
    """Solve one catalog problem over a list of mesh lengths and tabulate the errors."""
    adapter = get_adapter()
    return execute_run(RunKind.STUDY, request.problem, lambda out: adapter.study(request, out))
