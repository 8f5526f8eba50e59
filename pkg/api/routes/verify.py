"""
Verification suite routes.
"""

from fastapi import APIRouter

from api.models.run import RunKind, RunRecord
from api.routes.runs import execute_run
from runs import VerifyRequest, get_adapter

router = APIRouter(prefix="/v1/verify", tags=["verify"])


@router.post("", response_model=RunRecord)
def verify(request: VerifyRequest):
    """Run property suites; the summary carries every check and its values."""
    adapter = get_adapter()
    return execute_run(RunKind.VERIFY, None, lambda out: adapter.verify(request, out))
