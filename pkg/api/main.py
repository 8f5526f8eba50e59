"""
FastAPI application for the Monge-Ampere solver.

Exposes single solves, convergence studies and verification suites, plus
the registry of executed runs.
"""

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from api.routes import runs_router, solve_router, verify_router
from config import get_settings
from monge_ampere.problems import PROBLEMS
from monge_ampere.verification import SUITES

settings = get_settings()

app = FastAPI(
    title="Monge-Ampere Solver API",
    description="Wide-stencil finite-difference solver for the Dirichlet Monge-Ampere equation",
    version="1.0.0",
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Include routers
app.include_router(solve_router)
app.include_router(verify_router)
app.include_router(runs_router)


@app.get("/health")
def health_check():
    """Health check endpoint."""
    return {"status": "healthy", "service": "monge_ampere"}


@app.get("/")
def root():
    """Root endpoint with API info."""
    return {
        "service": "Monge-Ampere Solver API",
        "version": "1.0.0",
        "problems": sorted(PROBLEMS),
        "suites": list(SUITES),
        "endpoints": {
            "solve": "/v1/solve",
            "study": "/v1/solve/study",
            "verify": "/v1/verify",
            "runs": "/v1/runs",
        },
    }


if __name__ == "__main__":
    import uvicorn

    uvicorn.run(
        "api.main:app",
        host=settings.api_host,
        port=settings.api_port,
        reload=True,
    )
