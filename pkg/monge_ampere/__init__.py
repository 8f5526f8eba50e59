"""Wide-stencil finite-difference solver for the Dirichlet Monge-Ampere equation."""

from monge_ampere.errors import (
    ConfigurationError,
    DivergenceError,
    GridMismatchError,
    PoissonConvergenceError,
    StencilError,
)
from monge_ampere.grid import (
    Domain,
    Grid,
    GridIndex,
    GridSpec,
    MeshFunction,
    Region,
    build_grid,
    max_norm,
    max_norm_diff,
    restrict,
)
from monge_ampere.measures import DiracSpread, MeasureSpec, build_rhs
from monge_ampere.operator import BorelBox, EpsilonSign, OperatorConfig
from monge_ampere.poisson import PoissonConfig, PoissonMethod
from monge_ampere.problems import PROBLEMS, ErrorTable, Problem, get_problem, run_convergence_study
from monge_ampere.solvers import InitialGuess, SolveResult, SolverConfig, SolverMethod, solve

__all__ = [
    "BorelBox",
    "ConfigurationError",
    "DiracSpread",
    "DivergenceError",
    "Domain",
    "EpsilonSign",
    "ErrorTable",
    "Grid",
    "GridIndex",
    "GridMismatchError",
    "GridSpec",
    "InitialGuess",
    "MeasureSpec",
    "MeshFunction",
    "OperatorConfig",
    "PROBLEMS",
    "PoissonConfig",
    "PoissonConvergenceError",
    "PoissonMethod",
    "Problem",
    "Region",
    "SolveResult",
    "SolverConfig",
    "SolverMethod",
    "StencilError",
    "build_grid",
    "build_rhs",
    "get_problem",
    "max_norm",
    "max_norm_diff",
    "restrict",
    "run_convergence_study",
    "solve",
]
