"""
Fixed-point iterations for M_h[u] = f_h with u = g on the boundary.

basic:           u <- u + (1/mu) (M_h[u] - f)
preconditioned:  u <- u - (1/mu) Delta_h^{-1} (M_h[u] - f)

Both keep boundary values untouched and share the fixed points of the
discrete problem.
"""

import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from monge_ampere.errors import ConfigurationError, DivergenceError
from monge_ampere.grid import Grid, MeshFunction, Region, build_grid, max_norm, restrict
from monge_ampere.measures import DiracSpread, build_rhs
from monge_ampere.operator import OperatorConfig, operator_values
from monge_ampere.poisson import PoissonConfig, poisson_solve

if TYPE_CHECKING:
    from monge_ampere.problems import Problem

logger = logging.getLogger(__name__)

LOG_EVERY = 100


class SolverMethod(str, Enum):
    BASIC = "basic"
    PRECONDITIONED = "preconditioned"


class InitialGuess(str, Enum):
    EXACT = "exact"
    EXTENSION = "extension"
    CUSTOM = "custom"


class StoppingRule(str, Enum):
    RESIDUAL = "residual"
    INCREMENT = "increment"


class SolverConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    method: SolverMethod = SolverMethod.PRECONDITIONED
    mu: float = Field(50.0, gt=0)
    tol: float = Field(1e-8, gt=0)
    max_iter: int = Field(1_000_000, ge=1)
    initial_guess: InitialGuess = InitialGuess.EXACT
    stopping: StoppingRule = StoppingRule.RESIDUAL


@dataclass
class SolveResult:
    """Outcome of one solve. residual_history holds one entry per step taken."""

    solution: MeshFunction
    iterations: int
    residual_history: list[float]
    converged: bool
    wall_time: float
    initial_residual: float
    final_residual: float
    rhs: MeshFunction | None = field(default=None, repr=False)


def _interior_residual(u: MeshFunction, f: MeshFunction, opcfg: OperatorConfig) -> np.ndarray:
    residual = operator_values(u, opcfg) - f.values
    residual[u.grid.boundary_mask] = 0.0
    return residual


def _basic_update(u: MeshFunction, residual: np.ndarray, cfg: SolverConfig) -> np.ndarray:
    values = u.values.copy()
    interior = u.grid.interior_mask
    values[interior] += residual[interior] / cfg.mu
    return values


def _preconditioned_update(
    u: MeshFunction, residual: np.ndarray, cfg: SolverConfig, pcfg: PoissonConfig
) -> np.ndarray:
    correction = poisson_solve(u.with_values(residual), pcfg).values
    values = u.values.copy()
    interior = u.grid.interior_mask
    values[interior] -= correction[interior] / cfg.mu
    return values


def basic_step(
    u: MeshFunction, f: MeshFunction, cfg: SolverConfig, opcfg: OperatorConfig
) -> MeshFunction:
    """One time-marching step u + (1/mu)(M_h[u] - f) on the interior."""
    return u.with_values(_basic_update(u, _interior_residual(u, f, opcfg), cfg))


def preconditioned_step(
    u: MeshFunction,
    f: MeshFunction,
    cfg: SolverConfig,
    opcfg: OperatorConfig,
    pcfg: PoissonConfig,
) -> MeshFunction:
    """One step of -Delta_h u' = -Delta_h u + (1/mu)(M_h[u] - f)."""
    return u.with_values(
        _preconditioned_update(u, _interior_residual(u, f, opcfg), cfg, pcfg)
    )


def coons_extension(g: MeshFunction) -> MeshFunction:
    """Transfinite bilinear interpolation of the boundary values into the interior."""
    grid = g.grid
    b = g.values
    s = np.linspace(0.0, 1.0, grid.n1 + 1)[:, None]
    t = np.linspace(0.0, 1.0, grid.n2 + 1)[None, :]
    left, right = b[0, :][None, :], b[-1, :][None, :]
    bottom, top = b[:, 0][:, None], b[:, -1][:, None]
    corners = (
        (1 - s) * (1 - t) * b[0, 0]
        + s * (1 - t) * b[-1, 0]
        + (1 - s) * t * b[0, -1]
        + s * t * b[-1, -1]
    )
    values = (1 - s) * left + s * right + (1 - t) * bottom + t * top - corners
    values[grid.boundary_mask] = b[grid.boundary_mask]
    return g.with_values(values)


def _initial_iterate(
    problem: "Problem",
    grid: Grid,
    g: MeshFunction,
    cfg: SolverConfig,
    initial: MeshFunction | None,
) -> MeshFunction:
    if initial is not None:
        if initial.grid.shape != grid.shape:
            raise ConfigurationError("custom initial guess does not match the grid")
        values = initial.values.copy()
    elif cfg.initial_guess is InitialGuess.EXACT:
        if problem.exact is None:
            raise ConfigurationError(f"problem {problem.name!r} has no exact solution")
        values = restrict(problem.exact, grid).values
    elif cfg.initial_guess is InitialGuess.EXTENSION:
        values = coons_extension(g).values
    else:
        raise ConfigurationError("initial_guess=custom needs an initial mesh function")
    values[grid.boundary_mask] = g.values[grid.boundary_mask]
    return MeshFunction(grid, values)


def solve(
    problem: "Problem",
    h: float,
    cfg: SolverConfig,
    opcfg: OperatorConfig,
    pcfg: PoissonConfig,
    spread: DiracSpread | str = DiracSpread.NEAREST,
    initial: MeshFunction | None = None,
) -> SolveResult:
    """Iterate the selected step until the residual drops below tol or max_iter is reached."""
    start = time.perf_counter()
    grid = build_grid(problem.grid_spec(h))
    f = build_rhs(problem.measure, grid, spread)
    g = restrict(problem.boundary, grid)
    u = _initial_iterate(problem, grid, g, cfg, initial)

    logger.info(
        "solving %s: h=%g, method=%s, mu=%g, tol=%g",
        problem.name, grid.h, cfg.method.value, cfg.mu, cfg.tol,
    )

    residual = _interior_residual(u, f, opcfg)
    initial_residual = current = float(np.abs(residual).max())
    history: list[float] = []
    converged = cfg.stopping is StoppingRule.RESIDUAL and current <= cfg.tol

    while not converged and len(history) < cfg.max_iter:
        if cfg.method is SolverMethod.BASIC:
            values = _basic_update(u, residual, cfg)
        else:
            values = _preconditioned_update(u, residual, cfg, pcfg)
        step = len(history) + 1
        if not np.all(np.isfinite(values)):
            logger.error("iterate %d is not finite", step)
            raise DivergenceError(step)
        increment = float(np.abs(values - u.values).max())
        u = u.with_values(values)
        residual = _interior_residual(u, f, opcfg)
        current = float(np.abs(residual).max())
        if not np.isfinite(current):
            raise DivergenceError(step)
        history.append(current)
        if step % LOG_EVERY == 0:
            logger.debug("iteration %d: residual %.3e", step, current)
        if cfg.stopping is StoppingRule.RESIDUAL:
            converged = current <= cfg.tol
        else:
            converged = increment <= cfg.tol

    wall_time = time.perf_counter() - start
    logger.info(
        "%s after %d iterations (residual %.3e, %.2fs)",
        "converged" if converged else "not converged", len(history), current, wall_time,
    )
    return SolveResult(
        solution=u,
        iterations=len(history),
        residual_history=history,
        converged=converged,
        wall_time=wall_time,
        initial_residual=initial_residual,
        final_residual=current,
        rhs=f,
    )


class SamplingMode(str, Enum):
    UNIFORM = "uniform"
    SMOOTH = "smooth"


def _smooth_perturbation(grid: Grid, rng: np.random.Generator, modes: int) -> np.ndarray:
    X, Y = grid.coordinates
    d = grid.spec.domain
    s = (X - d.x_min) / (d.x_max - d.x_min)
    t = (Y - d.y_min) / (d.y_max - d.y_min)
    values = np.zeros(grid.shape)
    for k in range(1, modes + 1):
        for l in range(1, modes + 1):
            values += rng.standard_normal() * np.sin(np.pi * k * s) * np.sin(np.pi * l * t)
    peak = np.abs(values).max()
    return values / peak if peak > 0 else values


def contraction_ratio(
    method: SolverMethod | str,
    mu: float,
    grid: Grid,
    opcfg: OperatorConfig,
    pcfg: PoissonConfig,
    trials: int,
    seed: int,
    sampling: SamplingMode | str = SamplingMode.UNIFORM,
    base: MeshFunction | None = None,
    amplitude: float = 1.0,
    modes: int = 2,
) -> float:
    """
    Largest observed |T v - T w| / |v - w| (interior max norms) for the step map T
    with f = 0, over seeded pairs that agree on the boundary.

    uniform sampling draws values in [-1, 1] (scaled by amplitude); smooth
    sampling draws low-frequency sine combinations. Both are added to base
    when given. Pairs with v == w are skipped.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    method = SolverMethod(method)
    sampling = SamplingMode(sampling)
    cfg = SolverConfig(method=method, mu=mu)
    zero = MeshFunction.zeros(grid)
    base_values = base.values if base is not None else np.zeros(grid.shape)
    interior = grid.interior_mask
    rng = np.random.default_rng(seed)

    ratio = 0.0
    for _ in range(trials):
        if sampling is SamplingMode.UNIFORM:
            v_values = base_values + amplitude * rng.uniform(-1.0, 1.0, grid.shape)
            w_values = base_values + amplitude * rng.uniform(-1.0, 1.0, grid.shape)
        else:
            v_values = base_values + amplitude * _smooth_perturbation(grid, rng, modes)
            w_values = base_values + amplitude * _smooth_perturbation(grid, rng, modes)
        w_values[~interior] = v_values[~interior]
        v, w = MeshFunction(grid, v_values), MeshFunction(grid, w_values)

        denominator = max_norm(v.with_values(v_values - w_values), Region.INTERIOR)
        if denominator == 0.0:
            continue
        if method is SolverMethod.BASIC:
            tv, tw = basic_step(v, zero, cfg, opcfg), basic_step(w, zero, cfg, opcfg)
        else:
            tv = preconditioned_step(v, zero, cfg, opcfg, pcfg)
            tw = preconditioned_step(w, zero, cfg, opcfg, pcfg)
        numerator = max_norm(tv.with_values(tv.values - tw.values), Region.INTERIOR)
        ratio = max(ratio, numerator / denominator)
    return ratio
