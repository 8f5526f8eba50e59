"""
Five-point discrete Laplacian with homogeneous Dirichlet data, and its inverse.

Two backends: exact diagonalization in the discrete sine basis (DST-I), and a
matrix-free conjugate gradient on -Delta_h stopped on the max-norm residual.
"""

import logging
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy import fft

from monge_ampere.errors import PoissonConvergenceError
from monge_ampere.grid import Grid, GridIndex, MeshFunction, max_norm

logger = logging.getLogger(__name__)


class PoissonMethod(str, Enum):
    FAST = "fast"
    ITERATIVE = "iterative"


class PoissonConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    method: PoissonMethod = PoissonMethod.FAST
    rel_tol: float = Field(1e-12, gt=0, lt=1)
    max_iter: int = Field(10_000, ge=1)
    workers: int | None = Field(None, ge=1)


def laplacian_apply(v: MeshFunction, node: GridIndex) -> float:
    """Five-point Laplacian at one interior node."""
    i, j = node
    u = v.values
    return (u[i + 1, j] + u[i - 1, j] + u[i, j + 1] + u[i, j - 1] - 4.0 * u[i, j]) / v.grid.h ** 2


def _laplacian_interior(block: np.ndarray, h: float) -> np.ndarray:
    """Delta_h of an interior block extended by zero boundary values."""
    padded = np.pad(block, 1)
    return (
        padded[2:, 1:-1] + padded[:-2, 1:-1] + padded[1:-1, 2:] + padded[1:-1, :-2] - 4.0 * block
    ) / h ** 2


def laplacian(v: MeshFunction) -> MeshFunction:
    """Delta_h v on the interior (boundary values of v enter as data); zero on the boundary."""
    u = v.values
    out = np.zeros(v.grid.shape)
    out[1:-1, 1:-1] = (
        u[2:, 1:-1] + u[:-2, 1:-1] + u[1:-1, 2:] + u[1:-1, :-2] - 4.0 * u[1:-1, 1:-1]
    ) / v.grid.h ** 2
    return v.with_values(out)


def _eigenvalues(grid: Grid) -> np.ndarray:
    k1 = np.arange(1, grid.n1)
    k2 = np.arange(1, grid.n2)
    lam1 = (2.0 * np.cos(np.pi * k1 / grid.n1) - 2.0) / grid.h ** 2
    lam2 = (2.0 * np.cos(np.pi * k2 / grid.n2) - 2.0) / grid.h ** 2
    return lam1[:, None] + lam2[None, :]


def _solve_fast(rhs: np.ndarray, grid: Grid, cfg: PoissonConfig) -> np.ndarray:
    transformed = fft.dstn(rhs, type=1, norm="ortho", workers=cfg.workers)
    transformed /= _eigenvalues(grid)
    return fft.idstn(transformed, type=1, norm="ortho", workers=cfg.workers)


def _solve_iterative(rhs: np.ndarray, grid: Grid, cfg: PoissonConfig) -> np.ndarray:
    """Conjugate gradient on the SPD system -Delta_h z = -rhs."""
    h = grid.h
    b = -rhs
    b_norm = np.abs(b).max()
    z = np.zeros_like(b)
    if b_norm == 0.0:
        return z

    def apply(block: np.ndarray) -> np.ndarray:
        return -_laplacian_interior(block, h)

    r = b.copy()
    d = r.copy()
    gamma = np.vdot(r, r)
    for k in range(1, cfg.max_iter + 1):
        Ad = apply(d)
        alpha = gamma / np.vdot(d, Ad)
        z += alpha * d
        r -= alpha * Ad
        if np.abs(r).max() <= cfg.rel_tol * b_norm:
            # the recursive residual drifts; confirm against the true one
            r = b - apply(z)
            if np.abs(r).max() <= cfg.rel_tol * b_norm:
                logger.debug("conjugate gradient converged in %d iterations", k)
                return z
            d = r.copy()
            gamma = np.vdot(r, r)
            continue
        gamma_old = gamma
        gamma = np.vdot(r, r)
        d = r + (gamma / gamma_old) * d

    residual = float(np.abs(b - apply(z)).max() / b_norm)
    logger.warning("conjugate gradient stopped at relative residual %.3e", residual)
    raise PoissonConvergenceError(residual, cfg.max_iter)


def poisson_solve(rhs: MeshFunction, cfg: PoissonConfig | None = None) -> MeshFunction:
    """Solve Delta_h z = rhs on the interior with z = 0 on the boundary."""
    cfg = cfg or PoissonConfig()
    grid = rhs.grid
    out = np.zeros(grid.shape)
    if grid.n1 < 2 or grid.n2 < 2:
        return rhs.with_values(out)
    interior_rhs = rhs.values[1:-1, 1:-1]
    if cfg.method is PoissonMethod.FAST:
        out[1:-1, 1:-1] = _solve_fast(interior_rhs, grid, cfg)
    else:
        out[1:-1, 1:-1] = _solve_iterative(interior_rhs, grid, cfg)
    return rhs.with_values(out)


def inv_norm_estimate(grid: Grid, cfg: PoissonConfig | None = None) -> float:
    """||Delta_h^{-1}||_inf, the max of the discrete torsion function."""
    torsion = poisson_solve(MeshFunction(grid, -np.ones(grid.shape)), cfg)
    return max_norm(torsion)
