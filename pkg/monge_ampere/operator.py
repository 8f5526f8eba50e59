"""
Wide-stencil discrete Monge-Ampere operator.

    M_h[v](x) = min over admissible bases (a1, a2) at x of
                prod_i max(D_ai v(x) / (|ai|^2 h^2), 0)   (+/- eps * v(x))

with D_a v(x) = v(x + a) - 2 v(x) + v(x - a). The nodewise functions are
reference implementations; the array versions are what solvers call.
"""

import logging
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from monge_ampere.errors import StencilError
from monge_ampere.grid import (
    Grid,
    GridIndex,
    MeshFunction,
    Region,
    box_mask,
    check_same_grid,
    max_norm,
)
from monge_ampere.stencil import (
    Direction,
    StencilSet,
    admissibility_mask,
    admissible_bases,
    enumerate_bases,
)

logger = logging.getLogger(__name__)


class EpsilonSign(str, Enum):
    PLUS = "plus"
    MINUS = "minus"


class OperatorConfig(BaseModel):
    """Stencil width and properness term."""

    model_config = ConfigDict(frozen=True)

    stencil_width: int = Field(2, ge=1)
    epsilon: float = Field(1e-14, ge=0)
    epsilon_sign: EpsilonSign = EpsilonSign.PLUS

    @property
    def stencil(self) -> StencilSet:
        return enumerate_bases(self.stencil_width)

    @property
    def signed_epsilon(self) -> float:
        return self.epsilon if self.epsilon_sign is EpsilonSign.PLUS else -self.epsilon


class BorelBox(BaseModel):
    """Closed axis-aligned box [x_min, x_max] x [y_min, y_max]."""

    model_config = ConfigDict(frozen=True)

    x_min: float
    x_max: float
    y_min: float
    y_max: float

    @model_validator(mode="after")
    def check_ordered(self) -> "BorelBox":
        if self.x_min > self.x_max or self.y_min > self.y_max:
            raise ValueError("box corners must be ordered")
        return self

    def mask(self, grid: Grid) -> np.ndarray:
        return box_mask(grid, self.x_min, self.x_max, self.y_min, self.y_max)

    def contains_point(self, x: float, y: float) -> bool:
        return self.x_min <= x <= self.x_max and self.y_min <= y <= self.y_max

    def on_boundary(self, x: float, y: float, tol: float = 1e-12) -> bool:
        if not (self.x_min - tol <= x <= self.x_max + tol and self.y_min - tol <= y <= self.y_max + tol):
            return False
        return min(
            abs(x - self.x_min), abs(x - self.x_max), abs(y - self.y_min), abs(y - self.y_max)
        ) <= tol


def second_difference(v: MeshFunction, node: GridIndex, direction: Direction) -> float:
    """Undivided second difference v(x+a) - 2 v(x) + v(x-a)."""
    forward, backward = direction.step(node, 1), direction.step(node, -1)
    if not (v.grid.contains(forward) and v.grid.contains(backward)):
        raise StencilError(
            f"direction ({direction.p}, {direction.q}) leaves the grid at {tuple(node)}"
        )
    return v[forward] - 2.0 * v[node] + v[backward]


def directional_differences(values: np.ndarray, p: int, q: int) -> np.ndarray:
    """Undivided second differences along (p, q) at every node; NaN where undefined."""
    m1, m2 = values.shape
    ap, aq = abs(p), abs(q)
    out = np.full(values.shape, np.nan)
    if m1 <= 2 * ap or m2 <= 2 * aq:
        return out
    core = (slice(ap, m1 - ap), slice(aq, m2 - aq))
    forward = (slice(ap + p, m1 - ap + p), slice(aq + q, m2 - aq + q))
    backward = (slice(ap - p, m1 - ap - p), slice(aq - q, m2 - aq - q))
    out[core] = values[forward] + values[backward] - 2.0 * values[core]
    return out


def ma_apply(v: MeshFunction, node: GridIndex, cfg: OperatorConfig) -> float:
    """M_h[v] at a single interior node."""
    h2 = v.grid.h ** 2
    best = np.inf
    for basis in admissible_bases(v.grid, node, cfg.stencil):
        product = 1.0
        for d in basis:
            product *= max(second_difference(v, node, d) / (d.norm2 * h2), 0.0)
        best = min(best, product)
    return best + cfg.signed_epsilon * v[node]


def operator_values(v: MeshFunction, cfg: OperatorConfig) -> np.ndarray:
    """M_h[v] on all interior nodes as an array; zero on the boundary."""
    grid = v.grid
    h2 = grid.h ** 2
    best = np.full(grid.shape, np.inf)
    for basis in cfg.stencil.bases:
        if not admissibility_mask(grid, basis).any():
            continue
        product = np.ones(grid.shape)
        for d in basis:
            product *= np.maximum(directional_differences(v.values, d.p, d.q) / (d.norm2 * h2), 0.0)
        np.fmin(best, product, out=best)
    result = np.where(grid.interior_mask, best, 0.0)
    if cfg.epsilon:
        result[grid.interior_mask] += cfg.signed_epsilon * v.values[grid.interior_mask]
    return result


def ma_residual(
    v: MeshFunction,
    f: MeshFunction,
    cfg: OperatorConfig,
    boundary: MeshFunction | None = None,
) -> MeshFunction:
    """M_h[v] - f on the interior, v - g on the boundary (zero without g)."""
    grid = check_same_grid(v, f)
    values = operator_values(v, cfg) - f.values
    if boundary is None:
        values[grid.boundary_mask] = 0.0
    else:
        check_same_grid(v, boundary)
        values[grid.boundary_mask] = (v.values - boundary.values)[grid.boundary_mask]
    return v.with_values(values)


def _all_lattice_directions(grid: Grid) -> list[tuple[int, int]]:
    """Every lattice offset (up to sign) that fits inside the grid."""
    directions = [(0, q) for q in range(1, grid.n2 + 1)]
    directions += [(p, q) for p in range(1, grid.n1 + 1) for q in range(-grid.n2, grid.n2 + 1)]
    return directions


def is_discrete_convex(
    v: MeshFunction,
    stencil: StencilSet,
    full: bool = False,
    tol: float = 0.0,
) -> bool:
    """
    Nonnegativity of centered second differences at interior nodes.

    With full=False only the stencil directions are checked; full=True checks
    every lattice offset for which the difference is defined (quadratic in
    the number of nodes, meant for small grids).
    """
    if full:
        directions = _all_lattice_directions(v.grid)
    else:
        directions = [(d.p, d.q) for d in stencil.directions()]

    interior = v.grid.interior_mask
    for p, q in directions:
        diffs = directional_differences(v.values, p, q)
        defined = interior & ~np.isnan(diffs)
        if np.any(diffs[defined] < -tol):
            logger.debug("convexity fails along (%d, %d)", p, q)
            return False
    return True


def discrete_ma_measure(v: MeshFunction, box: BorelBox, cfg: OperatorConfig) -> float:
    """h^2 times the sum of M_h[v] over interior nodes in the closed box."""
    values = operator_values(v, cfg)
    return float(v.grid.h ** 2 * values[box.mask(v.grid)].sum())


def c0_bound(grid: Grid) -> float:
    """h^2 |interior|, the constant bounding measure differences by max-norm differences."""
    return grid.h ** 2 * (grid.n1 - 1) * (grid.n2 - 1)


def lipschitz_estimate(cfg: OperatorConfig, grid: Grid, trials: int, seed: int) -> float:
    """Largest observed |M_h[v] - M_h[w]| / |v - w| over random pairs."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = np.random.default_rng(seed)
    estimate = 0.0
    for _ in range(trials):
        v = MeshFunction(grid, rng.uniform(-1.0, 1.0, grid.shape))
        w = MeshFunction(grid, rng.uniform(-1.0, 1.0, grid.shape))
        denominator = max_norm(v.with_values(v.values - w.values), Region.ALL)
        if denominator == 0.0:
            continue
        numerator = max_norm(
            v.with_values(operator_values(v, cfg) - operator_values(w, cfg)), Region.INTERIOR
        )
        estimate = max(estimate, numerator / denominator)
    return estimate
