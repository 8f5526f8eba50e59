"""
Discrete right-hand sides for a target measure nu (Dirac atoms plus density).
"""

import logging
from enum import Enum
from typing import Callable

import numpy as np
from pydantic import BaseModel, Field, field_validator
from scipy import integrate

from monge_ampere.errors import ConfigurationError
from monge_ampere.grid import Grid, MeshFunction
from monge_ampere.operator import BorelBox

logger = logging.getLogger(__name__)

Density = Callable[[np.ndarray, np.ndarray], np.ndarray | float]

DENSITIES: dict[str, Density] = {}


def register_density(name: str) -> Callable[[Density], Density]:
    """Make a density available to MeasureSpec by name."""

    def decorator(func: Density) -> Density:
        DENSITIES[name] = func
        return func

    return decorator


@register_density("unit")
def unit_density(x, y):
    return np.ones_like(np.asarray(x, dtype=float))


class DiracSpread(str, Enum):
    NEAREST = "nearest"
    BILINEAR = "bilinear"


class Atom(BaseModel):
    x: float
    y: float
    w: float = Field(..., gt=0)


class MeasureSpec(BaseModel):
    """Weighted Dirac atoms plus an optional registered density."""

    atoms: list[Atom] = Field(default_factory=list)
    density: str | None = None

    @field_validator("density")
    @classmethod
    def validate_density(cls, v: str | None) -> str | None:
        if v is not None and v not in DENSITIES:
            raise ValueError(f"unknown density {v!r}; known: {sorted(DENSITIES)}")
        return v

    def density_function(self) -> Density | None:
        return DENSITIES[self.density] if self.density else None

    @property
    def atom_mass(self) -> float:
        return sum(atom.w for atom in self.atoms)


def _check_atoms_inside(measure: MeasureSpec, grid: Grid) -> None:
    d = grid.spec.domain
    for atom in measure.atoms:
        if not (d.x_min < atom.x < d.x_max and d.y_min < atom.y < d.y_max):
            raise ConfigurationError(f"atom at ({atom.x}, {atom.y}) is not inside the domain")


def _nearest_interior_node(grid: Grid, x: float, y: float) -> tuple[int, int]:
    X, Y = grid.coordinates
    dist2 = np.where(grid.interior_mask, (X - x) ** 2 + (Y - y) ** 2, np.inf)
    # argmin returns the first minimum in C order: smallest row-major index
    flat = int(np.argmin(dist2))
    i, j = np.unravel_index(flat, grid.shape)
    if dist2[i, j] > 2.0 * grid.h ** 2 * (1.0 + 1e-12):
        raise ConfigurationError(f"no interior node within h*sqrt(2) of atom ({x}, {y})")
    return int(i), int(j)


def _bilinear_shares(grid: Grid, x: float, y: float) -> list[tuple[int, int, float]]:
    d = grid.spec.domain
    s = (x - d.x_min) / grid.h
    t = (y - d.y_min) / grid.h
    i0 = min(int(np.floor(s)), grid.n1 - 1)
    j0 = min(int(np.floor(t)), grid.n2 - 1)
    s -= i0
    t -= j0
    corners = [
        (i0, j0, (1 - s) * (1 - t)),
        (i0 + 1, j0, s * (1 - t)),
        (i0, j0 + 1, (1 - s) * t),
        (i0 + 1, j0 + 1, s * t),
    ]
    inside = [(i, j, c) for i, j, c in corners if 0 < i < grid.n1 and 0 < j < grid.n2 and c > 0]
    total = sum(c for _, _, c in inside)
    if total <= 0.0:
        raise ConfigurationError(f"atom ({x}, {y}) has no interior cell corner")
    # shares falling on boundary nodes are redistributed to keep the mass
    return [(i, j, c / total) for i, j, c in inside]


def build_rhs(
    measure: MeasureSpec,
    grid: Grid,
    spread: DiracSpread | str = DiracSpread.NEAREST,
) -> MeshFunction:
    """f_h >= 0 on the interior, zero on the boundary, with h^2 sum f_h -> nu."""
    spread = DiracSpread(spread)
    _check_atoms_inside(measure, grid)
    values = np.zeros(grid.shape)

    density = measure.density_function()
    if density is not None:
        X, Y = grid.coordinates
        sampled = np.broadcast_to(np.asarray(density(X, Y), dtype=float), grid.shape)
        if np.any(sampled[grid.interior_mask] < 0):
            raise ConfigurationError(f"density {measure.density!r} is negative somewhere")
        values[grid.interior_mask] += sampled[grid.interior_mask]

    load = 1.0 / grid.h ** 2
    for atom in measure.atoms:
        if spread is DiracSpread.NEAREST:
            i, j = _nearest_interior_node(grid, atom.x, atom.y)
            values[i, j] += atom.w * load
        else:
            for i, j, share in _bilinear_shares(grid, atom.x, atom.y):
                values[i, j] += share * atom.w * load

    return MeshFunction(grid, values)


def measure_of_box(f: MeshFunction, box: BorelBox) -> float:
    """h^2 times the sum of f over interior nodes in the closed box."""
    return float(f.grid.h ** 2 * f.values[box.mask(f.grid)].sum())


def reference_measure(measure: MeasureSpec, box: BorelBox) -> float:
    """nu(B): atoms strictly inside plus the density integrated by adaptive quadrature."""
    total = 0.0
    for atom in measure.atoms:
        if box.on_boundary(atom.x, atom.y):
            raise ConfigurationError(
                f"atom ({atom.x}, {atom.y}) lies on the box boundary; choose a different box"
            )
        if box.contains_point(atom.x, atom.y):
            total += atom.w

    density = measure.density_function()
    if density is not None and box.x_max > box.x_min and box.y_max > box.y_min:
        value, abserr = integrate.dblquad(
            lambda y, x: float(density(x, y)),
            box.x_min,
            box.x_max,
            box.y_min,
            box.y_max,
            epsabs=1e-13,
            epsrel=1e-10,
        )
        logger.debug("density integral %.12g (error estimate %.2e)", value, abserr)
        total += value
    return total
