"""
Lattice geometry on a rectangular domain.

Nodes are indexed (i, j) with position (x_min + i*h, y_min + j*h). Mesh
function values are stored as a 2D array indexed [i, j], so C order is the
row-major node order used everywhere (i outer, j inner).
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Callable, NamedTuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from monge_ampere.errors import ConfigurationError, GridMismatchError

# Relative slack when checking that h divides a side.
_DIVISION_TOL = 1e-9


class Domain(BaseModel):
    """Axis-aligned rectangle [x_min, x_max] x [y_min, y_max]."""

    model_config = ConfigDict(frozen=True)

    x_min: float = 0.0
    x_max: float = 1.0
    y_min: float = 0.0
    y_max: float = 1.0

    @model_validator(mode="after")
    def check_ordered(self) -> "Domain":
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise ValueError("domain corners must satisfy x_min < x_max, y_min < y_max")
        return self


class GridSpec(BaseModel):
    """A domain together with a mesh length."""

    model_config = ConfigDict(frozen=True)

    domain: Domain = Field(default_factory=Domain)
    h: float = Field(..., gt=0)

    def divisions(self) -> tuple[int, int]:
        """Number of cells along each axis; ConfigurationError if h does not divide a side."""
        counts = []
        for side in (
            self.domain.x_max - self.domain.x_min,
            self.domain.y_max - self.domain.y_min,
        ):
            ratio = side / self.h
            n = round(ratio)
            if n < 1 or abs(ratio - n) > _DIVISION_TOL * max(1.0, ratio):
                raise ConfigurationError(
                    f"h must divide domain side (side {side}, h {self.h})"
                )
            counts.append(n)
        return counts[0], counts[1]


class GridIndex(NamedTuple):
    i: int
    j: int


class Region(str, Enum):
    """Node subsets a norm can be taken over."""

    INTERIOR = "interior"
    BOUNDARY = "boundary"
    ALL = "all"


@dataclass(frozen=True, eq=False)
class Grid:
    """Closed lattice of a rectangle, split into interior and boundary nodes."""

    spec: GridSpec
    n1: int
    n2: int

    @property
    def h(self) -> float:
        return self.spec.h

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n1 + 1, self.n2 + 1)

    @cached_property
    def x(self) -> np.ndarray:
        d = self.spec.domain
        return np.linspace(d.x_min, d.x_max, self.n1 + 1)

    @cached_property
    def y(self) -> np.ndarray:
        d = self.spec.domain
        return np.linspace(d.y_min, d.y_max, self.n2 + 1)

    @cached_property
    def coordinates(self) -> tuple[np.ndarray, np.ndarray]:
        """Node positions as two arrays of grid shape."""
        return np.meshgrid(self.x, self.y, indexing="ij")

    @cached_property
    def interior_mask(self) -> np.ndarray:
        mask = np.zeros(self.shape, dtype=bool)
        mask[1:-1, 1:-1] = True
        return mask

    @cached_property
    def boundary_mask(self) -> np.ndarray:
        return ~self.interior_mask

    @cached_property
    def interior(self) -> list[GridIndex]:
        return [GridIndex(int(i), int(j)) for i, j in np.argwhere(self.interior_mask)]

    @cached_property
    def boundary(self) -> list[GridIndex]:
        return [GridIndex(int(i), int(j)) for i, j in np.argwhere(self.boundary_mask)]

    def position(self, node: GridIndex) -> tuple[float, float]:
        return float(self.x[node.i]), float(self.y[node.j])

    def contains(self, node: GridIndex) -> bool:
        """True if the node lies in the closed lattice (interior or boundary)."""
        return 0 <= node.i <= self.n1 and 0 <= node.j <= self.n2

    def is_interior(self, node: GridIndex) -> bool:
        return 0 < node.i < self.n1 and 0 < node.j < self.n2

    def region_mask(self, region: Region | str) -> np.ndarray:
        region = Region(region)
        if region is Region.INTERIOR:
            return self.interior_mask
        if region is Region.BOUNDARY:
            return self.boundary_mask
        return np.ones(self.shape, dtype=bool)

    def same_as(self, other: "Grid") -> bool:
        return self is other or (
            self.spec == other.spec and self.shape == other.shape
        )


def build_grid(spec: GridSpec) -> Grid:
    """Classify the lattice nodes of the closed rectangle."""
    n1, n2 = spec.divisions()
    return Grid(spec=spec, n1=n1, n2=n2)


@dataclass(eq=False)
class MeshFunction:
    """Real values on every node of a grid (interior and boundary)."""

    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.grid.shape:
            raise GridMismatchError(
                f"values of shape {self.values.shape} do not fit grid {self.grid.shape}"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValueError("mesh function values must be finite")

    def __getitem__(self, node: GridIndex) -> float:
        return float(self.values[node.i, node.j])

    def copy(self) -> "MeshFunction":
        return MeshFunction(self.grid, self.values.copy())

    def with_values(self, values: np.ndarray) -> "MeshFunction":
        return MeshFunction(self.grid, values)

    @classmethod
    def zeros(cls, grid: Grid) -> "MeshFunction":
        return cls(grid, np.zeros(grid.shape))


def restrict(f: Callable[[np.ndarray, np.ndarray], np.ndarray | float], grid: Grid) -> MeshFunction:
    """Sample a vectorized function f(x, y) at every node."""
    X, Y = grid.coordinates
    values = np.broadcast_to(np.asarray(f(X, Y), dtype=float), grid.shape)
    return MeshFunction(grid, values.copy())


def check_same_grid(*functions: MeshFunction) -> Grid:
    grid = functions[0].grid
    for other in functions[1:]:
        if not grid.same_as(other.grid):
            raise GridMismatchError("mesh functions are defined on different grids")
    return grid


def max_norm(v: MeshFunction, region: Region | str = Region.ALL) -> float:
    selected = v.values[v.grid.region_mask(region)]
    if selected.size == 0:
        return 0.0
    return float(np.max(np.abs(selected)))


def max_norm_diff(v: MeshFunction, w: MeshFunction, region: Region | str = Region.ALL) -> float:
    check_same_grid(v, w)
    return max_norm(v.with_values(v.values - w.values), region)


def box_mask(grid: Grid, x_min: float, x_max: float, y_min: float, y_max: float) -> np.ndarray:
    """Interior nodes whose position lies in the closed box."""
    X, Y = grid.coordinates
    slack = 1e-12 * max(1.0, abs(x_max), abs(y_max))
    inside = (
        (X >= x_min - slack)
        & (X <= x_max + slack)
        & (Y >= y_min - slack)
        & (Y <= y_max + slack)
    )
    return inside & grid.interior_mask
