"""
Orthogonal integer direction bases for the wide stencil.

In 2D every orthogonal basis of primitive lattice directions is {a, a_perp}
with a_perp = (-q, p). A basis class (all sign flips and orderings) is
represented once, by the member lying in the quadrant p > 0, q >= 0 together
with its counter-clockwise perpendicular.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

import numpy as np

from monge_ampere.grid import Grid, GridIndex

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Direction:
    """Primitive integer offset (p, q) in lattice units."""

    p: int
    q: int

    def __post_init__(self):
        if (self.p, self.q) == (0, 0):
            raise ValueError("direction must be nonzero")
        if gcd(abs(self.p), abs(self.q)) != 1:
            raise ValueError(f"direction ({self.p}, {self.q}) is not primitive")

    @property
    def norm2(self) -> int:
        return self.p * self.p + self.q * self.q

    @property
    def perp(self) -> "Direction":
        return Direction(-self.q, self.p)

    def __neg__(self) -> "Direction":
        return Direction(-self.p, -self.q)

    def dot(self, other: "Direction") -> int:
        return self.p * other.p + self.q * other.q

    def step(self, node: GridIndex, sign: int = 1) -> GridIndex:
        return GridIndex(node.i + sign * self.p, node.j + sign * self.q)


@dataclass(frozen=True)
class OrthogonalBasis:
    first: Direction
    second: Direction

    def __post_init__(self):
        if self.first.dot(self.second) != 0:
            raise ValueError("basis directions must be orthogonal")

    def __iter__(self):
        yield self.first
        yield self.second


@dataclass(frozen=True)
class StencilSet:
    width: int
    bases: tuple[OrthogonalBasis, ...]
    offsets: tuple[Direction, ...]

    @property
    def size(self) -> int:
        """Number of stencil points, center included."""
        return len(self.offsets) + 1

    def directions(self) -> tuple[Direction, ...]:
        """One representative per +/- pair of offsets."""
        return tuple(d for basis in self.bases for d in basis)


@lru_cache
def enumerate_bases(width: int) -> StencilSet:
    """All canonical orthogonal bases with max component at most width."""
    if width < 1:
        raise ValueError("stencil width must be at least 1")

    canonical = [
        Direction(p, q)
        for p in range(1, width + 1)
        for q in range(0, width + 1)
        if gcd(p, q) == 1
    ]
    canonical.sort(key=lambda d: (d.norm2, -d.p, d.q))
    bases = tuple(OrthogonalBasis(d, d.perp) for d in canonical)

    offsets: list[Direction] = []
    for basis in bases:
        for d in (basis.first, -basis.first, basis.second, -basis.second):
            if d not in offsets:
                offsets.append(d)

    stencil = StencilSet(width=width, bases=bases, offsets=tuple(offsets))
    logger.debug("stencil width %d: %d bases, %d points", width, len(bases), stencil.size)
    return stencil


def basis_fits(grid: Grid, node: GridIndex, basis: OrthogonalBasis) -> bool:
    """All four neighbors node +/- alpha lie in the closed lattice."""
    return all(
        grid.contains(d.step(node, sign)) for d in basis for sign in (1, -1)
    )


def admissible_bases(grid: Grid, node: GridIndex, stencil: StencilSet) -> list[OrthogonalBasis]:
    """Bases whose neighbors at the node are interior or boundary nodes."""
    if not grid.is_interior(node):
        raise ValueError(f"node {tuple(node)} is not an interior node")
    bases = [basis for basis in stencil.bases if basis_fits(grid, node, basis)]
    assert bases, "the axis basis is admissible at every interior node"
    return bases


def admissibility_mask(grid: Grid, basis: OrthogonalBasis) -> np.ndarray:
    """Interior nodes at which the basis is admissible."""
    mask = grid.interior_mask.copy()
    i = np.arange(grid.n1 + 1)[:, None]
    j = np.arange(grid.n2 + 1)[None, :]
    for d in basis:
        ap, aq = abs(d.p), abs(d.q)
        mask &= (i >= ap) & (i <= grid.n1 - ap) & (j >= aq) & (j <= grid.n2 - aq)
    return mask
