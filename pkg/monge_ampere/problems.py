"""
Benchmark catalog and the grid-refinement study driver.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from monge_ampere.errors import ConfigurationError, DivergenceError, PoissonConvergenceError
from monge_ampere.grid import Domain, GridSpec, Region, build_grid, max_norm_diff, restrict
from monge_ampere.measures import Atom, DiracSpread, MeasureSpec, register_density
from monge_ampere.operator import OperatorConfig, is_discrete_convex
from monge_ampere.poisson import PoissonConfig
from monge_ampere.solvers import SolverConfig, solve

logger = logging.getLogger(__name__)

Field2D = Callable[[np.ndarray, np.ndarray], np.ndarray]

# Max-norm errors for the two-Dirac problem, mu = 50, h = 1/2^3 ... 1/2^8.
TABLE1_H = [1 / 2**k for k in range(3, 9)]
TABLE1_ERRORS = [4.71e-1, 2.86e-1, 1.69e-1, 9.77e-2, 5.50e-2, 3.02e-2]


@dataclass(frozen=True)
class Problem:
    """Dirichlet Monge-Ampere problem det D^2 u = nu, u = g on the boundary."""

    name: str
    measure: MeasureSpec
    boundary: Field2D
    exact: Field2D | None = None
    domain: Domain = field(default_factory=Domain)
    description: str = ""

    def grid_spec(self, h: float) -> GridSpec:
        return GridSpec(domain=self.domain, h=float(h))

    def check_compatibility(self, samples: int = 64, tol: float = 1e-12) -> bool:
        """exact equals g at sampled points of the domain boundary."""
        if self.exact is None:
            return True
        d = self.domain
        t = np.linspace(0.0, 1.0, samples)
        xs = np.concatenate([
            d.x_min + t * (d.x_max - d.x_min),
            d.x_min + t * (d.x_max - d.x_min),
            np.full(samples, d.x_min),
            np.full(samples, d.x_max),
        ])
        ys = np.concatenate([
            np.full(samples, d.y_min),
            np.full(samples, d.y_max),
            d.y_min + t * (d.y_max - d.y_min),
            d.y_min + t * (d.y_max - d.y_min),
        ])
        return bool(np.all(np.abs(self.exact(xs, ys) - self.boundary(xs, ys)) <= tol))


def two_dirac_exact(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    ridge = np.abs(y - 0.5)
    cones = np.minimum(np.hypot(x - 0.25, y - 0.5), np.hypot(x - 0.75, y - 0.5))
    return np.where((x > 0.25) & (x < 0.75), ridge, cones)


def quadratic_exact(x, y):
    return 0.5 * (np.asarray(x, dtype=float) ** 2 + np.asarray(y, dtype=float) ** 2)


def smooth_radial_exact(x, y):
    return np.exp(quadratic_exact(x, y))


@register_density("smooth_radial")
def smooth_radial_density(x, y):
    r2 = np.asarray(x, dtype=float) ** 2 + np.asarray(y, dtype=float) ** 2
    return (1.0 + r2) * np.exp(r2)


def single_cone_exact(x, y):
    return np.hypot(np.asarray(x, dtype=float) - 0.5, np.asarray(y, dtype=float) - 0.5)


def two_dirac_problem() -> Problem:
    return Problem(
        name="two_dirac",
        measure=MeasureSpec(
            atoms=[Atom(x=0.25, y=0.5, w=np.pi / 2), Atom(x=0.75, y=0.5, w=np.pi / 2)]
        ),
        boundary=two_dirac_exact,
        exact=two_dirac_exact,
        description="sum of two Dirac masses of weight pi/2 at (1/4, 1/2) and (3/4, 1/2)",
    )


def quadratic_problem() -> Problem:
    return Problem(
        name="quadratic",
        measure=MeasureSpec(density="unit"),
        boundary=quadratic_exact,
        exact=quadratic_exact,
        description="u = (x^2 + y^2)/2, det D^2 u = 1",
    )


def smooth_radial_problem() -> Problem:
    return Problem(
        name="smooth_radial",
        measure=MeasureSpec(density="smooth_radial"),
        boundary=smooth_radial_exact,
        exact=smooth_radial_exact,
        description="u = exp((x^2 + y^2)/2), det D^2 u = (1 + x^2 + y^2) exp(x^2 + y^2)",
    )


def single_cone_problem() -> Problem:
    return Problem(
        name="single_cone",
        measure=MeasureSpec(atoms=[Atom(x=0.5, y=0.5, w=np.pi)]),
        boundary=single_cone_exact,
        exact=single_cone_exact,
        description="u = |x - (1/2, 1/2)|, nu = pi delta at the center",
    )


PROBLEMS: dict[str, Callable[[], Problem]] = {
    "two_dirac": two_dirac_problem,
    "quadratic": quadratic_problem,
    "smooth_radial": smooth_radial_problem,
    "single_cone": single_cone_problem,
}


def get_problem(name: str) -> Problem:
    try:
        return PROBLEMS[name]()
    except KeyError:
        raise ConfigurationError(
            f"unknown problem {name!r}; known: {', '.join(sorted(PROBLEMS))}"
        ) from None


@dataclass
class ErrorRow:
    h: float
    iterations: int
    converged: bool
    max_error: float | None
    residual: float
    wall_time: float
    discrete_convex: bool | None = None
    error: str | None = None


@dataclass
class ErrorTable:
    problem: str
    rows: list[ErrorRow] = field(default_factory=list)

    @property
    def all_converged(self) -> bool:
        return all(row.converged for row in self.rows)

    def errors(self) -> list[float | None]:
        return [row.max_error for row in self.rows]

    def csv_lines(self) -> list[list[str]]:
        lines = [["h", "iterations", "converged", "max_error", "residual", "wall_time_ms"]]
        for row in self.rows:
            lines.append([
                repr(row.h),
                str(row.iterations),
                str(row.converged).lower(),
                "" if row.max_error is None else f"{row.max_error:.17g}",
                f"{row.residual:.17g}",
                f"{row.wall_time * 1000.0:.3f}",
            ])
        return lines

    def to_text(self) -> str:
        """Aligned table: one column per h, as in a published error table."""
        labels = [f"1/{round(1 / row.h)}" for row in self.rows]
        errors = ["-" if row.max_error is None else f"{row.max_error:.2e}" for row in self.rows]
        iterations = [str(row.iterations) for row in self.rows]
        status = ["yes" if row.converged else "no" for row in self.rows]
        width = max(len(s) for s in labels + errors + iterations + ["converged"]) + 2
        out = [f"problem: {self.problem}"]
        for title, cells in (
            ("h", labels),
            ("max error", errors),
            ("iterations", iterations),
            ("converged", status),
        ):
            out.append(f"{title:<12}" + "".join(f"{c:>{width}}" for c in cells))
        return "\n".join(out) + "\n"


def _study_row(
    problem: Problem,
    h: float,
    cfg: SolverConfig,
    opcfg: OperatorConfig,
    pcfg: PoissonConfig,
    spread: DiracSpread,
) -> ErrorRow:
    try:
        result = solve(problem, h, cfg, opcfg, pcfg, spread=spread)
    except (DivergenceError, PoissonConvergenceError) as exc:
        logger.warning("h=%g failed: %s", h, exc)
        return ErrorRow(
            h=h, iterations=getattr(exc, "iteration", getattr(exc, "iterations", 0)),
            converged=False, max_error=None, residual=float("nan"),
            wall_time=0.0, error=str(exc),
        )

    max_error = None
    if problem.exact is not None:
        exact = restrict(problem.exact, result.solution.grid)
        max_error = max_norm_diff(result.solution, exact, Region.INTERIOR)
    return ErrorRow(
        h=h,
        iterations=result.iterations,
        converged=result.converged,
        max_error=max_error,
        residual=result.final_residual,
        wall_time=result.wall_time,
        discrete_convex=is_discrete_convex(result.solution, opcfg.stencil, tol=1e-10),
    )


def run_convergence_study(
    problem: Problem,
    h_list: list[float],
    cfg: SolverConfig,
    opcfg: OperatorConfig,
    pcfg: PoissonConfig,
    spread: DiracSpread | str = DiracSpread.NEAREST,
    max_workers: int = 1,
) -> ErrorTable:
    """Solve at every h; rows come back in h_list order."""
    if not h_list:
        raise ConfigurationError("h list is empty")
    spread = DiracSpread(spread)
    for h in h_list:
        build_grid(problem.grid_spec(h))

    def run(h: float) -> ErrorRow:
        return _study_row(problem, h, cfg, opcfg, pcfg, spread)

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            rows = list(pool.map(run, h_list))
    else:
        rows = [run(h) for h in h_list]
    return ErrorTable(problem=problem.name, rows=rows)
