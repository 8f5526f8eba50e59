"""
Property suites that check the scheme's convergence and contraction claims
at run time. Each suite returns CheckResults; nothing here raises on a
failed property.
"""

import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Callable

import numpy as np
from pydantic import BaseModel, Field

from monge_ampere.errors import ConfigurationError, DivergenceError
from monge_ampere.grid import Grid, GridIndex, GridSpec, MeshFunction, Region, build_grid, max_norm_diff, restrict
from monge_ampere.measures import DiracSpread, build_rhs, measure_of_box, reference_measure
from monge_ampere.operator import BorelBox, OperatorConfig, c0_bound, discrete_ma_measure, ma_apply
from monge_ampere.poisson import PoissonConfig, inv_norm_estimate
from monge_ampere.problems import (
    TABLE1_ERRORS,
    TABLE1_H,
    quadratic_exact,
    quadratic_problem,
    run_convergence_study,
    smooth_radial_problem,
    two_dirac_problem,
)
from monge_ampere.solvers import (
    InitialGuess,
    SamplingMode,
    SolverConfig,
    SolverMethod,
    contraction_ratio,
    solve,
)

logger = logging.getLogger(__name__)

REPORT_SCHEMA = 1

CONSISTENCY_BOX = BorelBox(x_min=0.2, x_max=0.6, y_min=0.1, y_max=0.7)
CONSISTENCY_H = [1 / 16, 1 / 32, 1 / 64, 1 / 128]
DIRAC_BOX = BorelBox(x_min=0.05, x_max=0.45, y_min=0.3, y_max=0.7)
DIRAC_H = [1 / 64, 1 / 128, 1 / 256]
LAPLACIAN_H = [1 / 16, 1 / 64, 1 / 256]
QUADRATIC_H = [1 / 8, 1 / 32, 1 / 128]


class VerificationOptions(BaseModel):
    h: float = Field(1 / 32, gt=0)
    h_list: list[float] | None = None
    method: SolverMethod | None = None
    mu: float = Field(50.0, gt=0)
    retry_mu: list[float] = Field(default_factory=lambda: [500.0])
    trials: int | None = Field(None, ge=1)
    seed: int = 7
    sampling: SamplingMode = SamplingMode.SMOOTH
    amplitude: float = Field(1e-3, gt=0)
    max_iter: int = Field(1_000_000, ge=1)
    operator: OperatorConfig = Field(default_factory=OperatorConfig)
    poisson: PoissonConfig = Field(default_factory=PoissonConfig)
    spread: DiracSpread = DiracSpread.NEAREST


@dataclass
class CheckResult:
    name: str
    passed: bool
    values: dict[str, Any] = field(default_factory=dict)


@dataclass
class VerificationReport:
    seed: int
    suites: list[str]
    checks: list[CheckResult]
    schema: int = REPORT_SCHEMA

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def crashed(self) -> bool:
        return any(check.name.endswith(":crash") for check in self.checks)

    def to_payload(self) -> dict[str, Any]:
        return {
            "schema": self.schema,
            "seed": self.seed,
            "suites": self.suites,
            "passed": self.passed,
            "checks": [asdict(check) for check in self.checks],
        }


def _strictly_decreasing(values: list[float]) -> bool:
    return all(b < a for a, b in zip(values, values[1:]))


def check_laplacian_norm(options: VerificationOptions) -> list[CheckResult]:
    h_list = options.h_list or LAPLACIAN_H
    norms = [inv_norm_estimate(build_grid(GridSpec(h=h)), options.poisson) for h in h_list]
    spread = (max(norms) - min(norms)) / min(norms)
    values = {"h": h_list, "norms": norms, "relative_spread": spread}
    return [
        CheckResult("laplacian-norm:spread", spread < 0.05, values),
        CheckResult("laplacian-norm:bound", all(n <= 0.125 for n in norms), {"h": h_list, "norms": norms}),
    ]


def _contraction_check(
    method: SolverMethod,
    sampling: SamplingMode,
    grid: Grid,
    trials: int,
    options: VerificationOptions,
) -> CheckResult:
    if sampling is SamplingMode.SMOOTH:
        base, amplitude = restrict(quadratic_exact, grid), options.amplitude
    else:
        base, amplitude = None, 1.0

    ratios: dict[str, float] = {}
    passed = False
    for mu in [options.mu, *options.retry_mu]:
        ratio = contraction_ratio(
            method, mu, grid, options.operator, options.poisson, trials, options.seed,
            sampling=sampling, base=base, amplitude=amplitude,
        )
        ratios[f"{mu:g}"] = ratio
        logger.info("contraction %s (%s) mu=%g: %.6f", method.value, sampling.value, mu, ratio)
        if ratio < 1.0:
            passed = True
            break
    return CheckResult(
        f"contraction:{method.value}:{sampling.value}",
        passed,
        {"h": options.h, "trials": trials, "sampling": sampling.value,
         "amplitude": amplitude, "ratios": ratios},
    )


def check_contraction(options: VerificationOptions) -> list[CheckResult]:
    """
    Step-map ratios under the configured sampling. Uniform pairs in [-1, 1]
    are always reported as their own check as well.
    """
    grid = build_grid(GridSpec(h=options.h))
    trials = options.trials or 100
    methods = [options.method] if options.method else [SolverMethod.PRECONDITIONED, SolverMethod.BASIC]
    samplings = [options.sampling]
    if options.sampling is not SamplingMode.UNIFORM:
        samplings.append(SamplingMode.UNIFORM)

    return [
        _contraction_check(method, sampling, grid, trials, options)
        for method in methods
        for sampling in samplings
    ]


def check_ellipticity(options: VerificationOptions) -> list[CheckResult]:
    """Single-entry perturbations: neighbor up never lowers M_h, center up never raises it."""
    grid = build_grid(GridSpec(h=options.h))
    cfg = options.operator.model_copy(update={"epsilon": 0.0})
    offsets = cfg.stencil.offsets
    rng = np.random.default_rng(options.seed)
    trials = options.trials or 1000

    violations = 0
    for _ in range(trials):
        v = MeshFunction(grid, rng.uniform(-1.0, 1.0, grid.shape))
        node = GridIndex(int(rng.integers(1, grid.n1)), int(rng.integers(1, grid.n2)))
        before = ma_apply(v, node, cfg)
        bump = float(rng.uniform(0.0, 1.0))
        perturbed = v.values.copy()
        if rng.random() < 0.5:
            perturbed[node.i, node.j] += bump
            after = ma_apply(v.with_values(perturbed), node, cfg)
            violations += after > before
        else:
            candidates = [d.step(node) for d in offsets if grid.contains(d.step(node))]
            target = candidates[int(rng.integers(len(candidates)))]
            perturbed[target.i, target.j] += bump
            after = ma_apply(v.with_values(perturbed), node, cfg)
            violations += after < before
    return [CheckResult(
        "ellipticity:monotone",
        violations == 0,
        {"h": options.h, "trials": trials, "violations": int(violations)},
    )]


def check_measure_convergence(options: VerificationOptions) -> list[CheckResult]:
    problem = smooth_radial_problem()
    reference = reference_measure(problem.measure, CONSISTENCY_BOX)
    smooth_errors = []
    # the lattice sum of f_h over the box carries the same node-count oscillation
    rhs_errors = []
    for h in CONSISTENCY_H:
        grid = build_grid(problem.grid_spec(h))
        u = restrict(problem.exact, grid)
        smooth_errors.append(abs(discrete_ma_measure(u, CONSISTENCY_BOX, options.operator) - reference) / reference)
        rhs = measure_of_box(build_rhs(problem.measure, grid, options.spread), CONSISTENCY_BOX)
        rhs_errors.append(abs(rhs - reference) / reference)

    dirac = two_dirac_problem()
    target = reference_measure(dirac.measure, DIRAC_BOX)
    dirac_measures = []
    for h in DIRAC_H:
        u = restrict(dirac.exact, build_grid(dirac.grid_spec(h)))
        dirac_measures.append(discrete_ma_measure(u, DIRAC_BOX, options.operator))
    dirac_errors = [abs(m - target) / target for m in dirac_measures]

    return [
        CheckResult(
            "measure-convergence:smooth",
            _strictly_decreasing(smooth_errors) and smooth_errors[-1] <= 0.01,
            {"h": CONSISTENCY_H, "reference": reference, "relative_errors": smooth_errors,
             "rhs_relative_errors": rhs_errors},
        ),
        CheckResult(
            "measure-convergence:dirac",
            _strictly_decreasing(dirac_errors) and dirac_errors[-1] <= 0.10,
            {"h": DIRAC_H, "reference": target, "measures": dirac_measures, "relative_errors": dirac_errors},
        ),
    ]


def check_measure_bound(options: VerificationOptions) -> list[CheckResult]:
    """|h^2 sum_B v - h^2 sum_B w| <= C0 |v - w| for nonnegative mesh functions."""
    grid = build_grid(GridSpec(h=options.h))
    c0 = c0_bound(grid)
    rng = np.random.default_rng(options.seed)
    d = grid.spec.domain
    boxes = []
    for _ in range(10):
        xs = np.sort(rng.uniform(d.x_min, d.x_max, 2))
        ys = np.sort(rng.uniform(d.y_min, d.y_max, 2))
        boxes.append(BorelBox(x_min=xs[0], x_max=xs[1], y_min=ys[0], y_max=ys[1]))

    pairs = options.trials or 100
    violations = 0
    worst = 0.0
    for _ in range(pairs):
        v = MeshFunction(grid, rng.uniform(0.0, 1.0, grid.shape))
        w = MeshFunction(grid, rng.uniform(0.0, 1.0, grid.shape))
        bound = c0 * max_norm_diff(v, w, Region.ALL)
        for box in boxes:
            gap = abs(measure_of_box(v, box) - measure_of_box(w, box))
            worst = max(worst, gap / bound if bound else 0.0)
            violations += gap > bound * (1.0 + 1e-12)
    return [CheckResult(
        "measure-bound:c0",
        violations == 0,
        {"h": options.h, "c0": c0, "pairs": pairs, "boxes": len(boxes),
         "violations": int(violations), "worst_ratio": worst},
    )]


def _solve_or_none(problem, h, cfg, options):
    try:
        return solve(problem, h, cfg, options.operator, options.poisson, spread=options.spread)
    except DivergenceError as exc:
        logger.info("%s diverged: %s", cfg.method.value, exc)
        return None


def check_speedup(options: VerificationOptions) -> list[CheckResult]:
    problem = smooth_radial_problem()
    counts: dict[str, Any] = {}
    results = {}
    for method in (SolverMethod.PRECONDITIONED, SolverMethod.BASIC):
        cfg = SolverConfig(method=method, mu=options.mu, tol=1e-8, max_iter=options.max_iter)
        result = _solve_or_none(problem, options.h, cfg, options)
        results[method] = result
        if result is None:
            counts[method.value] = "diverged"
        else:
            counts[method.value] = result.iterations if result.converged else "non-convergent"

    pre, basic = results[SolverMethod.PRECONDITIONED], results[SolverMethod.BASIC]
    basic_failed = basic is None or not basic.converged
    passed = pre is not None and pre.converged and (basic_failed or pre.iterations < basic.iterations)
    return [CheckResult("speedup:iterations", passed, {"h": options.h, "mu": options.mu, "iterations": counts})]


def check_quadratic(options: VerificationOptions) -> list[CheckResult]:
    problem = quadratic_problem()
    rows = []
    passed = True
    for h in options.h_list or QUADRATIC_H:
        for method in SolverMethod:
            cfg = SolverConfig(method=method, mu=options.mu, tol=1e-10,
                               max_iter=options.max_iter, initial_guess=InitialGuess.EXACT)
            result = solve(problem, h, cfg, options.operator, options.poisson)
            error = max_norm_diff(result.solution, restrict(problem.exact, result.solution.grid), Region.INTERIOR)
            ok = result.converged and error <= 1e-8
            passed &= ok
            rows.append({"h": h, "method": method.value, "converged": result.converged, "max_error": error})
    return [CheckResult("quadratic:exactness", passed, {"runs": rows})]


def check_reproduction(options: VerificationOptions) -> list[CheckResult]:
    h_list = options.h_list or TABLE1_H
    cfg = SolverConfig(
        method=SolverMethod.PRECONDITIONED, mu=options.mu, tol=1e-8,
        max_iter=options.max_iter, initial_guess=InitialGuess.EXACT,
    )
    table = run_convergence_study(
        two_dirac_problem(), h_list, cfg, options.operator, options.poisson, spread=options.spread,
    )
    errors = table.errors()
    reference = dict(zip(TABLE1_H, TABLE1_ERRORS))
    relative = [
        abs(e - reference[h]) / reference[h] if e is not None and h in reference else None
        for h, e in zip(h_list, errors)
    ]
    passed = (
        all(e is not None for e in errors)
        and _strictly_decreasing(errors)
        and all(r is not None and r <= 0.30 for r in relative)
    )
    return [CheckResult(
        "reproduction:table1",
        passed,
        {"h": h_list, "errors": errors, "reference": [reference.get(h) for h in h_list],
         "relative_deviation": relative, "converged": [row.converged for row in table.rows]},
    )]


SUITES: dict[str, Callable[[VerificationOptions], list[CheckResult]]] = {
    "laplacian-norm": check_laplacian_norm,
    "contraction": check_contraction,
    "ellipticity": check_ellipticity,
    "measure-convergence": check_measure_convergence,
    "measure-bound": check_measure_bound,
    "speedup": check_speedup,
    "quadratic": check_quadratic,
    "reproduction": check_reproduction,
}


def run_suite(name: str, options: VerificationOptions) -> list[CheckResult]:
    if name not in SUITES:
        raise ConfigurationError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    try:
        return SUITES[name](options)
    except Exception as exc:
        logger.exception("suite %s crashed", name)
        return [CheckResult(f"{name}:crash", False, {"error": f"{type(exc).__name__}: {exc}"})]


def run_verification(suites: list[str], options: VerificationOptions) -> VerificationReport:
    for name in suites:
        if name not in SUITES:
            raise ConfigurationError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    checks: list[CheckResult] = []
    for name in suites:
        checks.extend(run_suite(name, options))
    return VerificationReport(seed=options.seed, suites=list(suites), checks=checks)
