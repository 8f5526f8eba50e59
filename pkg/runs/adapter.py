"""
Adapter between the run surfaces (command line, HTTP) and the solver engine.

Each run turns a request into engine configs, executes it, writes its
artifacts under out_dir and returns the summary plus the exit code:
0 success, 2 non-converged or failed check, 3 crashed verification suite.
Configuration problems raise ConfigurationError and are mapped to exit 1
by the caller.
"""

import logging
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

from config import get_settings
from monge_ampere.errors import DivergenceError, PoissonConvergenceError
from monge_ampere.grid import Region, build_grid, max_norm_diff, restrict
from monge_ampere.operator import OperatorConfig, is_discrete_convex
from monge_ampere.output import (
    SCHEMA_VERSION,
    read_mesh_csv,
    to_jsonable,
    write_error_table,
    write_history_csv,
    write_json,
    write_mesh_csv,
)
from monge_ampere.poisson import PoissonConfig
from monge_ampere.problems import get_problem, run_convergence_study
from monge_ampere.solvers import SolverConfig, solve
from monge_ampere.verification import VerificationOptions, run_verification
from runs.requests import SolveRequest, SolverOptions, StudyRequest, VerifyRequest, parse_h, parse_h_list

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NOT_CONVERGED = 2
EXIT_CRASH = 3


@dataclass
class RunOutcome:
    """Summary payload, exit code and the artifacts a run wrote."""

    summary: dict[str, Any]
    exit_code: int
    artifacts: list[Path] = field(default_factory=list)


@dataclass
class SolveOutcome(RunOutcome):
    pass


@dataclass
class StudyOutcome(RunOutcome):
    pass


@dataclass
class VerifyOutcome(RunOutcome):
    pass


def format_h(h: Fraction) -> str:
    return f"1/{h.denominator}" if h.numerator == 1 else str(float(h))


def _operator_config(request: SolverOptions) -> OperatorConfig:
    return OperatorConfig(
        stencil_width=request.stencil_width,
        epsilon=request.epsilon,
        epsilon_sign=request.epsilon_sign,
    )


def _poisson_config(request: SolverOptions) -> PoissonConfig:
    return PoissonConfig(
        method=request.poisson,
        rel_tol=request.poisson_tol,
        max_iter=request.poisson_max_iter,
        workers=request.threads,
    )


def _solver_config(request: SolverOptions) -> SolverConfig:
    return SolverConfig(
        method=request.method,
        mu=request.mu,
        tol=request.tol,
        max_iter=request.max_iter,
        initial_guess=request.initial_guess,
        stopping=request.stopping,
    )


def _settings_echo(request: SolverOptions) -> dict[str, Any]:
    return {
        "method": request.method.value if request.method else None,
        "mu": request.mu,
        "tol": request.tol,
        "max_iter": request.max_iter,
        "stencil_width": request.stencil_width,
        "epsilon": request.epsilon,
        "epsilon_sign": request.epsilon_sign.value,
        "init": request.init,
        "poisson": request.poisson.value,
        "poisson_tol": request.poisson_tol,
        "dirac_spread": request.dirac_spread.value,
        "stopping": request.stopping.value,
    }


class RunAdapter:
    """Executes solve, study and verify runs and writes their artifacts."""

    def __init__(self):
        self.settings = get_settings()

    def _workers(self, request: SolverOptions) -> int:
        return request.threads or os.cpu_count() or 1

    def solve(self, request: SolveRequest, out_dir: Optional[Path] = None) -> SolveOutcome:
        """
        Run one solve.

        Writes solution.csv, history.csv and summary.json.
        """
        out_dir = Path(out_dir or self.settings.output_dir)
        problem = get_problem(request.problem)
        h = parse_h(request.h)
        grid = build_grid(problem.grid_spec(float(h)))
        opcfg = _operator_config(request)

        initial = None
        if request.init_path is not None:
            initial = read_mesh_csv(Path(request.init_path), grid)

        summary: dict[str, Any] = {
            "schema": SCHEMA_VERSION,
            "kind": "solve",
            "problem": problem.name,
            "h": format_h(h),
            "h_value": float(h),
            **_settings_echo(request),
        }
        artifacts: list[Path] = []

        try:
            result = solve(
                problem,
                float(h),
                _solver_config(request),
                opcfg,
                _poisson_config(request),
                spread=request.dirac_spread,
                initial=initial,
            )
        except (DivergenceError, PoissonConvergenceError) as exc:
            logger.warning("solve %s at h=%s failed: %s", problem.name, format_h(h), exc)
            summary.update({
                "converged": False,
                "iterations": getattr(exc, "iteration", getattr(exc, "iterations", 0)),
                "error": f"{type(exc).__name__}: {exc}",
                "max_error": None,
            })
        else:
            solution_path = out_dir / "solution.csv"
            history_path = out_dir / "history.csv"
            write_mesh_csv(result.solution, solution_path)
            write_history_csv(result.residual_history, history_path)
            artifacts += [solution_path, history_path]

            max_error = None
            if problem.exact is not None:
                exact = restrict(problem.exact, grid)
                max_error = max_norm_diff(result.solution, exact, Region.INTERIOR)
            summary.update({
                "converged": result.converged,
                "iterations": result.iterations,
                "initial_residual": result.initial_residual,
                "final_residual": result.final_residual,
                "max_error": max_error,
                "discrete_convex": is_discrete_convex(result.solution, opcfg.stencil, tol=1e-10),
                "wall_time": result.wall_time,
                "error": None,
            })

        summary_path = out_dir / "summary.json"
        write_json(summary, summary_path)
        artifacts.append(summary_path)
        logger.info("solve artifacts written to %s", out_dir)

        exit_code = EXIT_OK if summary["converged"] else EXIT_NOT_CONVERGED
        return SolveOutcome(summary=to_jsonable(summary), exit_code=exit_code, artifacts=artifacts)

    def study(self, request: StudyRequest, out_dir: Optional[Path] = None) -> StudyOutcome:
        """Run a convergence study; writes study.csv, study.txt and study.json."""
        out_dir = Path(out_dir or self.settings.output_dir)
        problem = get_problem(request.problem)
        h_list = parse_h_list(request.h_list)

        table = run_convergence_study(
            problem,
            [float(h) for h in h_list],
            _solver_config(request),
            _operator_config(request),
            _poisson_config(request),
            spread=request.dirac_spread,
            max_workers=self._workers(request),
        )

        csv_path = out_dir / "study.csv"
        text_path = out_dir / "study.txt"
        json_path = out_dir / "study.json"
        write_error_table(table, csv_path, text_path)

        summary: dict[str, Any] = {
            "schema": SCHEMA_VERSION,
            "kind": "study",
            "problem": problem.name,
            "h_list": [format_h(h) for h in h_list],
            **_settings_echo(request),
            "all_converged": table.all_converged,
            "rows": [
                {
                    "h": format_h(h),
                    "iterations": row.iterations,
                    "converged": row.converged,
                    "max_error": row.max_error,
                    "residual": row.residual,
                    "discrete_convex": row.discrete_convex,
                    "wall_time": row.wall_time,
                    "error": row.error,
                }
                for h, row in zip(h_list, table.rows)
            ],
        }
        write_json(summary, json_path)
        logger.info("study artifacts written to %s", out_dir)

        exit_code = EXIT_OK if table.all_converged else EXIT_NOT_CONVERGED
        return StudyOutcome(summary=to_jsonable(summary), exit_code=exit_code, artifacts=[csv_path, text_path, json_path])

    def verify(self, request: VerifyRequest, out_dir: Optional[Path] = None) -> VerifyOutcome:
        """Run the selected property suites; writes verify.json."""
        out_dir = Path(out_dir or self.settings.output_dir)
        options: dict[str, Any] = {
            "method": request.method,
            "mu": request.mu,
            "retry_mu": request.retry_mu,
            "trials": request.trials,
            "seed": request.seed,
            "sampling": request.sampling,
            "max_iter": request.max_iter,
            "operator": _operator_config(request),
            "poisson": _poisson_config(request),
            "spread": request.dirac_spread,
        }
        if request.h is not None:
            options["h"] = float(parse_h(request.h))
        if request.h_list is not None:
            options["h_list"] = [float(h) for h in parse_h_list(request.h_list)]

        report = run_verification(request.suites, VerificationOptions(**options))

        summary = report.to_payload()
        json_path = out_dir / "verify.json"
        write_json(summary, json_path)
        logger.info("verification report written to %s", json_path)

        if report.crashed:
            exit_code = EXIT_CRASH
        elif report.passed:
            exit_code = EXIT_OK
        else:
            exit_code = EXIT_NOT_CONVERGED
        return VerifyOutcome(summary=to_jsonable(summary), exit_code=exit_code, artifacts=[json_path])


_adapter_instance: Optional[RunAdapter] = None


def get_adapter() -> RunAdapter:
    """Get the shared adapter instance."""
    global _adapter_instance
    if _adapter_instance is None:
        _adapter_instance = RunAdapter()
    return _adapter_instance
