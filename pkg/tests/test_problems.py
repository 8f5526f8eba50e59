import numpy as np
import pytest

from monge_ampere.errors import ConfigurationError
from monge_ampere.operator import OperatorConfig
from monge_ampere.poisson import PoissonConfig
from monge_ampere.problems import (
    PROBLEMS,
    TABLE1_ERRORS,
    TABLE1_H,
    ErrorRow,
    ErrorTable,
    get_problem,
    run_convergence_study,
    smooth_radial_exact,
    two_dirac_exact,
)
from monge_ampere.solvers import InitialGuess, SolverConfig


def test_catalog():
    assert set(PROBLEMS) == {"two_dirac", "quadratic", "smooth_radial", "single_cone"}
    assert len(TABLE1_H) == len(TABLE1_ERRORS) == 6


@pytest.mark.parametrize("name", sorted(PROBLEMS))
def test_exact_matches_boundary_data(name):
    assert get_problem(name).check_compatibility()


def test_unknown_problem():
    with pytest.raises(ConfigurationError, match="unknown problem"):
        get_problem("cube")


@pytest.mark.parametrize(
    "x, y, expected",
    [
        (0.5, 0.5, 0.0),
        (0.5, 1.0, 0.5),
        (0.0, 0.5, 0.25),
        (0.25, 0.5, 0.0),
        (1.0, 1.0, np.hypot(0.25, 0.5)),
    ],
)
def test_two_dirac_exact_values(x, y, expected):
    assert float(two_dirac_exact(x, y)) == pytest.approx(expected)


def test_smooth_radial_exact_at_origin():
    assert float(smooth_radial_exact(0.0, 0.0)) == 1.0


def test_quadratic_study_is_exact():
    cfg = SolverConfig(initial_guess=InitialGuess.EXACT)
    table = run_convergence_study(
        get_problem("quadratic"), [1 / 4, 1 / 8], cfg, OperatorConfig(), PoissonConfig(), max_workers=2
    )
    assert [row.h for row in table.rows] == [1 / 4, 1 / 8]
    assert table.all_converged
    assert all(e is not None and e <= 1e-8 for e in table.errors())
    assert all(row.discrete_convex for row in table.rows)


def test_empty_study_rejected():
    with pytest.raises(ConfigurationError):
        run_convergence_study(get_problem("quadratic"), [], SolverConfig(), OperatorConfig(), PoissonConfig())


def test_study_validates_every_h_first():
    with pytest.raises(ConfigurationError, match="h must divide domain side"):
        run_convergence_study(
            get_problem("quadratic"), [1 / 4, 0.3], SolverConfig(), OperatorConfig(), PoissonConfig()
        )


def test_error_table_layout():
    table = ErrorTable(
        problem="two_dirac",
        rows=[
            ErrorRow(h=1 / 8, iterations=12, converged=True, max_error=0.471, residual=1e-9, wall_time=0.5),
            ErrorRow(h=1 / 16, iterations=0, converged=False, max_error=None, residual=float("nan"),
                     wall_time=0.0, error="diverged"),
        ],
    )
    lines = table.csv_lines()
    assert lines[0] == ["h", "iterations", "converged", "max_error", "residual", "wall_time_ms"]
    assert lines[1][2] == "true" and lines[2][3] == ""
    assert lines[1][5] == "500.000"
    assert not table.all_converged

    text = table.to_text()
    assert text.startswith("problem: two_dirac\n")
    assert "1/8" in text and "1/16" in text and "4.71e-01" in text
