from fractions import Fraction
from pathlib import Path

from runs import RunAdapter, SolveRequest, StudyRequest
from runs.adapter import format_h


def test_solve_defaults_to_settings_output_dir(isolated_settings):
    outcome = RunAdapter().solve(SolveRequest(problem="quadratic", h="1/4"))
    out_dir = Path(isolated_settings.output_dir)
    assert outcome.exit_code == 0
    assert outcome.artifacts == [out_dir / "solution.csv", out_dir / "history.csv", out_dir / "summary.json"]
    assert all(path.exists() for path in outcome.artifacts)


def test_failed_study_rows_are_json_safe(tmp_path, isolated_settings):
    request = StudyRequest(problem="two_dirac", h_list=["1/8"], method="basic", mu=1e-3)
    outcome = RunAdapter().study(request, tmp_path)
    [row] = outcome.summary["rows"]
    assert row["converged"] is False
    assert row["residual"] is None
    assert outcome.exit_code == 2


def test_format_h():
    assert format_h(Fraction(1, 64)) == "1/64"
    assert format_h(Fraction(3, 10)) == "0.3"
