import numpy as np
import pytest

from monge_ampere.errors import ConfigurationError, DivergenceError
from monge_ampere.grid import MeshFunction, Region, build_grid, max_norm_diff, restrict
from monge_ampere.measures import MeasureSpec
from monge_ampere.operator import OperatorConfig, is_discrete_convex, ma_residual
from monge_ampere.poisson import laplacian
from monge_ampere.problems import Problem, get_problem, quadratic_exact
from monge_ampere.solvers import (
    InitialGuess,
    SamplingMode,
    SolverConfig,
    SolverMethod,
    StoppingRule,
    basic_step,
    coons_extension,
    contraction_ratio,
    preconditioned_step,
    solve,
)


@pytest.fixture
def quadratic():
    return get_problem("quadratic")


def test_exact_guess_needs_no_steps(quadratic, opcfg, pcfg):
    result = solve(quadratic, 1 / 8, SolverConfig(), opcfg, pcfg)
    assert result.converged
    assert result.iterations == 0
    assert result.residual_history == []
    assert result.initial_residual == result.final_residual <= 1e-8


def test_increment_stopping_takes_one_step(quadratic, opcfg, pcfg):
    cfg = SolverConfig(stopping=StoppingRule.INCREMENT)
    result = solve(quadratic, 1 / 8, cfg, opcfg, pcfg)
    assert result.converged
    assert result.iterations == 1


def test_coons_extension_reproduces_quadratic(grid8):
    exact = restrict(quadratic_exact, grid8)
    g = exact.with_values(np.where(grid8.boundary_mask, exact.values, 0.0))
    np.testing.assert_allclose(coons_extension(g).values, exact.values, atol=1e-14)


def test_extension_guess_for_quadratic(quadratic, opcfg, pcfg):
    cfg = SolverConfig(initial_guess=InitialGuess.EXTENSION)
    result = solve(quadratic, 1 / 8, cfg, opcfg, pcfg)
    assert result.converged and result.iterations == 0


def test_basic_iteration_converges_with_large_mu(quadratic, grid8, opcfg, pcfg, bumped_quadratic):
    cfg = SolverConfig(method=SolverMethod.BASIC, mu=400, max_iter=20_000)
    result = solve(quadratic, 1 / 8, cfg, opcfg, pcfg, initial=bumped_quadratic(grid8))
    assert result.converged
    assert result.iterations == len(result.residual_history) > 0
    assert result.residual_history[-1] <= 1e-8
    exact = restrict(quadratic_exact, result.solution.grid)
    assert max_norm_diff(result.solution, exact, Region.INTERIOR) < 1e-7


def test_preconditioned_iteration_converges(quadratic, grid16, opcfg, pcfg, bumped_quadratic):
    cfg = SolverConfig(method=SolverMethod.PRECONDITIONED, mu=50, max_iter=20_000)
    result = solve(quadratic, 1 / 16, cfg, opcfg, pcfg, initial=bumped_quadratic(grid16))
    assert result.converged
    assert result.initial_residual > 1e-3
    exact = restrict(quadratic_exact, result.solution.grid)
    assert max_norm_diff(result.solution, exact, Region.INTERIOR) < 1e-7


def test_boundary_values_are_kept(quadratic, grid8, opcfg, pcfg, bumped_quadratic):
    cfg = SolverConfig(max_iter=5)
    result = solve(quadratic, 1 / 8, cfg, opcfg, pcfg, initial=bumped_quadratic(grid8))
    exact = restrict(quadratic_exact, grid8)
    assert max_norm_diff(result.solution, exact, Region.BOUNDARY) == 0.0
    assert result.iterations == 5 and not result.converged


def test_steps_fix_the_exact_solution(grid8, opcfg, pcfg):
    u = restrict(quadratic_exact, grid8)
    f = restrict(lambda x, y: 1.0, grid8)
    cfg = SolverConfig(mu=50)
    for stepped in (basic_step(u, f, cfg, opcfg), preconditioned_step(u, f, cfg, opcfg, pcfg)):
        assert np.abs(stepped.values - u.values).max() < 1e-14


def test_small_mu_diverges(quadratic, grid8, opcfg, pcfg, bumped_quadratic):
    cfg = SolverConfig(method=SolverMethod.BASIC, mu=1e-3, max_iter=10_000)
    with pytest.raises(DivergenceError):
        solve(quadratic, 1 / 8, cfg, opcfg, pcfg, initial=bumped_quadratic(grid8))


def test_custom_guess_must_match_grid(quadratic, grid4, opcfg, pcfg):
    with pytest.raises(ConfigurationError):
        solve(quadratic, 1 / 8, SolverConfig(), opcfg, pcfg, initial=MeshFunction.zeros(grid4))


def test_exact_guess_needs_exact_solution(opcfg, pcfg):
    problem = Problem(name="no_exact", measure=MeasureSpec(density="unit"), boundary=quadratic_exact)
    with pytest.raises(ConfigurationError):
        solve(problem, 1 / 4, SolverConfig(), opcfg, pcfg)


def test_preconditioned_contracts_near_smooth_solution(grid16, opcfg, pcfg):
    ratio = contraction_ratio(
        SolverMethod.PRECONDITIONED, 50, grid16, opcfg, pcfg, trials=5, seed=7,
        sampling=SamplingMode.SMOOTH, base=restrict(quadratic_exact, grid16), amplitude=1e-3,
    )
    assert 0.0 < ratio < 1.0


def test_basic_expands_on_rough_data(grid8, opcfg, pcfg):
    ratio = contraction_ratio(
        SolverMethod.BASIC, 50, grid8, opcfg, pcfg, trials=5, seed=7, sampling=SamplingMode.UNIFORM
    )
    assert ratio > 1.0


def test_contraction_is_seeded(grid8, opcfg, pcfg):
    args = (SolverMethod.PRECONDITIONED, 50, grid8, opcfg, pcfg)
    assert contraction_ratio(*args, trials=3, seed=1) == contraction_ratio(*args, trials=3, seed=1)


@pytest.mark.slow
def test_two_dirac_coarsest_error(opcfg, pcfg):
    problem = get_problem("two_dirac")
    result = solve(problem, 1 / 8, SolverConfig(mu=50), opcfg, pcfg)
    assert result.converged
    exact = restrict(problem.exact, result.solution.grid)
    assert max_norm_diff(result.solution, exact, Region.INTERIOR) == pytest.approx(0.201, rel=0.01)
    assert is_discrete_convex(result.solution, opcfg.stencil, tol=1e-9)


def test_preconditioned_step_solves_its_poisson_problem(grid8, opcfg, pcfg):
    rng = np.random.default_rng(13)
    u = restrict(quadratic_exact, grid8)
    u = u.with_values(u.values + 1e-2 * np.where(grid8.interior_mask, rng.uniform(-1.0, 1.0, grid8.shape), 0.0))
    f = restrict(lambda x, y: 1.0, grid8)
    cfg = SolverConfig(mu=50)
    stepped = preconditioned_step(u, f, cfg, opcfg, pcfg)

    residual = ma_residual(u, f, opcfg).values
    identity = -laplacian(stepped).values + laplacian(u).values - residual / cfg.mu
    interior = grid8.interior_mask
    assert np.abs(identity[interior]).max() <= 1e-10 * max(1.0, np.abs(residual).max())
    assert np.array_equal(stepped.values[~interior], u.values[~interior])


@pytest.mark.parametrize("h", [1 / 8, 1 / 16])
def test_residual_decays_after_burn_in(quadratic, opcfg, pcfg, bumped_quadratic, h):
    grid = build_grid(quadratic.grid_spec(h))
    cfg = SolverConfig(method=SolverMethod.PRECONDITIONED, mu=50, max_iter=20_000)
    result = solve(quadratic, h, cfg, opcfg, pcfg, initial=bumped_quadratic(grid))
    assert result.converged
    tail = result.residual_history[5:]
    assert all(b <= a for a, b in zip(tail, tail[1:]))


def test_basic_step_with_zero_rhs(grid8):
    u = restrict(quadratic_exact, grid8)
    stepped = basic_step(u, MeshFunction.zeros(grid8), SolverConfig(mu=50), OperatorConfig(epsilon=0.0))
    interior = grid8.interior_mask
    np.testing.assert_allclose(stepped.values[interior], u.values[interior] + 1 / 50, rtol=1e-12)
    assert np.array_equal(stepped.values[~interior], u.values[~interior])
