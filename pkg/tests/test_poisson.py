import numpy as np
import pytest

from monge_ampere.errors import PoissonConvergenceError
from monge_ampere.grid import GridIndex, GridSpec, MeshFunction, build_grid
from monge_ampere.poisson import (
    PoissonConfig,
    PoissonMethod,
    inv_norm_estimate,
    laplacian,
    laplacian_apply,
    poisson_solve,
)

ITERATIVE = PoissonConfig(method=PoissonMethod.ITERATIVE)


def _random_zero_boundary(grid, seed):
    rng = np.random.default_rng(seed)
    values = np.zeros(grid.shape)
    values[1:-1, 1:-1] = rng.uniform(-1.0, 1.0, (grid.n1 - 1, grid.n2 - 1))
    return MeshFunction(grid, values)


def test_sine_modes_are_eigenfunctions():
    grid = build_grid(GridSpec(h=1 / 16))
    X, Y = grid.coordinates
    k, l = 3, 5
    v = MeshFunction(grid, np.sin(np.pi * k * X) * np.sin(np.pi * l * Y))
    lam = (2 * np.cos(np.pi * k / 16) - 2 + 2 * np.cos(np.pi * l / 16) - 2) * 16 ** 2
    lap = laplacian(v)
    np.testing.assert_allclose(
        lap.values[grid.interior_mask], lam * v.values[grid.interior_mask], atol=1e-9
    )


def test_nodewise_matches_array(grid8):
    v = _random_zero_boundary(grid8, 1)
    lap = laplacian(v)
    for node in (GridIndex(1, 1), GridIndex(3, 6), GridIndex(7, 7)):
        assert lap[node] == pytest.approx(laplacian_apply(v, node))


@pytest.mark.parametrize("cfg", [PoissonConfig(), ITERATIVE], ids=["fast", "iterative"])
def test_solve_inverts_laplacian(grid16, cfg):
    z = _random_zero_boundary(grid16, 2)
    recovered = poisson_solve(laplacian(z), cfg)
    np.testing.assert_allclose(recovered.values, z.values, atol=1e-9)
    assert np.all(recovered.values[grid16.boundary_mask] == 0.0)


def test_backends_agree(grid16):
    rng = np.random.default_rng(5)
    rhs = MeshFunction(grid16, rng.uniform(-1.0, 1.0, grid16.shape))
    fast = poisson_solve(rhs)
    iterative = poisson_solve(rhs, ITERATIVE)
    assert np.abs(fast.values - iterative.values).max() < 1e-10


@pytest.mark.parametrize("h, expected", [(1 / 2, 1 / 16), (1 / 4, 9 / 128)])
def test_discrete_torsion(h, expected):
    grid = build_grid(GridSpec(h=h))
    assert inv_norm_estimate(grid) == pytest.approx(expected, rel=1e-12)
    assert inv_norm_estimate(grid, ITERATIVE) == pytest.approx(expected, rel=1e-10)


def test_inverse_norm_bounded_independently_of_h():
    norms = [inv_norm_estimate(build_grid(GridSpec(h=h))) for h in (1 / 8, 1 / 16, 1 / 32)]
    assert all(n <= 0.125 for n in norms)
    assert (max(norms) - min(norms)) / min(norms) < 0.05


def test_iterative_reports_non_convergence(grid16):
    rng = np.random.default_rng(9)
    rhs = MeshFunction(grid16, rng.uniform(-1.0, 1.0, grid16.shape))
    with pytest.raises(PoissonConvergenceError) as info:
        poisson_solve(rhs, PoissonConfig(method=PoissonMethod.ITERATIVE, max_iter=2))
    assert info.value.iterations == 2
    assert info.value.residual > 1e-12


def test_laplacian_is_symmetric_and_negative(grid16):
    interior = grid16.interior_mask
    for seed in range(5):
        v = _random_zero_boundary(grid16, 10 + seed)
        w = _random_zero_boundary(grid16, 20 + seed)
        lv, lw = laplacian(v).values[interior], laplacian(w).values[interior]
        assert np.dot(lv, w.values[interior]) == pytest.approx(np.dot(v.values[interior], lw), rel=1e-12, abs=1e-7)
        assert np.dot(lv, v.values[interior]) < 0.0
