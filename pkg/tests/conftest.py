import numpy as np
import pytest

from config import get_settings
from monge_ampere.grid import GridSpec, MeshFunction, build_grid, restrict
from monge_ampere.operator import OperatorConfig
from monge_ampere.poisson import PoissonConfig
from monge_ampere.problems import quadratic_exact
from storage import get_storage


@pytest.fixture
def grid4():
    return build_grid(GridSpec(h=0.25))


@pytest.fixture
def grid8():
    return build_grid(GridSpec(h=0.125))


@pytest.fixture
def grid16():
    return build_grid(GridSpec(h=1 / 16))


@pytest.fixture
def opcfg():
    return OperatorConfig()


@pytest.fixture
def pcfg():
    return PoissonConfig()


@pytest.fixture
def bumped_quadratic():
    """restrict((x^2 + y^2)/2) plus a small bump vanishing on the boundary."""

    def make(grid, amplitude=1e-3):
        X, Y = grid.coordinates
        base = restrict(quadratic_exact, grid).values
        return MeshFunction(grid, base + amplitude * np.sin(np.pi * X) * np.sin(np.pi * Y))

    return make


@pytest.fixture
def isolated_settings(tmp_path, monkeypatch):
    monkeypatch.setenv("MONGE_AMPERE_OUTPUT_DIR", str(tmp_path / "runs"))
    get_settings.cache_clear()
    get_storage().clear()
    yield get_settings()
    get_settings.cache_clear()
    get_storage().clear()
