import numpy as np
import pytest

from monge_ampere.errors import ConfigurationError
from monge_ampere.measures import (
    DENSITIES,
    Atom,
    DiracSpread,
    MeasureSpec,
    build_rhs,
    measure_of_box,
    reference_measure,
)
from monge_ampere.operator import BorelBox
from monge_ampere.problems import two_dirac_problem


def test_two_dirac_nearest_lumping(grid4):
    f = build_rhs(two_dirac_problem().measure, grid4)
    assert f.values[1, 2] == pytest.approx(8 * np.pi)
    assert f.values[3, 2] == pytest.approx(8 * np.pi)
    assert np.count_nonzero(f.values) == 2
    assert grid4.h ** 2 * f.values.sum() == pytest.approx(np.pi)


def test_nearest_tie_goes_to_smallest_index(grid4):
    measure = MeasureSpec(atoms=[Atom(x=0.375, y=0.5, w=1.0)])
    f = build_rhs(measure, grid4)
    assert np.argwhere(f.values).tolist() == [[1, 2]]


def test_bilinear_spreading_conserves_mass(grid4):
    measure = MeasureSpec(atoms=[Atom(x=0.3, y=0.45, w=2.0)])
    f = build_rhs(measure, grid4, DiracSpread.BILINEAR)
    assert grid4.h ** 2 * f.values.sum() == pytest.approx(2.0)
    assert np.count_nonzero(f.values) == 4
    assert np.all(f.values[grid4.boundary_mask] == 0.0)


def test_bilinear_near_boundary_stays_interior(grid4):
    measure = MeasureSpec(atoms=[Atom(x=0.1, y=0.1, w=1.0)])
    f = build_rhs(measure, grid4, DiracSpread.BILINEAR)
    assert np.argwhere(f.values).tolist() == [[1, 1]]
    assert grid4.h ** 2 * f.values.sum() == pytest.approx(1.0)


def test_density_is_sampled_on_interior(grid4):
    f = build_rhs(MeasureSpec(density="unit"), grid4)
    assert np.all(f.values[grid4.interior_mask] == 1.0)
    assert np.all(f.values[grid4.boundary_mask] == 0.0)


def test_atoms_must_be_inside(grid4):
    measure = MeasureSpec(atoms=[Atom(x=1.0, y=0.5, w=1.0)])
    with pytest.raises(ConfigurationError):
        build_rhs(measure, grid4)


def test_unknown_density_rejected():
    with pytest.raises(ValueError):
        MeasureSpec(density="no_such_density")
    assert "unit" in DENSITIES


def test_weights_must_be_positive():
    with pytest.raises(ValueError):
        Atom(x=0.5, y=0.5, w=0.0)


def test_reference_measure():
    box = BorelBox(x_min=0.2, x_max=0.6, y_min=0.1, y_max=0.7)
    assert reference_measure(MeasureSpec(density="unit"), box) == pytest.approx(0.24, rel=1e-9)
    dirac_box = BorelBox(x_min=0.05, x_max=0.45, y_min=0.3, y_max=0.7)
    assert reference_measure(two_dirac_problem().measure, dirac_box) == pytest.approx(np.pi / 2)


def test_reference_measure_rejects_atom_on_box_boundary():
    box = BorelBox(x_min=0.25, x_max=0.6, y_min=0.1, y_max=0.7)
    with pytest.raises(ConfigurationError):
        reference_measure(two_dirac_problem().measure, box)


def test_measure_of_box(grid4):
    f = build_rhs(two_dirac_problem().measure, grid4)
    box = BorelBox(x_min=0.0, x_max=0.5, y_min=0.0, y_max=1.0)
    assert measure_of_box(f, box) == pytest.approx(np.pi / 2)
