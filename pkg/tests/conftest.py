"""Shared grids and states for the vmlk test suite."""

import numpy as np
import pytest

from kinetics.grid import make_torus_grid, make_velocity_grid
from kinetics.maxwell_eq import equilibrium_maxwellian


@pytest.fixture
def small_vgrid():
    return make_velocity_grid(6.0, 8)


@pytest.fixture
def vgrid12():
    return make_velocity_grid(6.0, 12)


@pytest.fixture
def desk_vgrid():
    return make_velocity_grid(6.0, 16)


@pytest.fixture
def torus4():
    return make_torus_grid(4)


@pytest.fixture
def torus8():
    return make_torus_grid(8)


@pytest.fixture
def maxwellian_slice(vgrid12):
    return equilibrium_maxwellian(1.0, 1.0, vgrid12.points)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(12345))
