"""Tests for candidate states and seeded random fixtures."""

import numpy as np
import pytest

from kinetics.errors import ParameterError
from kinetics.fields import divergence
from kinetics.maxwell_eq import MaxwellianParams, moments
from kinetics.vlasov import density
from utils.fixtures import build_candidate, initial_slice, random_field, random_slice, rng_for
from utils.scenario_config import CANDIDATES, ScenarioConfig


class TestRandom:

    def test_seed_is_deterministic(self, small_vgrid, torus4):
        a = random_field(small_vgrid, torus4, seed=7)
        b = random_field(small_vgrid, torus4, seed=7)
        for x, y in zip(a, b):
            assert np.array_equal(x, y)

    def test_seeds_differ(self, small_vgrid):
        assert not np.allclose(random_slice(small_vgrid, rng_for(1)), random_slice(small_vgrid, rng_for(2)))

    @pytest.mark.parametrize("seed", range(5))
    def test_positive(self, small_vgrid, torus4, seed):
        f, _, _ = random_field(small_vgrid, torus4, seed=seed)
        assert np.all(f > 0)

    def test_field_solves_gauss(self, vgrid12, torus4):
        f, E, _ = random_field(vgrid12, torus4, seed=3)
        rho = density(f, vgrid12)
        assert np.allclose(divergence(E), rho - rho.mean(), atol=1e-10)


class TestCandidates:

    @pytest.mark.parametrize("name", CANDIDATES)
    def test_every_candidate_builds(self, small_vgrid, torus4, name):
        config = ScenarioConfig(maxwellian=MaxwellianParams(1.0, (0.0, 0.0, 0.0), 1.0))
        f, E, B = build_candidate(name, config, small_vgrid, torus4)
        assert f.shape == torus4.shape + small_vgrid.shape
        assert E.shape == B.shape == (3,) + torus4.shape
        assert np.all(f > 0)

    def test_unknown_candidate(self, small_vgrid, torus4):
        with pytest.raises(ParameterError):
            build_candidate('vacuum', ScenarioConfig(), small_vgrid, torus4)

    def test_perturbed_has_no_homogeneous_slice(self, small_vgrid):
        with pytest.raises(ParameterError):
            initial_slice('perturbed', ScenarioConfig(), small_vgrid)

    def test_drifting_slice_carries_drift(self, vgrid12):
        config = ScenarioConfig(drift=0.2)
        f = initial_slice('drifting', config, vgrid12)
        p1 = np.sum(vgrid12.mesh[0] * f) * vgrid12.weight
        assert p1 == pytest.approx(0.2, abs=1e-6)

    def test_maxwellian_needs_parameters(self, small_vgrid, torus4):
        with pytest.raises(ParameterError):
            build_candidate('maxwellian', ScenarioConfig(), small_vgrid, torus4)
        with pytest.raises(ParameterError):
            initial_slice('maxwellian', ScenarioConfig(), small_vgrid)

    def test_maxwellian_slice_has_given_moments(self, desk_vgrid):
        config = ScenarioConfig(maxwellian=MaxwellianParams.parse("rho=1.2, u=0.3,0,0, T=0.9"))
        rho, u, T = moments(initial_slice('maxwellian', config, desk_vgrid), desk_vgrid)
        assert rho == pytest.approx(1.2, rel=1e-6)
        assert np.allclose(u, (0.3, 0.0, 0.0), atol=1e-6)
        assert T == pytest.approx(0.9, rel=1e-4)
