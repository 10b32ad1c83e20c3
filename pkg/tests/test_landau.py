"""
Tests for the Landau operator.

Validates:
- Landau matrix algebra and the Coulomb singularity
- Maxwellians in the collision nullspace
- H-theorem sign of the dissipation
- mass, momentum and energy conservation of Q
- power-law kernels reaching the pair sweep
"""

import numpy as np
import pytest

from kinetics.errors import ParameterError, PositivityError, SingularityError
from kinetics.grid import make_velocity_grid, reflect_v
from kinetics.landau import (
    CollisionOutput,
    benchmark_collision,
    collision_field,
    collision_Q,
    conservation_residuals,
    coulomb_psi,
    dissipation,
    dissipation_field,
    entropy,
    kernel_exponent,
    landau_matrix,
    power_law_psi,
    score,
    singularity_split,
)
from kinetics.maxwell_eq import MaxwellianParams, equilibrium_maxwellian, maxwellian
from utils.fixtures import bimaxwellian_slice, random_slice, rng_for


class TestLandauMatrix:

    def test_unit_vector(self):
        assert np.allclose(landau_matrix([1.0, 0.0, 0.0]), np.diag([0.0, 1.0, 1.0]))

    def test_annihilates_z_and_is_psd(self, rng):
        for _ in range(20):
            z = rng.normal(size=3)
            A = landau_matrix(z)
            assert np.allclose(A @ z, 0.0, atol=1e-12)
            assert np.allclose(A, A.T)
            assert np.min(np.linalg.eigvalsh(A)) >= -1e-12

    def test_coulomb_scaling(self):
        # |A(z)| = 1/|z| for the Coulomb kernel
        A = landau_matrix([0.0, 2.0, 0.0])
        assert np.max(np.linalg.eigvalsh(A)) == pytest.approx(0.5)

    def test_singular_at_origin(self):
        with pytest.raises(SingularityError):
            landau_matrix([0.0, 0.0, 0.0])
        with pytest.raises(SingularityError):
            coulomb_psi(0.0)

    def test_coulomb_values(self):
        assert coulomb_psi(1.0) == 1.0
        assert coulomb_psi(2.0) == 0.125

    def test_power_law_hook(self):
        assert power_law_psi(-3)(2.0) == pytest.approx(coulomb_psi(2.0))
        assert power_law_psi(0)(5.0) == 1.0

    def test_psi_reaches_pair_kernel(self, small_vgrid):
        f = bimaxwellian_slice(small_vgrid)
        flat = collision_Q(f, small_vgrid, gamma=power_law_psi(0.0)).Q
        assert np.array_equal(flat, collision_Q(f, small_vgrid, gamma=0.0).Q)
        assert not np.allclose(flat, collision_Q(f, small_vgrid).Q)
        assert dissipation(f, small_vgrid, coulomb_psi) == dissipation(f, small_vgrid)

    def test_kernel_exponent(self):
        assert kernel_exponent(power_law_psi(-1)) == -1.0
        assert kernel_exponent(coulomb_psi) == -3.0
        assert kernel_exponent(0) == 0.0
        with pytest.raises(ParameterError):
            kernel_exponent(lambda r: r ** -2)


class TestNullspace:

    def test_score_of_maxwellian(self, vgrid12):
        f = equilibrium_maxwellian(1.0, 0.5, vgrid12.points)
        assert np.allclose(score(f, vgrid12), -vgrid12.points / 0.5, atol=1e-10)

    def test_score_rejects_nonpositive(self, small_vgrid):
        f = np.ones(small_vgrid.shape)
        f[3, 3, 3] = 0.0
        with pytest.raises(PositivityError):
            score(f, small_vgrid)

    def test_maxwellian_is_stationary(self, vgrid12):
        f = maxwellian(MaxwellianParams(1.0, (0.4, 0.0, -0.2), 1.3), vgrid12.points)
        out = collision_Q(f, vgrid12)
        assert isinstance(out, CollisionOutput)
        assert out.flux_scale > 0
        assert np.max(np.abs(out.Q)) <= 1e-8 * out.flux_scale / vgrid12.spacing

    def test_maxwellian_dissipation_vanishes(self, vgrid12):
        reference = abs(dissipation(bimaxwellian_slice(vgrid12), vgrid12))
        assert reference > 0
        assert abs(dissipation(equilibrium_maxwellian(1.0, 1.0, vgrid12.points), vgrid12)) <= 1e-12 * reference

    def test_other_kernel_keeps_nullspace(self, vgrid12):
        f = equilibrium_maxwellian(1.0, 1.0, vgrid12.points)
        out = collision_Q(f, vgrid12, gamma=0.0)
        assert np.max(np.abs(out.Q)) <= 1e-8 * out.flux_scale / vgrid12.spacing


class TestHTheorem:

    @pytest.mark.parametrize("seed", range(50))
    def test_dissipation_nonpositive(self, vgrid12, seed):
        reference = abs(dissipation(bimaxwellian_slice(vgrid12), vgrid12))
        D = dissipation(random_slice(vgrid12, rng_for(seed)), vgrid12)
        assert D <= 1e-12 * reference

    def test_bimaxwellian_dissipates(self, vgrid12):
        assert dissipation(bimaxwellian_slice(vgrid12), vgrid12) < -1e-4

    def test_dissipation_is_bilinear(self, vgrid12):
        f = bimaxwellian_slice(vgrid12)
        assert dissipation(2.0 * f, vgrid12) == pytest.approx(4.0 * dissipation(f, vgrid12), rel=1e-10)

    def test_even_data_gives_even_q(self, vgrid12):
        Q = collision_Q(bimaxwellian_slice(vgrid12), vgrid12).Q
        assert np.allclose(reflect_v(Q), Q, atol=1e-9 * np.max(np.abs(Q)))

    def test_entropy_of_maxwellian(self, desk_vgrid):
        f = equilibrium_maxwellian(1.0, 1.0, desk_vgrid.points)
        # H = -3/2 log(2 pi) - 3/2 for the unit Maxwellian
        assert entropy(f, desk_vgrid) == pytest.approx(-1.5 * np.log(2 * np.pi) - 1.5, abs=1e-5)


class TestConservation:

    # wide box: momentum and energy defects live on the outer layers, where f is ~1e-15
    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_collision_invariants(self, seed):
        grid = make_velocity_grid(14.0, 16)
        f = random_slice(grid, rng_for(seed))
        mass, momentum, energy = conservation_residuals(collision_Q(f, grid), grid)
        scale = float(np.sum(f) * grid.weight)
        assert abs(mass) <= 1e-8 * scale
        assert np.all(np.abs(momentum) <= 1e-8 * scale)
        assert abs(energy) <= 1e-8 * scale

    @pytest.mark.slow
    def test_residuals_shrink_under_refinement(self):
        residuals = []
        for N in (12, 24):
            grid = make_velocity_grid(6.0, N)
            f = bimaxwellian_slice(grid)
            mass, momentum, energy = conservation_residuals(collision_Q(f, grid), grid)
            scale = float(np.sum(f) * grid.weight)
            assert abs(mass) <= 1e-10 * scale
            assert np.all(np.abs(momentum) <= 1e-10 * scale)
            residuals.append(abs(energy))
        assert residuals[1] <= 0.25 * residuals[0]


class TestTorusNodes:

    def test_uniform_field_shares_one_sweep(self, small_vgrid):
        f_slice = equilibrium_maxwellian(1.0, 1.0, small_vgrid.points) * (1.0 + 0.1 * small_vgrid.mesh[0] / 6.0)
        f = np.broadcast_to(f_slice, (2, 2, 2) + small_vgrid.shape).copy()
        Q = collision_field(f, small_vgrid)
        assert Q.shape == f.shape
        expected = collision_Q(f_slice, small_vgrid).Q
        for idx in np.ndindex(2, 2, 2):
            assert np.array_equal(Q[idx], expected)

    def test_dissipation_field_shape(self, small_vgrid):
        f = np.broadcast_to(bimaxwellian_slice(small_vgrid), (2, 2, 2) + small_vgrid.shape)
        D = dissipation_field(f, small_vgrid)
        assert D.shape == (2, 2, 2)
        assert np.all(D < 0)


class TestDiagnostics:

    def test_singularity_split(self, small_vgrid):
        f = equilibrium_maxwellian(1.0, 1.0, small_vgrid.points)
        split = singularity_split(f, small_vgrid)
        assert split['radius'] == pytest.approx(2 * small_vgrid.spacing)
        assert split['ball'] > 0
        assert split['complement'] > 0
        assert split['diagonal_estimate'] > 0

    def test_benchmark_counts_pairs(self, small_vgrid):
        f = equilibrium_maxwellian(1.0, 1.0, small_vgrid.points)
        result = benchmark_collision(f, small_vgrid, repeats=2)
        n = small_vgrid.node_count
        assert result['pairs'] == 2 * n * (n - 1)
        assert result['pairs_per_second'] > 0

    def test_zero_collision_has_zero_moments(self, small_vgrid):
        mass, momentum, energy = conservation_residuals(np.zeros(small_vgrid.shape), small_vgrid)
        assert mass == 0.0
        assert np.all(momentum == 0.0)
        assert energy == 0.0

    @pytest.mark.slow
    def test_thread_count_does_not_change_results(self, vgrid12):
        numba = pytest.importorskip("numba")
        f = bimaxwellian_slice(vgrid12)
        before = numba.get_num_threads()
        try:
            numba.set_num_threads(1)
            serial = collision_Q(f, vgrid12).Q
            numba.set_num_threads(min(2, numba.config.NUMBA_NUM_THREADS))
            parallel = collision_Q(f, vgrid12).Q
        finally:
            numba.set_num_threads(before)
        assert np.array_equal(serial, parallel)
