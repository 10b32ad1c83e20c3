"""
Tests for the hypothesis checklist.

Validates:
- score bound constants on Maxwellians and a super-exponential failure case
- polynomial shell decay
- smoothness proxies and the derived log-growth bound
"""

import numpy as np
import pytest

from kinetics.grid import make_velocity_grid
from kinetics.maxwell_eq import equilibrium_maxwellian
from verification.hypotheses import (
    ScoreBound,
    build_hypothesis_report,
    check_decay,
    check_score_bound,
    derived_log_growth,
    high_mode_fraction,
    velocity_smoothness_proxy,
)
from utils.fixtures import equilibrium, perturbed


def _pinched(grid):
    """M(v) (0.01 + sin^2(pi v1 / L)), small but positive near v1 = 0 and v1 = +-L"""
    M = equilibrium_maxwellian(1.0, 1.0, grid.points)
    return M * (0.01 + np.sin(np.pi * grid.mesh[0] / grid.L) ** 2)


class TestScoreBound:

    def test_unit_maxwellian(self, desk_vgrid):
        check = check_score_bound(equilibrium_maxwellian(1.0, 1.0, desk_vgrid.points), desk_vgrid)
        assert check.passed
        assert check.bound.K == 1
        assert check.bound.C == pytest.approx(0.8459, abs=1e-3)
        # K = 0 fails only on edge growth
        assert check.constants[0] < 1e3
        assert check.edge_growth[0] > 1.2

    def test_constant_scales_with_inverse_temperature(self, desk_vgrid):
        check = check_score_bound(equilibrium_maxwellian(1.0, 0.5, desk_vgrid.points), desk_vgrid)
        assert check.bound.K == 1
        assert check.bound.C == pytest.approx(1.6917, abs=2e-3)

    def test_coarse_grid_keeps_exponent(self, small_vgrid):
        check = check_score_bound(equilibrium_maxwellian(1.0, 1.0, small_vgrid.points), small_vgrid)
        assert check.bound.K == 1

    def test_super_exponential_has_no_bound(self):
        grid = make_velocity_grid(4.0, 16)
        f = np.exp(-np.exp(grid.speed / 1.2))
        check = check_score_bound(f, grid)
        assert not check.passed
        doc = check.to_dict()
        assert 'C_at_K_max' in doc
        assert len(doc['C_of_K']) == 4

    def test_distribution_field(self, vgrid12, torus4):
        f, _, _ = perturbed(vgrid12, torus4, amplitude=0.05)
        assert check_score_bound(f, vgrid12).bound.K == 1

    def test_constant_has_zero_score(self, small_vgrid):
        check = check_score_bound(np.full(small_vgrid.shape, 0.01), small_vgrid)
        assert check.bound.K == 0
        assert check.bound.C <= 1e-12
        assert check.edge_growth == [0.0] * 4

    def test_pinch_has_a_bounded_score(self, desk_vgrid):
        # log(0.01 + sin^2) has slope at most about 5 at any resolution, so the
        # pinch is a smooth positive f and is certified
        check = check_score_bound(_pinched(desk_vgrid), desk_vgrid)
        assert check.bound.K == 2
        assert check.bound.C == pytest.approx(0.33, abs=0.01)
        fine = make_velocity_grid(6.0, 32)
        refined = check_score_bound(_pinched(fine), fine)
        assert refined.constants[0] <= 2.0 * check.constants[0]


class TestDecay:

    def test_maxwellian_passes_all_orders(self, desk_vgrid):
        results = check_decay(equilibrium_maxwellian(1.0, 1.0, desk_vgrid.points), desk_vgrid)
        assert sorted(results) == [2, 4, 8]
        assert all(r['passed'] for r in results.values())
        assert 30.0 < results[8]['C_m'] < 60.0

    def test_algebraic_tail_fails_high_order(self, desk_vgrid):
        f = (1.0 + desk_vgrid.speed ** 2) ** -2
        results = check_decay(f, desk_vgrid)
        assert results[2]['passed']
        assert results[4]['passed']
        assert not results[8]['passed']


class TestProxies:

    def test_smooth_maxwellian(self, desk_vgrid):
        result = velocity_smoothness_proxy(equilibrium_maxwellian(1.0, 1.0, desk_vgrid.points), desk_vgrid)
        assert result['passed']
        assert result['proxy']

    def test_rough_velocity_data(self):
        grid = make_velocity_grid(1.0, 8)
        f = 1.0 + 0.5 * (-1.0) ** np.arange(8)[:, None, None] * np.ones(grid.shape)
        assert not velocity_smoothness_proxy(f, grid)["passed"]

    def test_high_modes(self, torus8):
        X1 = torus8.mesh[0]
        assert high_mode_fraction(1.0 + np.cos(2 * np.pi * X1)) == pytest.approx(0.0, abs=1e-20)
        assert high_mode_fraction(np.cos(2 * np.pi * 3 * X1)) == pytest.approx(1.0)
        assert high_mode_fraction(np.zeros(torus8.shape)) == 0.0

    def test_log_growth_consistent(self, desk_vgrid):
        f = equilibrium_maxwellian(1.0, 1.0, desk_vgrid.points)
        bound = check_score_bound(f, desk_vgrid).bound
        derived = derived_log_growth(f, desk_vgrid, bound)
        assert derived['K'] == bound.K + 1
        assert derived['passed']
        assert derived['measured'] <= derived['C']

    def test_log_growth_with_loose_bound(self, desk_vgrid):
        f = equilibrium_maxwellian(1.0, 1.0, desk_vgrid.points)
        derived = derived_log_growth(f, desk_vgrid, ScoreBound(C=10.0, K=2))
        assert derived['K'] == 3
        assert derived['passed']


class TestReport:

    def test_equilibrium_satisfies_all(self, vgrid12, torus4):
        f, E, B = equilibrium(vgrid12, torus4, B0=(0.0, 0.0, 2.0))
        report = build_hypothesis_report(f, E, B, 1.0, 1.0, vgrid12, torus4)
        assert report.passed, report.failing()
        doc = report.to_dict()
        assert [f'hyp{n}' for n in range(1, 14)] == [k for k in doc if k != 'pass']
        assert doc['hyp13']['derived']

    def test_sign_hypotheses(self, vgrid12, torus4):
        f, E, B = equilibrium(vgrid12, torus4)
        report = build_hypothesis_report(f, E, B, 0.0, 1.0, vgrid12, torus4)
        assert report.failing() == ['hyp1']

    def test_nonpositive_f_skips_the_rest(self, small_vgrid, torus4):
        f, E, B = equilibrium(small_vgrid, torus4)
        f[0, 0, 0, 0, 0, 0] = -1.0
        report = build_hypothesis_report(f, E, B, 1.0, 1.0, small_vgrid, torus4)
        assert not report.entries['hyp3']['passed']
        assert all('skipped' in report.entries[f'hyp{n}'] for n in range(4, 14))
