"""
Tests for the non-vacuousness check.

Validates:
- equilibrium Maxwellians with constant B witness every hypothesis
- the audit recovers the equilibrium temperature and field
- invalid parameters are rejected
"""

import numpy as np
import pytest

from kinetics.errors import ParameterError
from kinetics.grid import make_torus_grid, make_velocity_grid
from verification.nonvacuous import equilibrium_triple, nonvacuous


class TestEquilibriumTriple:

    def test_shapes(self, small_vgrid, torus4):
        f, E, B = equilibrium_triple(1.0, 1.0, (0.0, 0.0, 2.0), small_vgrid, torus4)
        assert f.shape == torus4.shape + small_vgrid.shape
        assert np.all(E == 0)
        assert np.all(B[2] == 2.0)

    @pytest.mark.parametrize("rho, T", [(0.0, 1.0), (1.0, 0.0), (-1.0, 1.0)])
    def test_rejects_nonpositive(self, small_vgrid, torus4, rho, T):
        with pytest.raises(ParameterError):
            equilibrium_triple(rho, T, (0.0, 0.0, 0.0), small_vgrid, torus4)


class TestNonvacuous:

    def test_desk_equilibrium(self, desk_vgrid, torus4):
        report = nonvacuous(1.0, 1.0, (0.0, 0.0, 2.0), desk_vgrid, torus4)
        assert report.passed
        assert report.pipeline.T_eq == pytest.approx(1.0, rel=1e-8)
        assert report.pipeline.B0 == pytest.approx((0.0, 0.0, 2.0))
        assert report.hypotheses.entries['hyp8']['K'] == 1

    def test_report_document(self, vgrid12, torus4):
        doc = nonvacuous(1.0, 1.0, (0.0, 0.0, 0.0), vgrid12, torus4).to_dict()
        assert doc['pass']
        assert doc['pipeline']['verdict'] == "pass"
        assert doc['steady_state']['pass']
        assert doc['hypotheses']['pass']

    @pytest.mark.slow
    @pytest.mark.parametrize("rho_ion", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("T", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("B0", [(0.0, 0.0, 0.0), (0.0, 0.0, 2.0), (1.0, -1.0, 0.5)])
    def test_parameter_lattice(self, rho_ion, T, B0):
        vgrid = make_velocity_grid(6.0 * np.sqrt(T), 16)
        report = nonvacuous(rho_ion, T, B0, vgrid, make_torus_grid(4))
        assert report.passed
        assert report.pipeline.T_eq == pytest.approx(T, rel=1e-6)
