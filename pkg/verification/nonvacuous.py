"""
Non-vacuousness check: the equilibrium Maxwellian with E = 0 and constant B0
satisfies every hypothesis and every steady-state equation at once.
"""

import logging
from dataclasses import dataclass

import numpy as np

from kinetics.errors import ParameterError
from kinetics.maxwell_eq import equilibrium_maxwellian
from kinetics.vlasov import SteadyStateTolerances, steady_state_report
from verification.hypotheses import SCORE_CAP, DEFAULT_DECAY_ORDERS, build_hypothesis_report
from verification.proof_pipeline import PipelineTolerances, proof_pipeline

logger = logging.getLogger(__name__)


def equilibrium_triple(rho_ion, T, B0, vgrid, tgrid):
    """(f, E, B) with f the uniform Maxwellian, E = 0 and B = B0"""
    if not rho_ion > 0:
        raise ParameterError(f"rho_ion must be positive, got {rho_ion}")
    if not T > 0:
        raise ParameterError(f"T must be positive, got {T}")
    slice_ = equilibrium_maxwellian(rho_ion, T, vgrid.points)
    f = np.broadcast_to(slice_, tgrid.shape + vgrid.shape).copy()
    E = np.zeros((3,) + tgrid.shape)
    B = np.zeros((3,) + tgrid.shape) + np.asarray(B0, dtype=float).reshape((3, 1, 1, 1))
    return f, E, B


@dataclass
class NonvacuousReport:
    rho_ion: float
    T: float
    B0: tuple
    hypotheses: object
    steady_state: object
    pipeline: object

    @property
    def passed(self):
        return self.hypotheses.passed and self.steady_state.passed and self.pipeline.passed

    def to_dict(self):
        return {
            'rho_ion': self.rho_ion,
            'T': self.T,
            'B0': list(self.B0),
            'hypotheses': self.hypotheses.to_dict(),
            'steady_state': self.steady_state.to_dict(),
            'pipeline': self.pipeline.to_dict(),
            'pass': self.passed,
        }


def nonvacuous(rho_ion, T, B0, vgrid, tgrid, nu=1.0, steady_tolerances=None, pipeline_tolerances=None,
               K_max=3, c_cap=SCORE_CAP, decay_orders=DEFAULT_DECAY_ORDERS):
    """Build the equilibrium triple and run every check on it"""
    f, E, B = equilibrium_triple(rho_ion, T, B0, vgrid, tgrid)
    steady = steady_state_report(f, E, B, nu, rho_ion, vgrid, tgrid, steady_tolerances or SteadyStateTolerances())
    hypotheses = build_hypothesis_report(f, E, B, nu, rho_ion, vgrid, tgrid, K_max=K_max, c_cap=c_cap,
                                         decay_orders=decay_orders, steady=steady)
    pipeline = proof_pipeline(f, E, B, nu, rho_ion, vgrid, tgrid, pipeline_tolerances or PipelineTolerances())
    report = NonvacuousReport(float(rho_ion), float(T), tuple(float(x) for x in np.reshape(B0, 3)),
                              hypotheses, steady, pipeline)
    if report.passed:
        logger.info("equilibrium (rho_ion=%g, T=%g) witnesses every hypothesis", rho_ion, T)
    else:
        logger.warning("non-vacuousness check failed: hypotheses %s, pipeline %s",
                       hypotheses.failing() or "ok", pipeline.verdict)
    return report


# Test the check
if __name__ == "__main__":
    from kinetics.grid import make_torus_grid, make_velocity_grid

    logging.basicConfig(level=logging.INFO)
    report = nonvacuous(1.0, 1.0, (0.0, 0.0, 2.0), make_velocity_grid(6.0, 12), make_torus_grid(4))
    print(f"Non-vacuous: {'PASS' if report.passed else 'FAIL'}  T_eq = {report.pipeline.T_eq}")
