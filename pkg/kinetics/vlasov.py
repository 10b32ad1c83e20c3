"""
Residuals of the steady-state Vlasov-Maxwell-Landau equations.

    v . grad_x f + (E + v x B) . grad_v f = nu Q(f, f)    (Vlasov)
    curl B = J = int v f dv                               (Ampere)
    div E = int f dv - rho_ion                            (Gauss)
    div B = 0

curl E = 0 is reported as a derived diagnostic and never enters the verdict.
"""

import logging
from dataclasses import asdict, dataclass, field

import numpy as np

from kinetics.errors import GridError, PositivityError
from kinetics.fields import curl, divergence, sup_norm
from kinetics.grid import integrate_v, torus_partial
from kinetics.landau import collision_field, score

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SteadyStateTolerances:
    vlasov: float = 1e-3
    ampere: float = 1e-6
    gauss: float = 1e-6
    divb: float = 1e-6
    curle: float = 1e-6


@dataclass
class SteadyStateReport:
    vlasov_sup: float
    vlasov_l2: float
    ampere_sup: float
    ampere_l2: float
    gauss_sup: float
    gauss_l2: float
    divb_sup: float
    divb_l2: float
    curle_sup: float
    curle_l2: float
    tolerances: SteadyStateTolerances
    flags: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(self.flags[name] for name in ('vlasov', 'ampere', 'gauss', 'divb'))

    def to_dict(self):
        doc = {
            'vlasov_sup': self.vlasov_sup,
            'ampere_sup': self.ampere_sup,
            'gauss_sup': self.gauss_sup,
            'divb_sup': self.divb_sup,
            'curle_sup': self.curle_sup,
            'l2': {
                'vlasov': self.vlasov_l2,
                'ampere': self.ampere_l2,
                'gauss': self.gauss_l2,
                'divb': self.divb_l2,
                'curle': self.curle_l2,
            },
            'flags': dict(self.flags),
            'tolerances': asdict(self.tolerances),
            'pass': self.passed,
        }
        return doc


def lorentz(E, B, v):
    """E + v x B, right-handed"""
    return np.asarray(E, dtype=float) + np.cross(v, B)


def _check_shared_grids(f, E, B, vgrid, tgrid):
    f = np.asarray(f, dtype=float)
    if f.shape != tgrid.shape + vgrid.shape:
        raise GridError(f"distribution of shape {f.shape} does not match torus {tgrid.shape} x velocity {vgrid.shape}")
    zero = np.zeros((3,) + tgrid.shape)
    E = zero if E is None else tgrid.check_vector(E)
    B = zero if B is None else tgrid.check_vector(B)
    return f, E, B


def density(f, vgrid):
    """rho(x) = int f dv, shape (M, M, M)"""
    return integrate_v(f, vgrid)


def current(f, vgrid):
    """J(x) = int v f dv, shape (3, M, M, M)"""
    return np.stack([integrate_v(Vk * f, vgrid) for Vk in vgrid.mesh])


def vlasov_residual(f, E, B, nu, vgrid, tgrid):
    """Pointwise residual of the Vlasov equation, shape (M, M, M, N, N, N)"""
    f, E, B = _check_shared_grids(f, E, B, vgrid, tgrid)
    if np.any(f <= 0):
        raise PositivityError("Vlasov residual needs f > 0")
    V = vgrid.mesh
    transport = sum(V[k] * torus_partial(f, k) for k in range(3))
    # grad_v f = f grad_v log f
    s = score(f, vgrid)
    shape = (slice(None),) * 3 + (None,) * 3
    Ex = [E[k][shape] for k in range(3)]
    Bx = [B[k][shape] for k in range(3)]
    force = (
        Ex[0] + V[1] * Bx[2] - V[2] * Bx[1],
        Ex[1] + V[2] * Bx[0] - V[0] * Bx[2],
        Ex[2] + V[0] * Bx[1] - V[1] * Bx[0],
    )
    acceleration = f * sum(force[k] * s[..., k] for k in range(3))
    residual = transport + acceleration
    if nu != 0:
        residual = residual - nu * collision_field(f, vgrid)
    return residual


def maxwell_residuals(f, E, B, rho_ion, vgrid, tgrid):
    """(ampere, gauss, divB, curlE) residual fields"""
    f, E, B = _check_shared_grids(f, E, B, vgrid, tgrid)
    ampere = curl(B) - current(f, vgrid)
    gauss = divergence(E) - (density(f, vgrid) - rho_ion)
    return ampere, gauss, divergence(B), curl(E)


def _l2(a, axis_count):
    """Discrete L2 norm over the torus (and velocity measure when present)"""
    a = np.asarray(a, dtype=float)
    return float(np.sqrt(np.mean(a * a) * axis_count))


def steady_state_report(f, E, B, nu, rho_ion, vgrid, tgrid, tolerances=None):
    tolerances = tolerances or SteadyStateTolerances()
    vl = vlasov_residual(f, E, B, nu, vgrid, tgrid)
    ampere, gauss, divb, curle = maxwell_residuals(f, E, B, rho_ion, vgrid, tgrid)
    velocity_volume = (2 * vgrid.L) ** 3
    report = SteadyStateReport(
        vlasov_sup=sup_norm(vl),
        vlasov_l2=_l2(vl, velocity_volume),
        ampere_sup=sup_norm(ampere, vector=True),
        ampere_l2=_l2(ampere, 3),
        gauss_sup=sup_norm(gauss),
        gauss_l2=_l2(gauss, 1),
        divb_sup=sup_norm(divb),
        divb_l2=_l2(divb, 1),
        curle_sup=sup_norm(curle, vector=True),
        curle_l2=_l2(curle, 3),
        tolerances=tolerances,
    )
    for name in ('vlasov', 'ampere', 'gauss', 'divb', 'curle'):
        report.flags[name] = getattr(report, f'{name}_sup') <= getattr(tolerances, name)
    logger.info("steady-state residuals: vlasov %.2e ampere %.2e gauss %.2e divB %.2e curlE %.2e",
                report.vlasov_sup, report.ampere_sup, report.gauss_sup, report.divb_sup, report.curle_sup)
    return report
