"""
Time integration toward equilibrium.

Two drivers share one diagnostics record:

* run_homogeneous: space-homogeneous Landau relaxation df/dt = nu Q(f, f),
  explicit midpoint RK2.
* run_vpl: electrostatic Vlasov-Poisson-Landau on T^3 x [-L, L]^3 with Strang
  splitting. x-transport is an exact spectral phase shift, velocity advection
  is semi-Lagrangian with local cubic Lagrange interpolation (zero outside the
  velocity box) and collisions reuse step_homogeneous at every torus node.

Steps are never clamped. A step that leaves a nonpositive value raises
StepRejectedError and the drivers retry with dt halved, at most 10 times.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from kinetics.errors import ParameterError, PositivityError, StepRejectedError
from kinetics.fields import solve_gauss, sup_norm
from kinetics.grid import TORUS_AXES, integrate_v, torus_mean
from kinetics.landau import COULOMB_GAMMA, collision_Q, dissipation, dissipation_field, entropy, map_torus_nodes
from kinetics.maxwell_eq import matched_maxwellian

logger = logging.getLogger(__name__)

MAX_HALVINGS = 10
ENTROPY_SLACK = 1e-10


@dataclass
class DiagnosticsRecord:
    t: float
    H: float
    D: float
    mass: float
    momentum: tuple
    energy: float
    supE: float
    dist_maxw: float

    CSV_HEADER = "t,H,D,mass,p1,p2,p3,energy,supE,dist_maxw"

    def as_row(self):
        return [self.t, self.H, self.D, self.mass, *self.momentum, self.energy, self.supE, self.dist_maxw]


@dataclass
class RelaxationResult:
    records: list
    f: np.ndarray
    E: np.ndarray = None
    snapshots: list = field(default_factory=list)

    @property
    def entropy_monotone(self):
        H = [r.H for r in self.records]
        return all(b <= a + ENTROPY_SLACK for a, b in zip(H, H[1:]))


@dataclass
class VplState:
    f: np.ndarray
    E: np.ndarray
    B: np.ndarray
    t: float = 0.0
    rho_ion: float = 1.0


def _relative_sup(f, target):
    return float(np.max(np.abs(f - target)) / np.max(np.abs(target)))


def _reject_nonpositive(f, dt, where):
    if np.any(~np.isfinite(f)) or np.any(f <= 0):
        raise StepRejectedError(f"{where} produced a nonpositive value at dt = {dt:.3e}", dt)


def _check_dt(dt):
    if not dt > 0 or not math.isfinite(dt):
        raise ParameterError(f"dt must be positive, got {dt}")


def step_homogeneous(f, dt, nu, grid, gamma=COULOMB_GAMMA):
    """One explicit midpoint step of df/dt = nu Q(f, f)"""
    _check_dt(dt)
    f = grid.check(f)
    if np.any(f <= 0):
        raise PositivityError("step_homogeneous needs f > 0")
    if nu == 0:
        return f.copy()
    half = f + 0.5 * dt * nu * collision_Q(f, grid, gamma).Q
    _reject_nonpositive(half, dt, "RK2 midpoint stage")
    out = f + dt * nu * collision_Q(half, grid, gamma).Q
    _reject_nonpositive(out, dt, "RK2 step")
    return out


def _advance(step, state, dt, max_halvings=MAX_HALVINGS):
    """Apply step over dt, halving the substep after each rejection"""
    last = None
    for halving in range(max_halvings + 1):
        substeps = 2 ** halving
        try:
            current = state
            for _ in range(substeps):
                current = step(current, dt / substeps)
        except StepRejectedError as e:
            last = e
            logger.warning("step rejected (%s), halving dt to %.3e", e, dt / (2 * substeps))
            continue
        return current
    raise StepRejectedError(f"positivity lost after {max_halvings} dt halvings", last.dt)


def _step_count(dt, t_end):
    _check_dt(dt)
    if t_end < 0:
        raise ParameterError(f"t_end must be nonnegative, got {t_end}")
    return int(math.ceil(t_end / dt - 1e-9))


def _homogeneous_record(t, f, grid, target, gamma):
    V = grid.mesh
    return DiagnosticsRecord(
        t=t,
        H=entropy(f, grid),
        D=dissipation(f, grid, gamma),
        mass=integrate_v(f, grid),
        momentum=tuple(integrate_v(Vk * f, grid) for Vk in V),
        energy=0.5 * integrate_v(grid.speed ** 2 * f, grid),
        supE=0.0,
        dist_maxw=_relative_sup(f, target),
    )


def run_homogeneous(f0, nu, dt, t_end, record_every, grid, gamma=COULOMB_GAMMA):
    """Relax a velocity slice; diagnostics every record_every steps and at t_end"""
    if record_every < 1:
        raise ParameterError(f"record_every must be >= 1, got {record_every}")
    f = grid.check(f0).copy()
    if np.any(f <= 0):
        raise PositivityError("initial distribution must be strictly positive")
    n_steps = _step_count(dt, t_end)
    # conservation fixes the limit
    target = matched_maxwellian(f, grid)
    records = [_homogeneous_record(0.0, f, grid, target, gamma)]
    t = 0.0
    for n in range(1, n_steps + 1):
        h = min(dt, t_end - t)
        f = _advance(lambda g, tau: step_homogeneous(g, tau, nu, grid, gamma), f, h)
        t = min(n * dt, t_end)
        if n % record_every == 0 or n == n_steps:
            rec = _homogeneous_record(t, f, grid, target, gamma)
            records.append(rec)
            logger.info("t = %.3f  H = %.8f  D = %.3e  dist = %.3e", t, rec.H, rec.D, rec.dist_maxw)
    result = RelaxationResult(records=records, f=f)
    if not result.entropy_monotone:
        logger.warning("entropy increased along the homogeneous run")
    return result


def transport_phase_shift(f, dt, vgrid):
    """Exact free streaming f(x - v dt, v) for every velocity node, via the torus FFT"""
    f = np.asarray(f, dtype=float)
    M = f.shape[0]
    k = np.fft.fftfreq(M, d=1.0 / M)
    V = vgrid.mesh
    pad = (None,) * 3
    phase = (k[:, None, None][(...,) + pad] * V[0]
             + k[None, :, None][(...,) + pad] * V[1]
             + k[None, None, :][(...,) + pad] * V[2])
    coeffs = np.fft.fftn(f, axes=TORUS_AXES) * np.exp(-2j * np.pi * dt * phase)
    return np.fft.ifftn(coeffs, axes=TORUS_AXES).real


def _lagrange_weights(theta):
    """Cubic Lagrange weights on nodes -1, 0, 1, 2 for a point at theta in [0, 1)"""
    return (
        -theta * (theta - 1) * (theta - 2) / 6,
        (theta + 1) * (theta - 1) * (theta - 2) / 2,
        -(theta + 1) * theta * (theta - 2) / 2,
        (theta + 1) * theta * (theta - 1) / 6,
    )


def shift_axis(g, shift, axis):
    """Samples of g(i - shift) along one axis; values outside the box are 0"""
    if shift == 0:
        return g
    position = -float(shift)
    m = int(math.floor(position))
    theta = position - m
    n = g.shape[axis]
    pad = abs(m) + 2
    widths = [(0, 0)] * g.ndim
    widths[axis] = (pad, pad)
    padded = np.pad(g, widths)
    base = np.arange(n) + m + pad
    out = np.zeros_like(g)
    for offset, w in zip(range(-1, 3), _lagrange_weights(theta)):
        if w != 0:
            out += w * np.take(padded, base + offset, axis=axis)
    return out


def accelerate(f, E, dt, vgrid):
    """Velocity advection f(x, v - dt E(x)) at every torus node"""
    out = np.empty_like(f)
    for idx in np.ndindex(*f.shape[:3]):
        g = f[idx]
        for k in range(3):
            g = shift_axis(g, dt * E[(k,) + idx] / vgrid.spacing, axis=k)
        out[idx] = g
    return out


def kinetic_energy(f, vgrid):
    return torus_mean(integrate_v(0.5 * vgrid.speed ** 2 * f, vgrid))


def field_energy(E):
    return 0.5 * torus_mean(np.sum(np.asarray(E) ** 2, axis=0))


def step_vpl(state, dt, nu, vgrid, self_consistent=True, gamma=COULOMB_GAMMA):
    """One Strang step: half transport, acceleration, collision, half transport"""
    _check_dt(dt)
    if np.any(np.asarray(state.B) != 0):
        raise ParameterError("the dynamic mode is electrostatic; B must vanish")
    f = state.f
    if np.any(f <= 0):
        raise PositivityError("step_vpl needs f > 0")

    def field_of(g):
        if not self_consistent:
            return state.E
        return solve_gauss(integrate_v(g, vgrid), state.rho_ion).E

    f = transport_phase_shift(f, 0.5 * dt, vgrid)
    _reject_nonpositive(f, dt, "x-transport")
    f = accelerate(f, field_of(f), dt, vgrid)
    _reject_nonpositive(f, dt, "velocity advection")
    if nu != 0:
        slices = map_torus_nodes(lambda g: step_homogeneous(g, dt, nu, vgrid, gamma), f)
        f = np.stack(slices).reshape(f.shape)
    f = transport_phase_shift(f, 0.5 * dt, vgrid)
    _reject_nonpositive(f, dt, "x-transport")
    return VplState(f=f, E=field_of(f), B=state.B, t=state.t + dt, rho_ion=state.rho_ion)


def _vpl_record(state, vgrid, target, gamma):
    f = state.f
    V = vgrid.mesh
    mean_f = np.mean(f, axis=TORUS_AXES)
    return DiagnosticsRecord(
        t=state.t,
        H=torus_mean(integrate_v(f * np.log(f), vgrid)),
        D=torus_mean(dissipation_field(f, vgrid, gamma)),
        mass=torus_mean(integrate_v(f, vgrid)),
        momentum=tuple(torus_mean(integrate_v(Vk * f, vgrid)) for Vk in V),
        energy=kinetic_energy(f, vgrid) + field_energy(state.E),
        supE=sup_norm(state.E, vector=True),
        dist_maxw=_relative_sup(mean_f, target),
    )


def run_vpl(f0, B0, nu, dt, t_end, record_every, vgrid, tgrid, rho_ion=None, self_consistent=True, E0=None,
            gamma=COULOMB_GAMMA):
    """
    Electrostatic Vlasov-Poisson-Landau run from f0.

    rho_ion defaults to the mean initial density. With self_consistent=False
    the field is frozen at E0 (zero by default). Field snapshots (step, t, E)
    are kept every record_every steps.
    """
    if record_every < 1:
        raise ParameterError(f"record_every must be >= 1, got {record_every}")
    if np.any(np.asarray(B0, dtype=float) != 0):
        raise ParameterError(f"the dynamic mode is electrostatic; B0 must vanish, got {tuple(B0)}")
    f = np.asarray(f0, dtype=float).copy()
    if f.shape != tgrid.shape + vgrid.shape:
        raise ParameterError(f"initial distribution has shape {f.shape}")
    if np.any(f <= 0):
        raise PositivityError("initial distribution must be strictly positive")
    B = np.zeros((3,) + tgrid.shape) + np.asarray(B0, dtype=float).reshape((3, 1, 1, 1))
    n_steps = _step_count(dt, t_end)
    rho_ion = torus_mean(integrate_v(f, vgrid)) if rho_ion is None else rho_ion
    if self_consistent:
        E = solve_gauss(integrate_v(f, vgrid), rho_ion).E
    else:
        E = np.zeros((3,) + tgrid.shape) if E0 is None else tgrid.check_vector(E0)
    state = VplState(f=f, E=E, B=B, t=0.0, rho_ion=rho_ion)
    target = matched_maxwellian(np.mean(f, axis=TORUS_AXES), vgrid)
    records = [_vpl_record(state, vgrid, target, gamma)]
    snapshots = [(0, 0.0, state.E.copy())]
    for n in range(1, n_steps + 1):
        h = min(dt, t_end - state.t)
        state = _advance(lambda s, tau: step_vpl(s, tau, nu, vgrid, self_consistent, gamma), state, h)
        if n % record_every == 0 or n == n_steps:
            rec = _vpl_record(state, vgrid, target, gamma)
            records.append(rec)
            snapshots.append((n, state.t, state.E.copy()))
            logger.info("t = %.3f  supE = %.3e  energy = %.8f  dist = %.3e", state.t, rec.supE, rec.energy,
                        rec.dist_maxw)
    return RelaxationResult(records=records, f=state.f, E=state.E, snapshots=snapshots)
