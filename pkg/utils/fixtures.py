"""
Candidate States
Equilibria, canonical defects and seeded random distributions on the shared grids
"""

import numpy as np

from kinetics.errors import ParameterError
from kinetics.fields import solve_gauss
from kinetics.grid import integrate_v, torus_mean
from kinetics.maxwell_eq import MaxwellianParams, equilibrium_maxwellian, maxwellian


def _constant_field(value, tgrid):
    return np.zeros((3,) + tgrid.shape) + np.asarray(value, dtype=float).reshape((3, 1, 1, 1))


def _broadcast(slice_, tgrid, vgrid):
    return np.broadcast_to(slice_, tgrid.shape + vgrid.shape).copy()


def _x1_profile(tgrid):
    """x1 coordinate shaped to broadcast against a distribution"""
    return tgrid.axis_nodes[:, None, None, None, None, None]


def rng_for(seed):
    """The one generator behind every random fixture: PCG64 seeded with the config seed"""
    return np.random.Generator(np.random.PCG64(seed))


def equilibrium(vgrid, tgrid, rho_ion=1.0, T=1.0, B0=(0.0, 0.0, 0.0)):
    f = _broadcast(equilibrium_maxwellian(rho_ion, T, vgrid.points), tgrid, vgrid)
    return f, _constant_field((0.0, 0.0, 0.0), tgrid), _constant_field(B0, tgrid)


def drifting(vgrid, tgrid, rho_ion=1.0, T=1.0, drift=0.3, B0=(0.0, 0.0, 0.0)):
    """Uniform Maxwellian with bulk velocity (drift, 0, 0): b = u / T is a nonzero constant"""
    f = _broadcast(maxwellian(MaxwellianParams(rho_ion, (drift, 0.0, 0.0), T), vgrid.points), tgrid, vgrid)
    return f, _constant_field((0.0, 0.0, 0.0), tgrid), _constant_field(B0, tgrid)


def given_maxwellian(vgrid, tgrid, params, B0=(0.0, 0.0, 0.0)):
    """x-uniform Maxwellian with explicit (rho, u, T), e.g. from the maxwellian config key"""
    if params is None:
        raise ParameterError("no Maxwellian parameters given")
    f = _broadcast(maxwellian(params, vgrid.points), tgrid, vgrid)
    return f, _constant_field((0.0, 0.0, 0.0), tgrid), _constant_field(B0, tgrid)


def varying_temperature(vgrid, tgrid, rho_ion=1.0, T=1.0, amplitude=0.1, B0=(0.0, 0.0, 0.0)):
    """Local Maxwellian with T(x) = T (1 + amplitude sin 2 pi x1) and uniform density"""
    T_x = T * (1.0 + amplitude * np.sin(2 * np.pi * tgrid.axis_nodes))
    f = np.empty(tgrid.shape + vgrid.shape)
    for i, Ti in enumerate(T_x):
        f[i] = equilibrium_maxwellian(rho_ion, Ti, vgrid.points)
    return f, _constant_field((0.0, 0.0, 0.0), tgrid), _constant_field(B0, tgrid)


def nonharmonic_b(vgrid, tgrid, rho_ion=1.0, T=1.0, amplitude=0.1, B0=(0.0, 0.0, 0.0)):
    """Equilibrium f with B = B0 + (amplitude sin 2 pi x3, 0, 0), which has nonzero curl"""
    f, E, B = equilibrium(vgrid, tgrid, rho_ion, T, B0)
    B[0] += amplitude * np.sin(2 * np.pi * tgrid.mesh[2])
    return f, E, B


def bimaxwellian_slice(vgrid, rho=1.0, separation=1.0, T=1.0):
    """(M(rho, +s e1, T) + M(rho, -s e1, T)) / 2"""
    plus = maxwellian(MaxwellianParams(rho, (separation, 0.0, 0.0), T), vgrid.points)
    minus = maxwellian(MaxwellianParams(rho, (-separation, 0.0, 0.0), T), vgrid.points)
    return 0.5 * (plus + minus)


def bimaxwellian(vgrid, tgrid, rho_ion=1.0, T=1.0, separation=1.0, B0=(0.0, 0.0, 0.0)):
    f = _broadcast(bimaxwellian_slice(vgrid, rho_ion, separation, T), tgrid, vgrid)
    return f, _constant_field((0.0, 0.0, 0.0), tgrid), _constant_field(B0, tgrid)


def perturbed(vgrid, tgrid, rho_ion=1.0, T=1.0, amplitude=0.1, B0=(0.0, 0.0, 0.0)):
    """M(v) (1 + amplitude cos 2 pi x1) with its self-consistent field"""
    f = equilibrium_maxwellian(rho_ion, T, vgrid.points) * (1.0 + amplitude * np.cos(2 * np.pi * _x1_profile(tgrid)))
    f = np.broadcast_to(f, tgrid.shape + vgrid.shape).copy()
    rho = integrate_v(f, vgrid)
    E = solve_gauss(rho, torus_mean(rho)).E
    return f, E, _constant_field(B0, tgrid)


def random_slice(vgrid, rng, modes=2, strength=0.3):
    """
    Maxwellian with random (T, u) times exp(g), g a random cosine series of
    `modes` harmonics per velocity axis. Strictly positive, band-limited in v
    and Gaussian in the tails.
    """
    T = rng.uniform(0.7, 1.3)
    u = rng.uniform(-0.3, 0.3, size=3)
    base = maxwellian(MaxwellianParams(1.0, tuple(u), T), vgrid.points)
    g = np.zeros(vgrid.shape)
    for axis, V in enumerate(vgrid.mesh):
        for k in range(1, modes + 1):
            amp = rng.normal(0.0, strength / modes)
            phase = rng.uniform(0.0, 2 * np.pi)
            g += amp * np.cos(np.pi * k * V / vgrid.L + phase)
    return base * np.exp(g)


def random_field(vgrid, tgrid, seed=0, amplitude=0.1):
    """Random velocity slice modulated by a random single-mode density wave in x"""
    rng = rng_for(seed)
    slice_ = random_slice(vgrid, rng)
    k = rng.integers(-1, 2, size=3)
    if not np.any(k):
        k[0] = 1
    phase = rng.uniform(0.0, 2 * np.pi)
    X = tgrid.mesh
    wave = 1.0 + amplitude * np.sin(2 * np.pi * (k[0] * X[0] + k[1] * X[1] + k[2] * X[2]) + phase)
    f = wave[..., None, None, None] * slice_
    rho = integrate_v(f, vgrid)
    E = solve_gauss(rho, torus_mean(rho)).E
    return f, E, _constant_field((0.0, 0.0, 0.0), tgrid)


def build_candidate(name, config, vgrid, tgrid):
    """(f, E, B) for a named candidate using the scenario parameters"""
    rho, T, B0 = config.rho_ion, config.T_ref, config.B0
    if name == 'equilibrium':
        return equilibrium(vgrid, tgrid, rho, T, B0)
    if name == 'drifting':
        return drifting(vgrid, tgrid, rho, T, config.drift, B0)
    if name == 'varying_temperature':
        return varying_temperature(vgrid, tgrid, rho, T, config.amplitude, B0)
    if name == 'nonharmonic_b':
        return nonharmonic_b(vgrid, tgrid, rho, T, config.amplitude, B0)
    if name == 'bimaxwellian':
        return bimaxwellian(vgrid, tgrid, rho, T, 1.0, B0)
    if name == 'perturbed':
        return perturbed(vgrid, tgrid, rho, T, config.amplitude, B0)
    if name == 'random':
        return random_field(vgrid, tgrid, config.seed, config.amplitude)
    if name == 'maxwellian':
        return given_maxwellian(vgrid, tgrid, config.maxwellian, B0)
    raise ParameterError(f"unknown candidate {name!r}")


def initial_slice(name, config, vgrid):
    """Velocity-only initial data for homogeneous relaxation"""
    rho, T = config.rho_ion, config.T_ref
    if name == 'bimaxwellian':
        return bimaxwellian_slice(vgrid, rho, 1.0, T)
    if name == 'equilibrium':
        return equilibrium_maxwellian(rho, T, vgrid.points)
    if name == 'drifting':
        return maxwellian(MaxwellianParams(rho, (config.drift, 0.0, 0.0), T), vgrid.points)
    if name == 'random':
        return random_slice(vgrid, rng_for(config.seed))
    if name == 'maxwellian':
        if config.maxwellian is None:
            raise ParameterError("no Maxwellian parameters given")
        return maxwellian(config.maxwellian, vgrid.points)
    raise ParameterError(f"candidate {name!r} has no homogeneous initial slice")
