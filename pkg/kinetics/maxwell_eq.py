"""
Maxwellian and local-Maxwellian states, hydrodynamic moments.
"""

from dataclasses import dataclass

import numpy as np

from kinetics.errors import DegenerateDensityError, ParameterError, PositivityError
from kinetics.grid import integrate_v

DENSITY_FLOOR = 1e-14


@dataclass(frozen=True)
class MaxwellianParams:
    rho: float
    u: tuple
    T: float

    def __post_init__(self):
        if not self.rho > 0:
            raise ParameterError(f"density must be positive, got {self.rho}")
        if not self.T > 0:
            raise ParameterError(f"temperature must be positive, got {self.T}")
        u = tuple(float(x) for x in np.asarray(self.u, dtype=float).reshape(3))
        object.__setattr__(self, 'u', u)

    @classmethod
    def parse(cls, text):
        """Parse 'rho=1, u=0.5,0,0, T=0.8' (u takes the three values after its key)"""
        values = {}
        key = None
        try:
            for tok in (tok.strip() for tok in text.split(',')):
                if '=' in tok:
                    key, val = (part.strip() for part in tok.split('=', 1))
                    values[key] = [float(val)]
                elif key is not None and tok:
                    values[key].append(float(tok))
            return cls(values['rho'][0], tuple(values.get('u', [0.0, 0.0, 0.0])), values['T'][0])
        except (KeyError, ValueError, TypeError) as e:
            raise ParameterError(f"cannot parse Maxwellian parameters from {text!r}: {e}") from e

    def to_log_quadratic(self):
        u = np.asarray(self.u)
        c = -0.5 / self.T
        b = u / self.T
        a = np.log(self.rho) - 1.5 * np.log(2 * np.pi * self.T) - 0.5 * np.dot(u, u) / self.T
        return LogQuadParams(float(a), tuple(b), float(c))


@dataclass(frozen=True)
class LogQuadParams:
    """log f = a + b.v + c|v|^2"""
    a: float
    b: tuple
    c: float

    def __post_init__(self):
        if not self.c < 0:
            raise ParameterError(f"quadratic coefficient c must be negative for integrability, got {self.c}")
        b = tuple(float(x) for x in np.asarray(self.b, dtype=float).reshape(3))
        object.__setattr__(self, 'b', b)

    def to_maxwellian(self):
        T = -0.5 / self.c
        u = np.asarray(self.b) * T
        rho = np.exp(self.a + 0.5 * np.dot(u, u) / T) * (2 * np.pi * T) ** 1.5
        return MaxwellianParams(float(rho), tuple(u), float(T))


def equilibrium_maxwellian(rho_ion, T, v):
    """rho_ion (2 pi T)^{-3/2} exp(-|v|^2 / 2T); v has a trailing axis of length 3"""
    if not rho_ion > 0:
        raise ParameterError(f"rho_ion must be positive, got {rho_ion}")
    if not T > 0:
        raise ParameterError(f"T must be positive, got {T}")
    v = np.asarray(v, dtype=float)
    return rho_ion * (2 * np.pi * T) ** -1.5 * np.exp(-np.sum(v * v, axis=-1) / (2 * T))


def maxwellian(params, v):
    u = np.asarray(params.u)
    v = np.asarray(v, dtype=float)
    return params.rho * (2 * np.pi * params.T) ** -1.5 * np.exp(-np.sum((v - u) ** 2, axis=-1) / (2 * params.T))


def local_maxwellian(p, v):
    v = np.asarray(v, dtype=float)
    if not p.c < 0:
        raise ParameterError(f"c must be negative, got {p.c}")
    return np.exp(p.a + v @ np.asarray(p.b) + p.c * np.sum(v * v, axis=-1))


def moments(f, grid):
    """Density, bulk velocity and scalar temperature of a velocity slice"""
    f = grid.check(f)
    rho = integrate_v(f, grid)
    if not rho > DENSITY_FLOOR:
        raise DegenerateDensityError(f"density {rho} is below {DENSITY_FLOOR}")
    if np.any(f <= 0):
        raise PositivityError("moments need a strictly positive distribution")
    V = grid.mesh
    u = np.array([integrate_v(Vk * f, grid) for Vk in V]) / rho
    spread = sum((Vk - uk) ** 2 for Vk, uk in zip(V, u))
    T = integrate_v(spread * f, grid) / (3.0 * rho)
    return rho, u, T


def matched_maxwellian(f, grid):
    """Maxwellian sampled on the grid with the moments of f"""
    rho, u, T = moments(f, grid)
    return maxwellian(MaxwellianParams(rho, tuple(u), T), grid.points)
