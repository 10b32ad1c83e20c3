"""
Velocity and torus grids.

Velocity space is truncated to the cube [-L, L]^3 and sampled at cell centres,
so the node set is closed under v -> -v and never contains the origin.
Velocity samples are arrays whose last three axes are the velocity axes.

The torus T^3 = (R/Z)^3 has unit period. Torus fields put the three torus
axes first: a ScalarField is (M, M, M), a VecField is (3, M, M, M) and a
distribution is (M, M, M, N, N, N). Torus derivatives are spectral.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from kinetics.errors import GridError

VELOCITY_AXES = (-3, -2, -1)
TORUS_AXES = (0, 1, 2)


@dataclass(frozen=True)
class VelocityGrid:
    half_width: float
    points_per_axis: int

    @property
    def L(self):
        return self.half_width

    @property
    def N(self):
        return self.points_per_axis

    @property
    def spacing(self):
        return 2.0 * self.half_width / self.points_per_axis

    h = spacing

    @property
    def weight(self):
        return self.spacing ** 3

    @property
    def shape(self):
        return (self.N, self.N, self.N)

    @property
    def node_count(self):
        return self.N ** 3

    @cached_property
    def axis_nodes(self):
        """Cell centres -L + (i + 1/2) h along one axis"""
        return -self.half_width + (np.arange(self.N) + 0.5) * self.spacing

    @cached_property
    def mesh(self):
        return np.meshgrid(self.axis_nodes, self.axis_nodes, self.axis_nodes, indexing='ij')

    @cached_property
    def points(self):
        """Node coordinates, shape (N, N, N, 3)"""
        return np.stack(self.mesh, axis=-1)

    @cached_property
    def speed(self):
        return np.sqrt(np.sum(self.points ** 2, axis=-1))

    def check(self, g):
        g = np.asarray(g, dtype=float)
        if g.shape[-3:] != self.shape:
            raise GridError(f"samples of shape {g.shape} do not live on a {self.shape} velocity grid")
        return g


@dataclass(frozen=True)
class TorusGrid:
    points_per_axis: int

    def __post_init__(self):
        if int(self.points_per_axis) != self.points_per_axis or self.points_per_axis < 2:
            raise GridError(f"torus needs at least 2 points per axis, got {self.points_per_axis}")

    @property
    def M(self):
        return self.points_per_axis

    @property
    def shape(self):
        return (self.M, self.M, self.M)

    @property
    def node_count(self):
        return self.M ** 3

    @cached_property
    def axis_nodes(self):
        return np.arange(self.M) / self.M

    @cached_property
    def mesh(self):
        return np.meshgrid(self.axis_nodes, self.axis_nodes, self.axis_nodes, indexing='ij')

    @cached_property
    def wavenumbers(self):
        """Integer wavenumbers in FFT order, Nyquist reported as +M/2"""
        k = np.fft.fftfreq(self.M, d=1.0 / self.M)
        if self.M % 2 == 0:
            k[self.M // 2] = self.M // 2
        return k

    def check_scalar(self, s):
        s = np.asarray(s, dtype=float)
        if s.shape[:3] != self.shape:
            raise GridError(f"field of shape {s.shape} does not live on a {self.shape} torus")
        return s

    def check_vector(self, V):
        V = np.asarray(V, dtype=float)
        if V.shape != (3,) + self.shape:
            raise GridError(f"vector field of shape {V.shape} does not live on a {self.shape} torus")
        return V


def make_velocity_grid(L, N):
    """Build the cell-centred velocity grid on [-L, L]^3"""
    if not np.isfinite(L) or L <= 0:
        raise GridError(f"half width L must be positive, got {L}")
    if int(N) != N or N < 4 or N % 2:
        raise GridError(f"N must be even >= 4, got {N}")
    return VelocityGrid(float(L), int(N))


def make_torus_grid(M):
    return TorusGrid(int(M))


def integrate_v(g, grid):
    """Midpoint rule over the velocity cube; reduces the last three axes"""
    g = grid.check(g)
    total = grid.weight * np.sum(g, axis=VELOCITY_AXES)
    return float(total) if np.ndim(total) == 0 else total


def grad_v(g, grid):
    """Second-order velocity gradient: central inside, one-sided on the two edge layers"""
    g = grid.check(g)
    return tuple(np.gradient(g, grid.spacing, axis=axis, edge_order=2) for axis in VELOCITY_AXES)


def div_v(F, grid):
    """
    Velocity divergence of a flux (F1, F2, F3) in face form.

    Face values are (F_i + F_{i+1}) / 2, so interior nodes see the central
    difference of grad_v. The two outer faces of the box carry zero flux and
    the node sum telescopes to zero: mass is conserved to rounding.
    """
    total = 0.0
    for Fk, axis in zip(F, VELOCITY_AXES):
        g = np.moveaxis(grid.check(Fk), axis, -1)
        faces = np.zeros(g.shape[:-1] + (g.shape[-1] + 1,))
        faces[..., 1:-1] = 0.5 * (g[..., 1:] + g[..., :-1])
        total = total + np.moveaxis(np.diff(faces, axis=-1), -1, axis) / grid.spacing
    return total


def reflect_v(g):
    """Samples at -v (node reflection)"""
    return np.asarray(g)[..., ::-1, ::-1, ::-1]


def _derivative_symbol(M):
    k = np.fft.fftfreq(M, d=1.0 / M)
    if M % 2 == 0:
        k[M // 2] = 0.0
    return 2j * np.pi * k


def torus_partial(s, axis):
    """Spectral derivative along torus axis 0, 1 or 2; extra trailing axes ride along"""
    s = np.asarray(s, dtype=float)
    M = s.shape[axis]
    shape = [1] * s.ndim
    shape[axis] = M
    symbol = _derivative_symbol(M).reshape(shape)
    return np.fft.ifft(np.fft.fft(s, axis=axis) * symbol, axis=axis).real


def torus_gradient(s):
    return np.stack([torus_partial(s, axis) for axis in TORUS_AXES])


def torus_mean(s):
    """Discrete integral over T^3 (unit volume): mean over the three leading axes"""
    total = np.mean(np.asarray(s, dtype=float), axis=TORUS_AXES)
    return float(total) if np.ndim(total) == 0 else total


def vector_mean(V):
    return np.array([torus_mean(V[k]) for k in range(3)])


def fourier_modes(s):
    """Normalized Fourier coefficients over the torus axes, |c_k| <= sup|s|"""
    s = np.asarray(s, dtype=float)
    return np.fft.fftn(s, axes=TORUS_AXES) / np.prod(s.shape[:3])
