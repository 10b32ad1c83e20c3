"""
Torus vector calculus: divergence, curl, the Gauss-law solve and the harmonic-field check.
"""

from dataclasses import dataclass

import numpy as np

from kinetics.errors import NeutralityError
from kinetics.grid import TORUS_AXES, fourier_modes, torus_mean, torus_partial, vector_mean

NEUTRALITY_TOLERANCE = 1e-8


@dataclass
class GaussSolveResult:
    E: np.ndarray
    potential: np.ndarray
    residual_div: float
    residual_curl: float


def divergence(V):
    V = np.asarray(V, dtype=float)
    return sum(torus_partial(V[k], k) for k in range(3))


def curl(V):
    V = np.asarray(V, dtype=float)
    d = lambda comp, axis: torus_partial(V[comp], axis)
    return np.stack([
        d(2, 1) - d(1, 2),
        d(0, 2) - d(2, 0),
        d(1, 0) - d(0, 1),
    ])


def sup_norm(a, vector=False):
    """Sup over torus nodes; for vector fields the pointwise Euclidean norm"""
    a = np.asarray(a, dtype=float)
    if vector:
        return float(np.max(np.sqrt(np.sum(a * a, axis=0))))
    return float(np.max(np.abs(a)))


def _laplacian_symbol(M):
    k = np.fft.fftfreq(M, d=1.0 / M)
    k1, k2, k3 = np.meshgrid(k, k, k, indexing='ij')
    return (2 * np.pi) ** 2 * (k1 ** 2 + k2 ** 2 + k3 ** 2)


def solve_gauss(rho, rho_ion, tol=NEUTRALITY_TOLERANCE):
    """Solve div E = rho - rho_ion for the zero-mean, curl-free E = -grad phi"""
    rho = np.asarray(rho, dtype=float)
    excess = torus_mean(rho) - rho_ion
    if abs(excess) > tol:
        raise NeutralityError(
            f"mean density differs from rho_ion by {excess:.3e} (> {tol:.1e}); no periodic solution")
    source = rho - rho_ion
    K2 = _laplacian_symbol(rho.shape[0])
    coeffs = np.fft.fftn(source)
    K2[0, 0, 0] = 1.0
    phi_hat = coeffs / K2
    phi_hat[0, 0, 0] = 0.0
    phi = np.fft.ifftn(phi_hat).real
    E = -np.stack([torus_partial(phi, axis) for axis in TORUS_AXES])
    residual_div = sup_norm(divergence(E) - (source - excess))
    residual_curl = sup_norm(curl(E), vector=True)
    return GaussSolveResult(E=E, potential=phi, residual_div=residual_div, residual_curl=residual_curl)


def _nonzero_mode_amplitude(V):
    """Largest |coefficient| over k != 0, all components"""
    modes = np.abs(np.stack([fourier_modes(V[k]) for k in range(3)]))
    modes[:, 0, 0, 0] = 0.0
    return float(np.max(modes))


def harmonic_constant_check(B, tol):
    """
    Curl-free and divergence-free on the torus forces every k != 0 mode to vanish.

    For k != 0, |k x b|^2 + |k . b|^2 = |k|^2 |b|^2, so each mode is bounded by
    sqrt(3 curl^2 + div^2) / (2 pi). Nyquist modes are invisible to the
    derivatives and are held to the same bound explicitly.
    """
    B = np.asarray(B, dtype=float)
    curl_norm = sup_norm(curl(B), vector=True)
    div_norm = sup_norm(divergence(B))
    report = {'curl_norm': curl_norm, 'div_norm': div_norm, 'is_constant': False, 'B0': None,
              'mode_amplitude': None, 'mode_bound': None}
    if curl_norm > tol or div_norm > tol:
        return report
    bound = np.sqrt(3 * curl_norm ** 2 + div_norm ** 2) / (2 * np.pi)
    amplitude = _nonzero_mode_amplitude(B)
    report['mode_amplitude'] = amplitude
    report['mode_bound'] = float(bound)
    # slack for the rounding floor of the FFT
    if amplitude <= bound + 1e-14 * (1.0 + sup_norm(B, vector=True)):
        report['is_constant'] = True
        report['B0'] = vector_mean(B)
    return report
