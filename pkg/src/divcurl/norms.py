"""Norm evaluators: weighted L2, H^{1/2} boundary, discrete H1 energies.

Volume norms use Parseval in the angle and composite trapezoid in radius:
||f||^2_{L_{2,N}} = 2 pi sum_k int |f_k(s)|^2 (1+s^2)^N s ds.  The gradient
energy uses the full polar gradient including the frame-curvature terms, so
constant fields contribute exactly zero.
"""

from __future__ import annotations

import numpy as np

from .disk import VelocitySolution
from .grids import BoundaryTrace, SpectralField, WeightedNormParams
from .quadrature import radial_integral

__all__ = [
    "l2_weighted_norm",
    "h_half_boundary_norm",
    "h1_seminorm",
    "scalar_gradient_norm",
    "far_field_deviation_l2",
    "far_field_deviation_h1",
]


def _weight_exponent(params) -> float:
    if isinstance(params, WeightedNormParams):
        return params.N
    n = float(params)
    if n < 0.0:
        raise ValueError("weight exponent must be nonnegative")
    return n


def l2_weighted_norm(field: SpectralField, params=0.0) -> float:
    """Weighted volume norm of a scalar field; N = 0 recovers plain L2."""
    n = _weight_exponent(params)
    s = field.grid.nodes
    weight = (1.0 + s * s) ** n
    total = 0.0
    for k in field.modes():
        total += radial_integral(s, np.abs(field.coeff(k)) ** 2 * weight, power=1).real
    return float(np.sqrt(2.0 * np.pi * total))


def h_half_boundary_norm(g: BoundaryTrace) -> float:
    """Trace norm sqrt(sum_k (|k|+1) (|g_phi,k|^2 + |g_r,k|^2))."""
    ks = np.arange(-g.K, g.K + 1)
    terms = (np.abs(ks) + 1.0) * (np.abs(g.g_phi) ** 2 + np.abs(g.g_r) ** 2)
    return float(np.sqrt(np.sum(terms)))


def h1_seminorm(solution: VelocitySolution) -> float:
    """Discrete ||grad v||_{L2}: finite differences in r, exact mode sums in angle.

    Equals the gradient energy of v - v_inf as well, since the constant far
    field has zero gradient (its frame terms cancel exactly).
    """
    s = solution.grid.nodes
    total = 0.0
    for m in solution.modes:
        dv_r = np.gradient(m.v_r, s)
        dv_phi = np.gradient(m.v_phi, s)
        # polar gradient of one Fourier mode: radial derivatives plus the
        # angular/frame terms (i k v_r - v_phi)/r and (i k v_phi + v_r)/r
        ang_r = (1j * m.k * m.v_r - m.v_phi) / s
        ang_phi = (1j * m.k * m.v_phi + m.v_r) / s
        density = np.abs(dv_r) ** 2 + np.abs(dv_phi) ** 2 + np.abs(ang_r) ** 2 + np.abs(ang_phi) ** 2
        total += radial_integral(s, density, power=1).real
    return float(np.sqrt(2.0 * np.pi * total))


def scalar_gradient_norm(field: SpectralField) -> float:
    """||grad f||_{L2} of a scalar field: |f_k'|^2 + (k/r)^2 |f_k|^2 per mode."""
    s = field.grid.nodes
    total = 0.0
    for k in field.modes():
        f = field.coeff(k)
        density = np.abs(np.gradient(f, s)) ** 2 + (k / s) ** 2 * np.abs(f) ** 2
        total += radial_integral(s, density, power=1).real
    return float(np.sqrt(2.0 * np.pi * total))


def far_field_deviation_l2(solution: VelocitySolution) -> float:
    """||v - v_inf||_{L2} over the grid span (finite only for admissible data)."""
    s = solution.grid.nodes
    total = 0.0
    for m in solution.modes:
        dev = np.abs(m.v_r - m.vinf_r) ** 2 + np.abs(m.v_phi - m.vinf_phi) ** 2
        total += radial_integral(s, dev, power=1).real
    return float(np.sqrt(2.0 * np.pi * total))


def far_field_deviation_h1(solution: VelocitySolution) -> float:
    """||v - v_inf||_{H1} = sqrt(L2 deviation^2 + gradient energy)."""
    l2 = far_field_deviation_l2(solution)
    semi = h1_seminorm(solution)
    return float(np.hypot(l2, semi))
