"""Analytic data builders and randomized admissible problem generators.

Everything here produces both a SpectralField (node samples of the per-mode
radial profiles) and a closed-form callable for the same data, so quadrature
oracles never depend on the spectral representation they are checking.
"""

from __future__ import annotations

import numpy as np

from .conformal import ConformalMap, ExteriorProblem
from .disk import DiskProblem, FarField
from .grids import BoundaryTrace, RadialGrid, SpectralField, smooth_bump
from .moments import admissibility_corrections
from .quadrature import radial_integral

__all__ = [
    "modal_field",
    "cylinder_slip_trace",
    "potential_slip_boundary_fn",
    "ellipse_potential_velocity",
    "random_mode_profiles",
    "random_admissible_problem",
    "random_admissible_exterior_problem",
]


def modal_field(grid: RadialGrid, K: int, mode_fns: dict):
    """Field from per-mode radial callables {k: f_k(s)}, plus its 2D callable.

    Conjugate mirrors are NOT added automatically; pass both k and -k for
    real-valued data.  Returns (SpectralField, fn) with fn(r, phi) vectorized.
    """
    profiles = {k: np.asarray(fn(grid.nodes), dtype=complex) for k, fn in mode_fns.items()}
    fns = dict(mode_fns)

    def fn(r, phi):
        r = np.asarray(r, dtype=float)
        phi = np.asarray(phi, dtype=float)
        out = np.zeros(np.broadcast(r, phi).shape, dtype=complex)
        for k, f in fns.items():
            out += np.asarray(f(r), dtype=complex) * np.exp(1j * k * phi)
        return out

    return SpectralField.from_modes(grid, K, profiles), fn


def cylinder_slip_trace(K: int, speed: float = 1.0) -> BoundaryTrace:
    """Tangential trace of the classical potential flow past the disk.

    g_phi(phi) = -2 v sin(phi), i.e. g_phi,1 = i v and its conjugate mirror.
    """
    return BoundaryTrace.from_coeffs(K, tangential={1: 1j * speed, -1: -1j * speed})


def potential_slip_boundary_fn(m: ConformalMap, far: FarField):
    """Boundary velocity of zero-circulation potential flow past the mapped body.

    The complex potential in the disk plane is F(z) = conj(V) z + V r0^2 / z,
    so the physical velocity is conj(F'(Phi(p)) Phi'(p)); restricted to the
    boundary it is tangential (the body is a streamline).
    """
    v = far.as_complex

    def fn(points):
        p = np.asarray(points, dtype=complex)
        z = m.forward(p)
        conj_vel = (np.conj(v) - v * m.r0**2 / (z * z)) / m.d_inverse(z)
        return np.conj(conj_vel)

    return fn


def ellipse_potential_velocity(points, c: float, r0: float, far: FarField) -> np.ndarray:
    """Classical complex-potential oracle for flow past the c-Joukowski ellipse.

    Standalone on purpose: it carries its own branch of sqrt((p-2c)(p+2c)) and
    never touches the solver's map layer.
    """
    p = np.asarray(points, dtype=complex)
    v = far.as_complex
    if c == 0.0:
        z = p
        dz_dp = np.ones_like(p)
    else:
        root = np.sqrt(p - 2.0 * c) * np.sqrt(p + 2.0 * c)
        z = 0.5 * (p + root)
        dz_dp = 0.5 * (1.0 + p / root)
    conj_vel = (np.conj(v) - v * r0**2 / (z * z)) * dz_dp
    return np.conj(conj_vel)


def _poly_bump_profile(rng, lo: float, hi: float, amplitude: complex):
    coeffs = rng.normal(size=3)

    def profile(s):
        s = np.asarray(s, dtype=float)
        t = (2.0 * s - (lo + hi)) / (hi - lo)
        return amplitude * smooth_bump(s, lo, hi) * (coeffs[0] + coeffs[1] * t + coeffs[2] * t * t)

    return profile


def random_mode_profiles(rng, K_data: int, lo: float, hi: float, scale: float = 1.0) -> dict:
    """Random smooth compactly supported modal data, conjugate-symmetric."""
    fns = {}
    for k in range(0, K_data + 1):
        if k == 0:
            amp = complex(scale * rng.normal())
        else:
            amp = scale * (rng.normal() + 1j * rng.normal()) / np.sqrt(1.0 + k)
        profile = _poly_bump_profile(rng, lo, hi, amp)
        fns[k] = profile
        if k > 0:
            fns[-k] = (lambda s, p=profile: np.conj(p(s)))
    return fns


def random_admissible_problem(
    rng,
    grid: RadialGrid,
    K: int,
    K_data: int = 8,
    K_c: int = 12,
    support: tuple = None,
    with_divergence: bool = False,
    boundary_modes: int = 0,
    far_field: FarField = FarField(),
    boundary_scale: float = 0.3,
) -> DiskProblem:
    """Random smooth compactly supported data projected onto the admissible set.

    The vorticity receives the moment corrections for all k <= K_c; the k = 0
    flux condition is balanced through g_r,0 when divergence data is present.
    Closed-form callables ride along for the quadrature oracle.
    """
    if support is None:
        span = grid.rmax - grid.r0
        support = (grid.r0 + 0.25 * span, grid.r0 + 0.75 * span)
    lo, hi = support
    K_data = min(K_data, K_c, K)

    w_fns = random_mode_profiles(rng, K_data, lo, hi)
    w_field, w_fn = modal_field(grid, K, w_fns)

    if with_divergence:
        rho_fns = random_mode_profiles(rng, K_data, lo, hi, scale=0.5)
        rho_field, rho_fn = modal_field(grid, K, rho_fns)
    else:
        rho_field, rho_fn = SpectralField.zeros(grid, K), None

    radial = {}
    tangential = {}
    for k in range(1, boundary_modes + 1):
        gr = boundary_scale * (rng.normal() + 1j * rng.normal()) / (1.0 + k)
        gp = boundary_scale * (rng.normal() + 1j * rng.normal()) / (1.0 + k)
        radial[k], radial[-k] = gr, np.conj(gr)
        tangential[k], tangential[-k] = gp, np.conj(gp)
    if with_divergence:
        # balance the flux half of the k = 0 condition, which no vorticity
        # correction can reach
        radial[0] = -radial_integral(grid.nodes, rho_field.coeff(0), power=1) / grid.r0
    g = BoundaryTrace.from_coeffs(K, radial=radial, tangential=tangential)

    corrections, _ = admissibility_corrections(w_field, rho_field, g, far_field, K_c,
                                               support=support)
    deltas = {}
    corr_fns = {}
    for k, lam in corrections.items():
        deltas[k] = lam * smooth_bump(grid.nodes, lo, hi)
        corr_fns[k] = lam
        if k > 0:
            deltas[-k] = np.conj(lam) * smooth_bump(grid.nodes, lo, hi)
            corr_fns[-k] = np.conj(lam)
    w_admissible = w_field.add_modes(deltas) if deltas else w_field

    def w_total(r, phi):
        out = np.asarray(w_fn(r, phi), dtype=complex)
        if corr_fns:
            b = smooth_bump(np.asarray(r, dtype=float), lo, hi)
            for k, lam in corr_fns.items():
                out = out + lam * b * np.exp(1j * k * np.asarray(phi))
        return out

    return DiskProblem(w_admissible, rho_field, g, far_field,
                       vorticity_fn=w_total, divergence_fn=rho_fn)


def random_admissible_exterior_problem(
    rng,
    m: ConformalMap,
    grid: RadialGrid,
    K: int,
    K_data: int = 6,
    K_c: int = 10,
    support: tuple = None,
    n_angles: int = 0,
) -> ExteriorProblem:
    """Solenoidal no-slip exterior problem whose pullback is admissible.

    The weighted disk-plane data W is built and projected exactly as in the
    disk case; the physical vorticity is then w(p) = |Phi'(p)|^2 W(Phi(p)),
    whose pullback reproduces W up to map round-trip rounding.
    """
    disk = random_admissible_problem(rng, grid, K, K_data=K_data, K_c=K_c, support=support)
    w_disk_fn = disk.vorticity_fn

    def w_fn(points):
        p = np.asarray(points, dtype=complex)
        z = m.forward(p)
        dphi = 1.0 / m.d_inverse(z)
        return np.abs(dphi) ** 2 * w_disk_fn(np.abs(z), np.angle(z))

    kwargs = {"n_angles": n_angles} if n_angles else {}
    return ExteriorProblem(m, grid, K, vorticity_fn=w_fn, **kwargs)
