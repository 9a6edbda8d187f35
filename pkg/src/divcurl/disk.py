"""Exact per-mode solution of the div-curl system in the exterior of a disk.

The velocity field with prescribed divergence rho, vorticity w, Dirichlet
trace g on the circle r = r0 and constant far-field v_inf is assembled mode
by mode.  For k >= 1 the radial/angular profiles are

    v_r,k(r)   = (i r^{-k-1}/2) A(r) + (i r^{k-1}/2) B(r) + i alpha_k r^{-k-1} + v_r,k^inf
    v_phi,k(r) = (  r^{-k-1}/2) A(r) - (  r^{k-1}/2) B(r) +   alpha_k r^{-k-1} + v_phi,k^inf

with A(r) the inner integral of s^{k+1} (w_k - i rho_k), B(r) the outer
integral of s^{-k+1} (w_k + i rho_k), and alpha_k = r0^{k+1} (g_phi,k - i g_r,k) / 2.
Negative modes are obtained by solving the conjugated positive-mode problem,
which for real data reduces to v_{-k} = conj(v_k).  All integrals to infinity
are exact under the compact-support contract of RadialGrid.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .grids import BoundaryTrace, RadialGrid, SpectralField, _frozen_array
from .quadrature import cumulative

__all__ = [
    "FarField",
    "ModeSolution",
    "VelocitySolution",
    "DiskProblem",
    "vinf_coefficients",
    "alpha_coefficient",
    "solve_mode",
    "solve_mode_zero",
    "solve_disk",
]


@dataclass(frozen=True)
class FarField:
    """Constant velocity (v1, v2) prescribed at infinity."""

    v1: float = 0.0
    v2: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.v1) and np.isfinite(self.v2)):
            raise ValueError("far-field velocity must be finite")

    @property
    def as_complex(self) -> complex:
        return complex(self.v1, self.v2)


def vinf_coefficients(v: FarField, k: int) -> tuple:
    """Polar-frame Fourier coefficients (v_r,k, v_phi,k) of the constant field.

    Nonzero only for |k| = 1, where v_phi,k = sign(k) * i * v_r,k.
    """
    if abs(k) != 1:
        return 0.0 + 0.0j, 0.0 + 0.0j
    vr = 0.5 * (v.v1 - 1j * k * v.v2)
    vphi = 0.5 * (v.v2 + 1j * k * v.v1)
    return vr, vphi


def alpha_coefficient(g: BoundaryTrace, r0: float, k: int) -> complex:
    """Boundary coefficient alpha_k = r0^{k+1} (g_phi,k - i g_r,k) / 2 for k >= 1."""
    if k < 1:
        raise ValueError("alpha coefficients are defined for k >= 1")
    return 0.5 * r0 ** (k + 1) * (g.coeff_phi(k) - 1j * g.coeff_r(k))


@dataclass(frozen=True, repr=False)
class ModeSolution:
    """One angular mode of the velocity field, with off-node evaluation."""

    k: int
    v_r: np.ndarray
    v_phi: np.ndarray
    alpha: complex
    vinf_r: complex
    vinf_phi: complex
    grid: RadialGrid
    profile_fn: object = field(compare=False)

    def __post_init__(self):
        object.__setattr__(self, "v_r", _frozen_array(self.v_r, dtype=complex))
        object.__setattr__(self, "v_phi", _frozen_array(self.v_phi, dtype=complex))

    def profile_at(self, r):
        """(v_r,k(r), v_phi,k(r)) at arbitrary radii inside the grid span."""
        return self.profile_fn(np.asarray(r, dtype=float))

    def __repr__(self):
        return f"ModeSolution(k={self.k}, alpha={self.alpha})"


def _mode_from_evaluator(k, grid, alpha, vinf_r, vinf_phi, evaluator) -> ModeSolution:
    v_r, v_phi = evaluator(grid.nodes)
    return ModeSolution(k, v_r, v_phi, alpha, vinf_r, vinf_phi, grid, evaluator)


def _solve_positive_mode(k, w_k, rho_k, g_r_k, g_phi_k, vinf_r_k, vinf_phi_k, grid):
    nodes = grid.nodes
    inner = cumulative(nodes, nodes ** (k + 1) * (w_k - 1j * rho_k))
    outer = cumulative(nodes, nodes ** (-k + 1) * (w_k + 1j * rho_k))
    alpha = 0.5 * grid.r0 ** (k + 1) * (g_phi_k - 1j * g_r_k)

    def evaluator(r):
        a = inner.at(r, extend=True)
        b = outer.suffix_at(r, extend=True)
        decay = r ** (-k - 1)
        grow = r ** (k - 1)
        v_r = 0.5j * decay * a + 0.5j * grow * b + 1j * alpha * decay + vinf_r_k
        v_phi = 0.5 * decay * a - 0.5 * grow * b + alpha * decay + vinf_phi_k
        return v_r, v_phi

    return _mode_from_evaluator(k, grid, alpha, vinf_r_k, vinf_phi_k, evaluator)


def solve_mode(k: int, w_k, rho_k, g: BoundaryTrace, v: FarField, grid: RadialGrid) -> ModeSolution:
    """Solve one mode k >= 1.

    The formulas are evaluated whether or not the data satisfies the moment
    condition for this k; compatibility is reported separately.
    """
    if k < 1:
        raise ValueError("solve_mode handles k >= 1; use solve_mode_zero for k = 0")
    w_k = np.asarray(w_k, dtype=complex)
    rho_k = np.asarray(rho_k, dtype=complex)
    if w_k.shape != grid.nodes.shape or rho_k.shape != grid.nodes.shape:
        raise ValueError("mode profiles must be sampled at every grid node")
    vinf_r, vinf_phi = vinf_coefficients(v, k)
    return _solve_positive_mode(
        k, w_k, rho_k, g.coeff_r(k), g.coeff_phi(k), vinf_r, vinf_phi, grid
    )


def solve_mode_zero(w_0, rho_0, g: BoundaryTrace, grid: RadialGrid) -> ModeSolution:
    """Angle-independent mode: radial part from rho, azimuthal part from w.

    v_r,0(r) = (1/r) int_{r0}^r s rho_0 ds + r0 g_r,0 / r, and the analogous
    formula with w and g_phi,0 for v_phi,0.  The r0 factor on the trace terms
    makes the Dirichlet condition exact for any inner radius.
    """
    nodes = grid.nodes
    w_0 = np.asarray(w_0, dtype=complex)
    rho_0 = np.asarray(rho_0, dtype=complex)
    if w_0.shape != nodes.shape or rho_0.shape != nodes.shape:
        raise ValueError("mode profiles must be sampled at every grid node")
    acc_rho = cumulative(nodes, nodes * rho_0)
    acc_w = cumulative(nodes, nodes * w_0)
    r0 = grid.r0
    c_r = r0 * g.coeff_r(0)
    c_phi = r0 * g.coeff_phi(0)

    def evaluator(r):
        v_r = (acc_rho.at(r, extend=True) + c_r) / r
        v_phi = (acc_w.at(r, extend=True) + c_phi) / r
        return v_r, v_phi

    return _mode_from_evaluator(0, grid, 0.0 + 0.0j, 0.0 + 0.0j, 0.0 + 0.0j, evaluator)


def _solve_negative_mode(k, w_k, rho_k, g: BoundaryTrace, v: FarField, grid):
    """Mode k <= -1 via conjugation: conj(v) of mode -k with conjugated data."""
    m = -k
    vinf_r_m, vinf_phi_m = vinf_coefficients(v, m)
    mirrored = _solve_positive_mode(
        m,
        np.conj(np.asarray(w_k, dtype=complex)),
        np.conj(np.asarray(rho_k, dtype=complex)),
        np.conj(g.coeff_r(k)),
        np.conj(g.coeff_phi(k)),
        vinf_r_m,
        vinf_phi_m,
        grid,
    )

    def evaluator(r):
        v_r, v_phi = mirrored.profile_at(r)
        return np.conj(v_r), np.conj(v_phi)

    vinf_r, vinf_phi = vinf_coefficients(v, k)
    return _mode_from_evaluator(k, grid, np.conj(mirrored.alpha), vinf_r, vinf_phi, evaluator)


@dataclass(frozen=True)
class DiskProblem:
    """Div-curl data on the exterior of the disk r >= r0.

    vorticity/divergence are spectral fields on a shared grid; the boundary
    trace is padded to the field band if narrower.  Optional callables
    vorticity_fn(r, phi) and divergence_fn(r, phi) give the same data in
    closed form for quadrature oracles.
    """

    vorticity: SpectralField
    divergence: SpectralField
    boundary: BoundaryTrace
    far_field: FarField = FarField()
    vorticity_fn: object = field(default=None, compare=False)
    divergence_fn: object = field(default=None, compare=False)

    def __post_init__(self):
        if self.vorticity.grid is not self.divergence.grid and not np.array_equal(
            self.vorticity.grid.nodes, self.divergence.grid.nodes
        ):
            raise ValueError("vorticity and divergence must share the radial grid")
        if self.vorticity.K != self.divergence.K:
            raise ValueError("vorticity and divergence must share the mode band")
        if self.boundary.K > self.vorticity.K:
            raise ValueError("boundary trace band exceeds the field band")
        if self.boundary.K < self.vorticity.K:
            object.__setattr__(self, "boundary", self.boundary.padded(self.vorticity.K))

    @property
    def grid(self) -> RadialGrid:
        return self.vorticity.grid

    @property
    def K(self) -> int:
        return self.vorticity.K


@dataclass(frozen=True)
class VelocitySolution:
    """Assembled velocity field: one ModeSolution per k in [-K, K]."""

    modes: tuple
    far_field: FarField
    grid: RadialGrid
    report: object = field(default=None, compare=False)

    @property
    def K(self) -> int:
        return (len(self.modes) - 1) // 2

    def mode(self, k: int) -> ModeSolution:
        if abs(k) > self.K:
            raise ValueError(f"mode {k} outside |k| <= {self.K}")
        return self.modes[k + self.K]

    def profiles(self):
        """Node-value matrices (v_r, v_phi), shape (2K+1, len(grid))."""
        v_r = np.stack([m.v_r for m in self.modes])
        v_phi = np.stack([m.v_phi for m in self.modes])
        return v_r, v_phi

    def sample_polar(self, r, phi):
        """(v_r, v_phi) mode sums at matching arrays of radii and angles."""
        r = np.asarray(r, dtype=float)
        phi = np.asarray(phi, dtype=float)
        r, phi = np.broadcast_arrays(r, phi)
        v_r = np.zeros(r.shape, dtype=complex)
        v_phi = np.zeros(r.shape, dtype=complex)
        for m in self.modes:
            phase = np.exp(1j * m.k * phi)
            mr, mphi = m.profile_at(r)
            v_r += mr * phase
            v_phi += mphi * phase
        return v_r, v_phi

    def sample(self, points) -> np.ndarray:
        """Cartesian velocity v1 + i v2 at complex points (real-valued fields)."""
        points = np.asarray(points, dtype=complex)
        r = np.abs(points)
        phi = np.angle(points)
        v_r, v_phi = self.sample_polar(r, phi)
        return (v_r + 1j * v_phi) * np.exp(1j * phi)

    def boundary_trace(self) -> BoundaryTrace:
        g_r = np.array([m.v_r[0] for m in self.modes])
        g_phi = np.array([m.v_phi[0] for m in self.modes])
        return BoundaryTrace(self.K, g_r, g_phi)


def solve_disk(problem: DiskProblem, warn_tolerance: float = 1e-8) -> VelocitySolution:
    """Solve all modes |k| <= K and attach the compatibility report.

    Incompatible data is solved anyway: the formulas stay evaluable and the
    report quantifies how badly the boundary condition is violated, so the
    solver warns instead of refusing.
    """
    from .moments import moment_report

    grid = problem.grid
    w, rho, g, far = problem.vorticity, problem.divergence, problem.boundary, problem.far_field
    support_scale = max(
        float(np.max(np.abs(w.coeffs))), float(np.max(np.abs(rho.coeffs))), 1e-300
    )
    edge = max(float(np.max(np.abs(w.coeffs[:, -1]))), float(np.max(np.abs(rho.coeffs[:, -1]))))
    if edge > 1e-12 * support_scale:
        warnings.warn(
            "data is nonzero at the truncation radius rmax; integrals to infinity "
            "are truncated there (compact-support contract violated)",
            stacklevel=2,
        )

    modes = []
    for k in range(-problem.K, problem.K + 1):
        if k == 0:
            modes.append(solve_mode_zero(w.coeff(0), rho.coeff(0), g, grid))
        elif k > 0:
            modes.append(solve_mode(k, w.coeff(k), rho.coeff(k), g, far, grid))
        else:
            modes.append(_solve_negative_mode(k, w.coeff(k), rho.coeff(k), g, far, grid))

    report = moment_report(problem, tolerance=warn_tolerance)
    if not report.admissible:
        warnings.warn(
            f"data violates the moment conditions (max residual "
            f"{report.max_residual:.3e}, circulation/flux {abs(report.circulation):.3e}); "
            "the computed field will not match the boundary trace and may carry an "
            "infinite-energy 1/r tail",
            stacklevel=2,
        )
    return VelocitySolution(tuple(modes), far, grid, report)
