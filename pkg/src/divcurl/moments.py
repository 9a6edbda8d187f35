"""Solvability moment conditions and the admissibility projection.

For k >= 1 the data must satisfy

    r0^{k-1} int_{r0}^inf s^{-k+1} (w_k + i rho_k) ds + g_phi,k + i g_r,k
        = v_phi,k^inf + i v_r,k^inf,

and at k = 0 the circulation and flux around the solid must vanish:

    int w dx + circ(g) = 0,   int rho dx + flux(g) = 0,

reported combined as 2*pi*[(int s w_0 ds + r0 g_phi,0) + i (int s rho_0 ds + r0 g_r,0)].
Residuals are oriented left minus right, so a pure far-field violation at
k = 1 reports -(v_phi,1^inf + i v_r,1^inf).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .disk import DiskProblem, FarField, vinf_coefficients
from .grids import BoundaryTrace, SpectralField, _frozen_array, smooth_bump
from .quadrature import radial_integral

__all__ = [
    "MomentReport",
    "moment_residual",
    "circulation_flux_residual",
    "no_slip_orthogonality",
    "moment_report",
    "make_admissible",
    "admissibility_corrections",
]


@dataclass(frozen=True)
class MomentReport:
    """Per-mode moment residuals plus the combined circulation/flux residual.

    residuals[k] holds the mode-k residual for k = 1..K; index 0 is kept at
    zero because the k = 0 condition is the separate circulation/flux entry.
    """

    residuals: np.ndarray
    circulation: complex
    tolerance: float

    def __post_init__(self):
        object.__setattr__(self, "residuals", _frozen_array(self.residuals, dtype=complex))

    @property
    def max_residual(self) -> float:
        return float(np.max(np.abs(self.residuals))) if self.residuals.size else 0.0

    @property
    def admissible(self) -> bool:
        return self.max_residual <= self.tolerance and abs(self.circulation) <= self.tolerance

    def to_text(self) -> str:
        lines = ["k,residual_re,residual_im,residual_abs"]
        for k in range(1, self.residuals.size):
            res = self.residuals[k]
            lines.append(f"{k},{res.real:.17g},{res.imag:.17g},{abs(res):.17g}")
        c = self.circulation
        lines.append(f"circulation_flux,{c.real:.17g},{c.imag:.17g},{abs(c):.17g}")
        lines.append(f"tolerance,{self.tolerance:.17g}")
        lines.append(f"admissible,{str(self.admissible).lower()}")
        return "\n".join(lines) + "\n"


def _weighted_moment(grid, w_k, rho_k, k: int) -> complex:
    integral = radial_integral(grid.nodes, np.asarray(w_k) + 1j * np.asarray(rho_k), power=-k + 1)
    return grid.r0 ** (k - 1) * integral


def moment_residual(k: int, problem: DiskProblem) -> complex:
    """Left minus right of the mode-k solvability condition, k >= 1."""
    if k < 1:
        raise ValueError("moment conditions are indexed by k >= 1; "
                         "k = 0 is circulation_flux_residual")
    if k > problem.K:
        raise ValueError(f"mode {k} outside the resolved band K = {problem.K}")
    g = problem.boundary
    vr, vphi = vinf_coefficients(problem.far_field, k)
    lhs = _weighted_moment(problem.grid, problem.vorticity.coeff(k), problem.divergence.coeff(k), k)
    lhs += g.coeff_phi(k) + 1j * g.coeff_r(k)
    return lhs - (vphi + 1j * vr)


def circulation_flux_residual(problem: DiskProblem) -> complex:
    """Combined circulation + i*flux residual of the k = 0 conditions."""
    grid = problem.grid
    g = problem.boundary
    circ = radial_integral(grid.nodes, problem.vorticity.coeff(0), power=1) + grid.r0 * g.coeff_phi(0)
    flux = radial_integral(grid.nodes, problem.divergence.coeff(0), power=1) + grid.r0 * g.coeff_r(0)
    return 2.0 * np.pi * (circ + 1j * flux)


def no_slip_orthogonality(k: int, w: SpectralField, rho: SpectralField, v: FarField) -> complex:
    """Residual of the no-slip (g = 0) orthogonality relation for mode k >= 1."""
    problem = DiskProblem(w, rho, BoundaryTrace.zeros(w.K), v)
    return moment_residual(k, problem)


def moment_report(problem: DiskProblem, K: int = None, tolerance: float = 1e-8) -> MomentReport:
    K = problem.K if K is None else K
    residuals = np.zeros(K + 1, dtype=complex)
    for k in range(1, K + 1):
        residuals[k] = moment_residual(k, problem)
    return MomentReport(residuals, circulation_flux_residual(problem), tolerance)


def _default_support(grid):
    span = grid.rmax - grid.r0
    return grid.r0 + span / 3.0, grid.r0 + 2.0 * span / 3.0


def admissibility_corrections(
    w: SpectralField,
    rho: SpectralField,
    g: BoundaryTrace,
    v: FarField,
    K_c: int,
    support: tuple = None,
    skip_below: float = 1e-14,
) -> tuple:
    """Per-mode scales lambda_k and the shared bump profile that zero the residuals.

    Returns (corrections, bump_nodes) where corrections maps k >= 0 to the
    complex scale of the bump added to mode k (and conj to mode -k).  Modes
    whose residual is already below skip_below (relative to the data scale)
    are left untouched, which makes the projection idempotent.
    """
    if K_c > w.K:
        raise ValueError("K_c exceeds the resolved band of the field")
    grid = w.grid
    lo, hi = support if support is not None else _default_support(grid)
    bump = smooth_bump(grid.nodes, lo, hi)
    problem = DiskProblem(w, rho, g, v)
    scale = max(
        float(np.max(np.abs(w.coeffs))),
        float(np.max(np.abs(rho.coeffs))),
        float(np.max(np.abs(g.g_r))),
        float(np.max(np.abs(g.g_phi))),
        abs(v.as_complex),
        1.0,
    )

    corrections = {}
    flux = circulation_flux_residual(problem).imag / (2.0 * np.pi)
    if abs(flux) > skip_below * scale:
        warnings.warn(
            f"flux residual {flux:.3e} depends only on (rho, g_r) and cannot be "
            "removed by a vorticity correction; fix the divergence data or the "
            "radial trace",
            stacklevel=2,
        )

    circ = circulation_flux_residual(problem).real / (2.0 * np.pi)
    if abs(circ) > skip_below * scale:
        m0 = radial_integral(grid.nodes, bump, power=1).real
        if abs(m0) < 1e-14:
            raise ValueError("bump profile has zero circulation moment; choose another support")
        corrections[0] = complex(-circ / m0)

    for k in range(1, K_c + 1):
        res = moment_residual(k, problem)
        if abs(res) <= skip_below * scale:
            continue
        m_k = _weighted_moment(grid, bump, np.zeros_like(bump), k)
        if abs(m_k) < 1e-14 * max(1.0, float(np.max(bump))):
            raise ValueError(
                f"bump profile has numerically zero moment for mode {k}; "
                "choose a support where s^{-k+1} does not cancel it"
            )
        corrections[k] = -res / m_k
    return corrections, bump


def make_admissible(
    w: SpectralField,
    rho: SpectralField,
    g: BoundaryTrace,
    v: FarField,
    K_c: int,
    support: tuple = None,
) -> SpectralField:
    """Project the vorticity onto the data satisfying the moment conditions k <= K_c.

    One smooth compactly supported bump per offending mode, scaled in closed
    form; modes with vanishing residual are untouched.  Conjugate mirrors keep
    real-valued fields real.  Only w is modified: the flux half of the k = 0
    condition involves (rho, g_r) alone and is the caller's responsibility.
    """
    corrections, bump = admissibility_corrections(w, rho, g, v, K_c, support)
    deltas = {}
    for k, lam in corrections.items():
        deltas[k] = lam * bump
        if k > 0:
            deltas[-k] = np.conj(lam) * bump
    return w.add_modes(deltas) if deltas else w
