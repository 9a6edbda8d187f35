"""Stream-function reduction for solenoidal no-slip flows.

With div v = 0 and g = 0 there is a stream function psi with v = (-d2, d1) psi
and Delta psi = w.  Imposing the slip form psi = const on the circle, zero
circulation around it, and psi -> v2*x1 - v1*x2 at infinity yields one radial
two-point problem per mode,

    psi_k'' + psi_k'/r - k^2 psi_k / r^2 = w_k,

solved in closed form by variation of parameters on the same quadrature
panels as the direct solver (so the two paths agree to rounding on admissible
data).  The discarded Neumann condition d(psi)/dn = 0 holds exactly when the
vorticity satisfies the no-slip orthogonality relations; neumann_defect
measures the residual slip velocity otherwise.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .disk import FarField, VelocitySolution, _mode_from_evaluator, vinf_coefficients
from .grids import RadialGrid, SpectralField, _frozen_array
from .quadrature import cumulative

__all__ = ["StreamFunction", "solve_stream", "velocity_from_stream", "neumann_defect"]


@dataclass(frozen=True)
class StreamFunction:
    """Per-mode stream profiles psi_k and their radial derivatives.

    Modes k != 0 vanish at r0 so psi is constant on the solid; the constant
    itself is gauged to zero.  psi_1 grows linearly to match the far-field
    stream r * v_phi,1^inf; all other modes decay beyond the data support.
    """

    grid: RadialGrid
    K: int
    modes: np.ndarray
    d_modes: np.ndarray
    far_field: FarField
    boundary_constant: float = 0.0
    evaluators: tuple = field(default=(), compare=False)

    def __post_init__(self):
        shape = (2 * self.K + 1, len(self.grid))
        for name in ("modes", "d_modes"):
            arr = np.array(getattr(self, name), dtype=complex)
            if arr.shape != shape:
                raise ValueError(f"{name} must have shape {shape}")
            object.__setattr__(self, name, _frozen_array(arr))

    def mode(self, k: int) -> np.ndarray:
        return self.modes[k + self.K]

    def d_mode(self, k: int) -> np.ndarray:
        return self.d_modes[k + self.K]

    def evaluate(self, k: int, r):
        """(psi_k(r), psi_k'(r)) at arbitrary radii."""
        return self.evaluators[k + self.K](np.asarray(r, dtype=float))


def _stream_mode(k: int, w_k, vphi_inf: complex, grid: RadialGrid):
    """Closed-form evaluator r -> (psi_k, psi_k') for k != 0."""
    m = abs(k)
    nodes = grid.nodes
    inner = cumulative(nodes, nodes ** (m + 1) * w_k)
    outer = cumulative(nodes, nodes ** (-m + 1) * w_k)
    r0 = grid.r0
    # decaying homogeneous coefficient from psi_k(r0) = 0
    b = (r0 ** (2 * m) / (2.0 * m)) * outer.suffix_at(r0) - r0 ** (m + 1) * vphi_inf

    def evaluate(r):
        p = inner.at(r, extend=True)
        q = outer.suffix_at(r, extend=True)
        grow = r**m
        decay = r**-m
        psi = -(grow * q + decay * p) / (2.0 * m) + b * decay + r * vphi_inf
        dpsi = -0.5 * (grow / r * q - decay / r * p) - m * b * decay / r + vphi_inf
        return psi, dpsi

    return evaluate


def solve_stream(w: SpectralField, v: FarField, warn_tolerance: float = 1e-8) -> StreamFunction:
    """Solve the exterior Poisson problem for psi, one radial problem per mode.

    Assumes the solenoidal no-slip setting (rho = 0, g = 0).  Vorticity that
    violates the orthogonality relations is solved anyway; the resulting
    Neumann defect (residual boundary slip) is reported in a warning.
    """
    grid = w.grid
    nodes = grid.nodes
    K = w.K
    shape = (2 * K + 1, len(grid))
    psi = np.zeros(shape, dtype=complex)
    dpsi = np.zeros(shape, dtype=complex)
    evaluators = [None] * (2 * K + 1)

    for k in range(-K, K + 1):
        if k == 0:
            acc = cumulative(nodes, nodes * w.coeff(0))
            dpsi0_nodes = acc.prefix / nodes
            psi0 = cumulative(nodes, dpsi0_nodes)

            def evaluate0(r, acc=acc, psi0=psi0):
                return psi0.at(r, extend=True), acc.at(r, extend=True) / r

            evaluators[K] = evaluate0
            psi[K] = psi0.prefix
            dpsi[K] = dpsi0_nodes
            total_circ = acc.total
            if abs(total_circ) > warn_tolerance:
                warnings.warn(
                    f"total vorticity circulation {abs(total_circ):.3e} is nonzero; "
                    "psi grows logarithmically and the far-field condition fails",
                    stacklevel=2,
                )
        else:
            _, vphi_inf = vinf_coefficients(v, k)
            evaluate = _stream_mode(k, w.coeff(k), vphi_inf, grid)
            evaluators[k + K] = evaluate
            psi[k + K], dpsi[k + K] = evaluate(nodes)

    out = StreamFunction(grid, K, psi, dpsi, v, 0.0, tuple(evaluators))
    defect = neumann_defect(out)
    if defect > warn_tolerance:
        warnings.warn(
            f"vorticity violates the no-slip orthogonality relations: residual "
            f"boundary slip speed {defect:.3e} in L2 on the circle",
            stacklevel=2,
        )
    return out


def velocity_from_stream(psi: StreamFunction) -> VelocitySolution:
    """Skew gradient of psi: v_r,k = -(i k / r) psi_k, v_phi,k = psi_k'."""
    modes = []
    for k in range(-psi.K, psi.K + 1):
        vinf_r, vinf_phi = vinf_coefficients(psi.far_field, k)

        def evaluator(r, k=k, ev=psi.evaluators[k + psi.K]):
            p, dp = ev(r)
            return -1j * k * p / r, dp

        modes.append(
            _mode_from_evaluator(k, psi.grid, 0.0 + 0.0j, vinf_r, vinf_phi, evaluator)
        )
    return VelocitySolution(tuple(modes), psi.far_field, psi.grid)


def neumann_defect(psi: StreamFunction) -> float:
    """L2(boundary) norm of d(psi)/dr at r0, the residual slip speed.

    Zero (to tolerance) exactly when the vorticity satisfies the no-slip
    orthogonality relations; for w = 0 against a uniform stream of speed v it
    equals the classical slip value 2 |v| sqrt(pi r0).
    """
    boundary = psi.d_modes[:, 0]
    return float(np.sqrt(2.0 * np.pi * psi.grid.r0 * np.sum(np.abs(boundary) ** 2)))
