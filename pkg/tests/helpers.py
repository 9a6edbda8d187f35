"""Independent reference computations used by the tests.

Everything here deliberately avoids the package's solver path: brute-force
nested quadrature of the mode formulas, finite-difference operators, and
closed-form classical flows.
"""

import numpy as np


def brute_force_mode_profiles(k, w_fn, rho_fn, alpha, vinf_r, vinf_phi, r0, rmax, targets,
                              n_fine=20001):
    """Direct nested-trapezoid evaluation of the mode-k velocity profiles.

    Integrates s^{k+1}(w - i rho) from r0 to r and s^{-k+1}(w + i rho) from r
    to rmax on a fine uniform grid for every target radius separately.
    """
    s = np.linspace(r0, rmax, n_fine)
    w = np.asarray(w_fn(s), dtype=complex)
    rho = np.asarray(rho_fn(s), dtype=complex)
    inner_density = s ** (k + 1) * (w - 1j * rho)
    outer_density = s ** (-k + 1) * (w + 1j * rho)

    def prefix_to(density, r):
        idx = int(np.searchsorted(s, r, side="right")) - 1
        acc = np.trapezoid(density[: idx + 1], s[: idx + 1]) if idx >= 1 else 0.0
        if idx < n_fine - 1 and s[idx] < r:
            frac = (r - s[idx]) / (s[idx + 1] - s[idx])
            f_at = density[idx] + (density[idx + 1] - density[idx]) * frac
            acc += 0.5 * (r - s[idx]) * (density[idx] + f_at)
        return acc

    outer_total = np.trapezoid(outer_density, s)
    v_r = np.empty(len(targets), dtype=complex)
    v_phi = np.empty(len(targets), dtype=complex)
    for i, r in enumerate(targets):
        a = prefix_to(inner_density, r)
        b = outer_total - prefix_to(outer_density, r)
        decay = r ** (-k - 1)
        grow = r ** (k - 1)
        v_r[i] = 0.5j * decay * a + 0.5j * grow * b + 1j * alpha * decay + vinf_r
        v_phi[i] = 0.5 * decay * a - 0.5 * grow * b + alpha * decay + vinf_phi
    return v_r, v_phi


def fd_div_curl(sample, points, h):
    """Central-difference divergence and curl of a complex-packed field."""
    vxp = sample(points + h)
    vxm = sample(points - h)
    vyp = sample(points + 1j * h)
    vym = sample(points - 1j * h)
    div = (vxp.real - vxm.real) / (2 * h) + (vyp.imag - vym.imag) / (2 * h)
    curl = (vxp.imag - vxm.imag) / (2 * h) - (vyp.real - vym.real) / (2 * h)
    return div, curl


def cylinder_flow(points, r0=1.0, speed=1.0):
    """Classical zero-circulation potential flow past the disk, v1 + i v2."""
    z = np.asarray(points, dtype=complex)
    return np.conj(speed * (1.0 - r0**2 / (z * z)))


def cylinder_flow_polar(r, phi, r0=1.0, speed=1.0):
    v_r = speed * np.cos(phi) * (1.0 - r0**2 / r**2)
    v_phi = -speed * np.sin(phi) * (1.0 + r0**2 / r**2)
    return v_r, v_phi


def observed_order(errors):
    """Mean convergence order across a refinement-by-two ladder."""
    errors = np.asarray(errors, dtype=float)
    return float(np.log2(errors[0] / errors[-1]) / (len(errors) - 1))
