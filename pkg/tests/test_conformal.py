import numpy as np
import pytest

from divcurl.conformal import (
    ConformalMap,
    ExteriorProblem,
    MapVerificationError,
    identity_map,
    joukowski_map,
    mapped_moment_residual,
    pullback_boundary_trace,
    pullback_problem,
    pushforward_velocity,
    solve_exterior,
    verify_map,
)
from divcurl.disk import DiskProblem, FarField, solve_disk
from divcurl.grids import (
    BoundaryTrace,
    RadialGrid,
    SpectralField,
    analyze,
    equispaced_angles,
    smooth_bump,
)
from divcurl.moments import moment_residual
from divcurl.presets import (
    ellipse_potential_velocity,
    potential_slip_boundary_fn,
    random_admissible_exterior_problem,
    random_admissible_problem,
)
from divcurl.quadrature import radial_integral

from helpers import observed_order


def test_joukowski_point_values():
    m = joukowski_map(0.5, 1.0)
    assert abs(m.inverse(1.0 + 0j) - 1.25) < 1e-15
    assert abs(m.d_inverse(1.0 + 0j) - 0.75) < 1e-15


def test_joukowski_identity_case():
    m = joukowski_map(0.0, 1.0)
    z = np.array([1.3 + 0.2j, -2.0 + 1.0j])
    assert np.array_equal(m.forward(z), z)
    assert np.array_equal(m.inverse(z), z)
    assert np.all(m.d_inverse(z) == 1.0)


def test_joukowski_parameter_validation():
    with pytest.raises(ValueError):
        joukowski_map(1.5, 1.0)
    with pytest.raises(ValueError):
        joukowski_map(-0.1, 1.0)
    # segment limit c = r0 is allowed
    verify_map(joukowski_map(1.0, 1.0))


def test_joukowski_branch_round_trip():
    m = joukowski_map(0.5, 1.0)
    angles = equispaced_angles(64)
    for radius in (1.0, 2.0, 10.0):
        z = radius * np.exp(1j * angles)
        assert np.max(np.abs(m.forward(m.inverse(z)) - z)) < 1e-12 * radius


def test_verify_map_rejects_bad_asymptotics():
    bad = ConformalMap(
        forward=lambda z: np.asarray(z, dtype=complex),
        inverse=lambda z: np.asarray(z, dtype=complex) + 0.3,  # O(1) shift, not O(1/z)
        d_inverse=lambda z: np.ones_like(np.asarray(z, dtype=complex)),
        r0=1.0,
    )
    with pytest.raises(MapVerificationError):
        verify_map(bad)


def test_cauchy_riemann_derivative_consistency():
    # central differences of the inverse map converge to d_inverse at order 2
    m = joukowski_map(0.5, 1.0)
    z = np.array([1.5 + 0.8j, 2.0 - 1.0j, -1.2 + 2.2j])
    errors = []
    for h in (1e-2, 5e-3, 2.5e-3):
        fd = (m.inverse(z + h) - m.inverse(z - h)) / (2.0 * h)
        errors.append(np.max(np.abs(fd - m.d_inverse(z))))
    assert observed_order(errors) >= 1.9


@pytest.fixture
def grid():
    return RadialGrid.uniform(1.0, 8.0, 801)


def test_pullback_identity_map(grid):
    K = 5
    rng = np.random.default_rng(0)
    profile = smooth_bump(grid.nodes, 2.0, 5.0)

    def w_fn(points):
        p = np.asarray(points, dtype=complex)
        return profile_interp(p) * np.cos(2.0 * np.angle(p))

    def profile_interp(p):
        return np.interp(np.abs(p), grid.nodes, profile)

    ext = ExteriorProblem(identity_map(1.0), grid, K, vorticity_fn=w_fn)
    pulled = pullback_problem(ext)
    angles = equispaced_angles(ext.n_angles)
    rr, pp = np.meshgrid(grid.nodes, angles, indexing="ij")
    direct = analyze(grid, w_fn(rr * np.exp(1j * pp)), K)
    assert np.max(np.abs(pulled.q.coeffs - direct.coeffs)) < 1e-15
    assert np.max(np.abs(pulled.rc.coeffs)) == 0.0
    assert np.max(np.abs(pulled.g_hat.g_r)) == 0.0


def test_change_of_variables_mass_identity():
    # integral of w over Omega equals integral of the weighted pullback over
    # the disk exterior; left side by independent 2D midpoint quadrature in Omega
    c, r0 = 0.5, 1.0
    m = joukowski_map(c, r0)
    grid = RadialGrid.uniform(r0, 8.0, 1201)

    def w_fn(points):
        p = np.asarray(points, dtype=complex)
        d = np.abs(p - 3.0)
        return np.exp(-2.0 * d * d)

    ext = ExteriorProblem(m, grid, 8, vorticity_fn=w_fn)
    pulled = pullback_problem(ext)
    rhs = 2.0 * np.pi * radial_integral(grid.nodes, pulled.q.coeff(0), power=1).real

    # physical-plane quadrature on a box that contains the support, masking
    # the interior of the ellipse
    xs = np.linspace(-6.0, 8.0, 1400)
    ys = np.linspace(-6.0, 6.0, 1200)
    dx = xs[1] - xs[0]
    dy = ys[1] - ys[0]
    xc = 0.5 * (xs[:-1] + xs[1:])
    yc = 0.5 * (ys[:-1] + ys[1:])
    xx, yy = np.meshgrid(xc, yc, indexing="ij")
    pts = xx + 1j * yy
    outside = np.abs(m.forward(pts)) >= r0
    lhs = float(np.sum(w_fn(pts) * outside) * dx * dy)
    assert abs(lhs - rhs) < 2e-4 * abs(rhs)


def test_pullback_boundary_oracle_refinement():
    # tangential unit field on the ellipse: ghat_phi = |(Phi^-1)'| on the circle;
    # compare a coarse analysis against a 10x-resolution quadrature oracle
    c, r0 = 0.5, 1.0
    m = joukowski_map(c, r0)

    def tangent_fn(points):
        p = np.asarray(points, dtype=complex)
        z = m.forward(p)
        tangent = 1j * z * m.d_inverse(z)
        return tangent / np.abs(tangent)

    K = 8
    coarse = pullback_boundary_trace(m, tangent_fn, K, 64)
    fine = pullback_boundary_trace(m, tangent_fn, K, 640)
    assert np.max(np.abs(coarse.g_r - fine.g_r)) < 1e-12
    assert np.max(np.abs(coarse.g_phi - fine.g_phi)) < 1e-12
    # closed-form structure: g_r = 0 and g_phi(theta) = |(Phi^-1)'(r0 e^{i theta})|;
    # its band coefficients from a 10x-resolution DFT oracle
    assert np.max(np.abs(fine.g_r)) < 1e-12
    theta = equispaced_angles(640)
    exact_gphi = np.abs(m.d_inverse(r0 * np.exp(1j * theta)))
    oracle = np.fft.fft(exact_gphi) / theta.size
    ks = np.arange(-K, K + 1)
    assert np.max(np.abs(fine.g_phi - oracle[ks % theta.size])) < 1e-12


def test_pushforward_identity_passthrough(grid):
    rng = np.random.default_rng(1)
    problem = random_admissible_problem(rng, grid, K=5, K_data=3, K_c=5)
    solution = solve_disk(problem)
    points = np.array([1.5 + 0.5j, -2.0 + 3.0j])
    assert np.array_equal(pushforward_velocity(solution, identity_map(1.0), points),
                          solution.sample(points))


def test_pushforward_marks_interior_points(grid):
    w = SpectralField.zeros(grid, 2)
    with pytest.warns(UserWarning, match="moment conditions"):
        solution = solve_disk(DiskProblem(w, w, BoundaryTrace.zeros(2), FarField(1.0, 0.0)))
    m = joukowski_map(0.5, 1.0)
    # the origin is inside the ellipse
    out = pushforward_velocity(solution, m, np.array([0.0 + 0.0j, 5.0 + 0.0j]))
    assert np.isnan(out[0].real) and np.isnan(out[0].imag)
    assert np.isfinite(out[1].real)


def test_pushforward_far_field_invariance(grid):
    far = FarField(1.0, -0.5)
    m = joukowski_map(0.5, 1.0)
    ext = ExteriorProblem(m, grid, 4,
                          boundary_fn=potential_slip_boundary_fn(m, far), far_field=far)
    solution = solve_exterior(ext)
    big = np.array([300.0 + 0j, 250j, -200.0 + 100j])
    assert np.max(np.abs(solution.sample(big) - far.as_complex)) < 1e-4


def test_ellipse_potential_flow_against_classical_oracle():
    c, r0 = 0.5, 1.0
    m = joukowski_map(c, r0)
    far = FarField(1.0, 0.0)
    grid = RadialGrid.uniform(r0, 10.0, 301)
    ext = ExteriorProblem(m, grid, 4,
                          boundary_fn=potential_slip_boundary_fn(m, far), far_field=far)
    solution = solve_exterior(ext)
    assert solution.report.admissible

    rng = np.random.default_rng(2)
    pts = []
    while len(pts) < 100:
        p = complex(rng.uniform(-7, 7), rng.uniform(-7, 7))
        if 1.05 < abs(m.forward(p)) < 9.0:
            pts.append(p)
    pts = np.array(pts)
    v_exact = ellipse_potential_velocity(pts, c, r0, far)
    err = np.max(np.abs(solution.sample(pts) - v_exact)) / np.max(np.abs(v_exact))
    assert err < 1e-6


def test_exterior_solution_reproduces_physical_boundary_trace():
    # the velocity restricted to the ellipse boundary equals the supplied g
    c, r0 = 0.5, 1.0
    m = joukowski_map(c, r0)
    far = FarField(1.0, -0.4)
    grid = RadialGrid.uniform(r0, 10.0, 301)
    boundary_fn = potential_slip_boundary_fn(m, far)
    ext = ExteriorProblem(m, grid, 4, boundary_fn=boundary_fn, far_field=far)
    solution = solve_exterior(ext)
    theta = np.linspace(0.1, 2.0 * np.pi, 17)
    got = solution.boundary_samples(theta)
    expected = boundary_fn(m.inverse(r0 * np.exp(1j * theta)))
    assert np.max(np.abs(got - expected)) < 1e-12 * np.max(np.abs(expected))


def test_identity_map_reduction_matches_disk_path(grid):
    K = 6
    rng = np.random.default_rng(3)
    disk_problem = random_admissible_problem(rng, grid, K=K, K_data=4, K_c=6)
    w_fn = disk_problem.vorticity_fn

    ext = ExteriorProblem(identity_map(1.0), grid, K,
                          vorticity_fn=lambda p: w_fn(np.abs(p), np.angle(p)))
    angles = equispaced_angles(ext.n_angles)
    rr, pp = np.meshgrid(grid.nodes, angles, indexing="ij")
    resampled = analyze(grid, w_fn(rr, pp), K)
    disk_resampled = DiskProblem(resampled, SpectralField.zeros(grid, K),
                                 BoundaryTrace.zeros(K))
    sol_disk = solve_disk(disk_resampled)
    sol_ext = solve_exterior(ext)
    points = np.array([1.5 + 0.2j, -3.0 + 1.0j, 2.0 - 4.0j, 6.0 + 0.5j])
    a = sol_disk.sample(points)
    b = sol_ext.sample(points)
    # identical pipeline up to the rounding of the resampled data lattice
    assert np.max(np.abs(a - b)) < 1e-13 * max(1.0, np.max(np.abs(a)))


def test_mapped_moment_residual_identity_reduction(grid):
    K = 5
    rng = np.random.default_rng(4)
    disk_problem = random_admissible_problem(rng, grid, K=K, K_data=3, K_c=2)
    w_fn = disk_problem.vorticity_fn
    ext = ExteriorProblem(identity_map(1.0), grid, K,
                          vorticity_fn=lambda p: w_fn(np.abs(p), np.angle(p)))
    pulled = pullback_problem(ext)
    disk_version = DiskProblem(pulled.q, pulled.rc, pulled.g_hat)
    for k in range(1, K + 1):
        assert abs(mapped_moment_residual(k, ext, pulled)
                   - moment_residual(k, disk_version)) < 1e-15


def test_mapped_moment_residual_far_field_violation(grid):
    far = FarField(2.0, 0.0)
    for m in (identity_map(1.0), joukowski_map(0.5, 1.0)):
        ext = ExteriorProblem(m, grid, 4, far_field=far)
        assert abs(mapped_moment_residual(1, ext) + 2.0j) < 1e-14
        for k in (2, 3):
            assert abs(mapped_moment_residual(k, ext)) < 1e-14


def test_mapped_residuals_after_projection():
    c, r0 = 0.5, 1.0
    m = joukowski_map(c, r0)
    grid = RadialGrid.uniform(r0, 8.0, 1001)
    rng = np.random.default_rng(5)
    ext = random_admissible_exterior_problem(rng, m, grid, K=8, K_data=5, K_c=8,
                                             support=(1.6, 4.5))
    pulled = pullback_problem(ext)
    for k in range(1, 9):
        assert abs(mapped_moment_residual(k, ext, pulled)) < 1e-8


def test_physical_field_satisfies_original_system():
    # end to end: finite differences of the pushed-forward velocity recover
    # the physical vorticity (and zero divergence) on the ellipse exterior
    m = joukowski_map(0.5, 1.0)
    grid = RadialGrid.uniform(1.0, 8.0, 4001)
    rng = np.random.default_rng(8)
    ext = random_admissible_exterior_problem(rng, m, grid, K=6, K_data=4, K_c=6,
                                             support=(1.8, 4.0))
    solution = solve_exterior(ext)
    probes = m.inverse(np.array([2.2 * np.exp(0.4j), 2.9 * np.exp(2.0j),
                                 3.4 * np.exp(-1.1j)]))
    from helpers import fd_div_curl

    div, curl = fd_div_curl(solution.sample, probes, 1e-3)
    w_exact = ext.vorticity_fn(probes).real
    scale = np.max(np.abs(w_exact))
    assert np.max(np.abs(curl - w_exact)) < 1e-4 * scale
    assert np.max(np.abs(div)) < 1e-4 * scale


def test_divcurl_transformation_law_by_finite_differences():
    # curl of the disk-plane field equals the Jacobian-weighted vorticity
    c, r0 = 0.5, 1.0
    m = joukowski_map(c, r0)
    rng = np.random.default_rng(6)
    errors = []
    probe = np.array([2.1 * np.exp(0.5j), 2.6 * np.exp(2.2j), 3.2 * np.exp(-1.4j)])
    for nodes, h in ((1001, 2e-2), (2001, 1e-2), (4001, 5e-3)):
        grid = RadialGrid.uniform(r0, 8.0, nodes)
        ext = random_admissible_exterior_problem(rng, m, grid, K=6, K_data=4, K_c=6,
                                                 support=(1.7, 4.0))
        pulled = pullback_problem(ext)
        solution = solve_disk(pulled.as_disk_problem())
        from helpers import fd_div_curl

        div, curl = fd_div_curl(solution.sample, probe, h)
        expected = pulled.q_fn(np.abs(probe), np.angle(probe)).real
        errors.append(np.max(np.abs(curl - expected)) + np.max(np.abs(div)))
        rng = np.random.default_rng(6)  # same data at every resolution
    assert observed_order(errors) >= 1.9
