import numpy as np
import pytest

from divcurl.biot_savart import KernelPoint, biot_savart_disk, biot_savart_omega, green_function
from divcurl.conformal import ExteriorProblem, identity_map, joukowski_map
from divcurl.disk import DiskProblem, FarField, solve_disk
from divcurl.grids import BoundaryTrace, RadialGrid, SpectralField, smooth_bump
from divcurl.presets import (
    cylinder_slip_trace,
    ellipse_potential_velocity,
    potential_slip_boundary_fn,
    random_admissible_exterior_problem,
    random_admissible_problem,
)

from helpers import cylinder_flow


def test_green_function_values():
    assert green_function(0.0 + 0j, 1.0 + 0j) == 0.0
    assert abs(green_function(0.0 + 0j, complex(np.e, 0.0)) - 1.0 / (2.0 * np.pi)) < 1e-15
    with pytest.raises(ValueError):
        green_function(1.0 + 0j, 1.0 + 0j)


def test_green_function_symmetry():
    rng = np.random.default_rng(0)
    m = joukowski_map(0.4, 1.0)
    for _ in range(100):
        x = complex(rng.uniform(-6, 6), rng.uniform(-6, 6))
        y = complex(rng.uniform(-6, 6), rng.uniform(-6, 6))
        if x == y:
            continue
        assert green_function(x, y) == green_function(y, x)
        if min(abs(m.forward(x)), abs(m.forward(y))) > 1.01:
            assert abs(green_function(x, y, m) - green_function(y, x, m)) < 1e-15


def test_green_function_gradient_matches_kernel():
    x = 1.7 + 0.9j
    y = -0.4 + 0.3j
    h = 1e-6
    gx = (green_function(x + h, y) - green_function(x - h, y)) / (2 * h)
    gy = (green_function(x + 1j * h, y) - green_function(x - 1j * h, y)) / (2 * h)
    d = x - y
    kernel = d / abs(d) ** 2 / (2.0 * np.pi)
    assert abs(gx - kernel.real) < 1e-9
    assert abs(gy - kernel.imag) < 1e-9


def test_translation_structure():
    shift = 2.3 - 1.1j
    assert abs(green_function(1.0 + 2j, 3.0 - 1j)
               - green_function(1.0 + 2j + shift, 3.0 - 1j + shift)) < 1e-15


@pytest.fixture
def grid():
    return RadialGrid.uniform(1.0, 8.0, 1201)


def test_zero_data_returns_far_field_exactly(grid):
    w = SpectralField.zeros(grid, 3)
    problem = DiskProblem(w, w, BoundaryTrace.zeros(3), FarField(1.2, -0.7))
    v = biot_savart_disk(2.0 + 1.0j, problem, n_radial=50, n_angular=32)
    assert v == complex(1.2, -0.7)


def test_rejects_boundary_and_interior_points(grid):
    w = SpectralField.zeros(grid, 3)
    problem = DiskProblem(w, w, BoundaryTrace.zeros(3))
    with pytest.raises(ValueError, match="boundary circle"):
        biot_savart_disk(1.0 + 0j, problem)
    with pytest.raises(ValueError, match="inside"):
        biot_savart_disk(0.5 + 0j, problem)
    with pytest.raises(ValueError):
        KernelPoint(2.0 + 0j, -1.0)


def test_localized_patch_far_field_circulation(grid):
    # a single vorticity patch seen from afar is a point vortex: the leading
    # field is circulation/(2 pi |x|), azimuthal
    bump = smooth_bump(grid.nodes, 1.5, 2.5)
    w = SpectralField.from_modes(grid, 2, {0: bump + 0j})
    rho = SpectralField.zeros(grid, 2)
    problem = DiskProblem(w, rho, BoundaryTrace.zeros(2),
                          vorticity_fn=lambda r, phi: smooth_bump(r, 1.5, 2.5)
                          * np.ones_like(np.asarray(phi, dtype=float)))
    from divcurl.quadrature import radial_integral

    circulation = 2.0 * np.pi * radial_integral(grid.nodes, bump, power=1).real
    far_point = 250.0 * np.exp(0.7j)  # |x| = 100 * support radius
    v = biot_savart_disk(far_point, problem, n_radial=400, n_angular=128,
                         support=(1.5, 2.5))
    expected = circulation / (2.0 * np.pi * abs(far_point)) * 1j * far_point / abs(far_point)
    assert abs(v - expected) < 0.01 * abs(expected)


def test_matches_solver_on_admissible_data(grid):
    rng = np.random.default_rng(1)
    problem = random_admissible_problem(rng, grid, K=8, K_data=6, K_c=8,
                                        support=(1.8, 4.2), with_divergence=True)
    solution = solve_disk(problem)
    pts = np.array([1.3 * np.exp(0.3j), 5.5 * np.exp(2.0j), 6.8 * np.exp(-2.5j),
                    1.2 * np.exp(1.1j), 4.9 * np.exp(-0.8j)])
    v_ref = solution.sample(pts)
    v_orc = biot_savart_disk(pts, problem, n_radial=160, n_angular=256, support=(1.8, 4.2))
    scale = np.max(np.abs(v_ref))
    assert np.max(np.abs(v_orc - v_ref)) < 1e-6 * scale


def test_matches_solver_with_boundary_layers(grid):
    # potential flow: everything is carried by the single layers
    problem = DiskProblem(SpectralField.zeros(grid, 3), SpectralField.zeros(grid, 3),
                          cylinder_slip_trace(3, 1.0), FarField(1.0, 0.0))
    pts = np.array([1.6 * np.exp(0.5j), 2.5 * np.exp(-1.0j), 4.0 * np.exp(2.8j)])
    v_orc = biot_savart_disk(pts, problem, n_radial=20, n_angular=16, n_boundary=256)
    v_exact = cylinder_flow(pts)
    assert np.max(np.abs(v_orc - v_exact)) < 1e-12


def test_agreement_improves_with_refinement(grid):
    rng = np.random.default_rng(2)
    problem = random_admissible_problem(rng, grid, K=6, K_data=4, K_c=6,
                                        support=(1.8, 4.2))
    solution = solve_disk(problem)
    pts = np.array([1.25 * np.exp(0.9j), 5.1 * np.exp(-2.2j)])
    v_ref = solution.sample(pts)
    errors = []
    for n_r, n_a in ((20, 32), (40, 64), (80, 128)):
        v = biot_savart_disk(pts, problem, n_radial=n_r, n_angular=n_a, support=(1.8, 4.2))
        errors.append(np.max(np.abs(v - v_ref)))
    assert errors[1] < errors[0] and errors[2] < errors[1]
    # observed order at least one (far better here: the integrand is smooth)
    assert np.log2(errors[0] / errors[2]) / 2.0 >= 1.0


def test_singular_cell_exclusion_inside_support(grid):
    # inside the data support the excised-cell error is first order in the
    # cell size; verify the budget C * h * |w| rather than spectral accuracy
    rng = np.random.default_rng(3)
    problem = random_admissible_problem(rng, grid, K=6, K_data=4, K_c=6,
                                        support=(1.8, 4.2))
    solution = solve_disk(problem)
    point = 3.0 * np.exp(1.0j)  # inside the support annulus
    v_ref = complex(solution.sample(np.array([point]))[0])
    w_scale = float(np.max(np.abs(problem.vorticity.coeffs))) * (2 * 6 + 1)
    errors = []
    for n_r in (150, 300, 600):
        h = (4.2 - 1.8) / n_r
        v = biot_savart_disk(KernelPoint(point, exclusion_radius=2.0 * h), problem,
                             n_radial=n_r, n_angular=int(n_r * 1.6), support=(1.8, 4.2))
        err = abs(v - v_ref)
        errors.append(err)
        assert err < 20.0 * h * w_scale
    assert errors[-1] < errors[0]


def test_interpolated_field_fallback_without_callable(grid):
    # strip the closed-form callable: the oracle falls back to radial
    # interpolation of the mode profiles, accurate to the grid resolution
    rng = np.random.default_rng(9)
    problem = random_admissible_problem(rng, grid, K=6, K_data=4, K_c=6,
                                        support=(1.8, 4.2))
    stripped = DiskProblem(problem.vorticity, problem.divergence, problem.boundary,
                           problem.far_field)
    solution = solve_disk(problem)
    pts = np.array([1.3 * np.exp(0.9j), 5.4 * np.exp(-0.4j)])
    v_ref = solution.sample(pts)
    v = biot_savart_disk(pts, stripped, n_radial=300, n_angular=128, support=(1.8, 4.2))
    assert np.max(np.abs(v - v_ref)) < 1e-5


def test_omega_identity_reduces_to_disk(grid):
    rng = np.random.default_rng(4)
    disk_problem = random_admissible_problem(rng, grid, K=6, K_data=4, K_c=6,
                                             support=(1.8, 4.2))
    w_fn = disk_problem.vorticity_fn
    ext = ExteriorProblem(identity_map(1.0), grid, 6,
                          vorticity_fn=lambda p: w_fn(np.abs(p), np.angle(p)))
    pts = np.array([1.3 * np.exp(0.2j), 5.0 * np.exp(-1.3j)])
    v_disk = biot_savart_disk(pts, disk_problem, n_radial=100, n_angular=128,
                              support=(1.8, 4.2))
    v_omega = biot_savart_omega(pts, ext, n_radial=100, n_angular=128, support=(1.8, 4.2))
    assert np.max(np.abs(v_disk - v_omega)) < 1e-14


def test_omega_ellipse_potential_flow():
    c, r0 = 0.5, 1.0
    m = joukowski_map(c, r0)
    far = FarField(1.0, 0.0)
    grid = RadialGrid.uniform(r0, 8.0, 301)
    ext = ExteriorProblem(m, grid, 4,
                          boundary_fn=potential_slip_boundary_fn(m, far), far_field=far)
    pts = m.inverse(np.array([1.7 * np.exp(0.6j), 2.5 * np.exp(-2.0j), 4.0 * np.exp(1.2j)]))
    v_orc = biot_savart_omega(pts, ext, n_radial=10, n_angular=8, n_boundary=512)
    v_exact = ellipse_potential_velocity(pts, c, r0, far)
    assert np.max(np.abs(v_orc - v_exact)) < 1e-10 * np.max(np.abs(v_exact))


def test_omega_matches_solve_exterior():
    c, r0 = 0.5, 1.0
    m = joukowski_map(c, r0)
    grid = RadialGrid.uniform(r0, 8.0, 1501)
    rng = np.random.default_rng(5)
    ext = random_admissible_exterior_problem(rng, m, grid, K=8, K_data=5, K_c=8,
                                             support=(1.7, 4.0))
    from divcurl.conformal import solve_exterior

    solution = solve_exterior(ext)
    zs = np.array([1.3 * np.exp(0.4j), 5.2 * np.exp(2.0j), 6.0 * np.exp(-1.0j)])
    pts = m.inverse(zs)
    v_ref = solution.sample(pts)
    v_orc = biot_savart_omega(pts, ext, n_radial=160, n_angular=256, support=(1.7, 4.0))
    assert np.max(np.abs(v_orc - v_ref)) < 1e-5 * np.max(np.abs(v_ref))
