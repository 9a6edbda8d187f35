"""Batch front end: parse a problem file, check, solve, dump fields and norms.

The problem description is a plain INI-style text file (sections of key=value
pairs, see configs/ for examples).  Subcommands:

    check   compatibility report only
    solve   full solve: compatibility report, field dump, norms report
    norms   solve and write the norms/estimate-ratio report only
    oracle  direct Biot-Savart evaluation at listed points, next to the solver

Exit codes: 0 ok, 1 config error, 2 inadmissible data in --strict mode,
3 I/O failure.  Identical configs and inputs produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import configparser
import os
import sys
import warnings
from dataclasses import replace

import numpy as np

from .biot_savart import biot_savart_disk
from .conformal import joukowski_map, pushforward_velocity, _weighted_sampler
from .disk import DiskProblem, FarField, solve_disk
from .fieldio import fmt, interpolate_to_polar, load_gridded_samples, write_field_dump
from .grids import BoundaryTrace, RadialGrid, SpectralField, analyze, equispaced_angles, smooth_bump
from .moments import make_admissible, moment_report
from .norms import far_field_deviation_h1, h1_seminorm, h_half_boundary_norm, l2_weighted_norm
from .presets import modal_field
from .stream import solve_stream, velocity_from_stream

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_INADMISSIBLE = 2
EXIT_IO = 3


class ConfigError(ValueError):
    pass


class ProblemConfig:
    """Resolved run settings; every consumed key is echoed in report headers."""

    def __init__(self):
        self.values = {}

    def set(self, section, key, value):
        self.values[f"{section}.{key}"] = value

    def get(self, section, key):
        return self.values[f"{section}.{key}"]

    def header_lines(self):
        return [f"# {key} = {self.values[key]}" for key in sorted(self.values)]


_DEFAULTS = {
    "domain": {"kind": "disk", "r0": "1.0", "c": "0.5"},
    "grid": {"nodes": "400", "rmax": "12.0", "grading": "geometric", "ratio": "1.005"},
    "modes": {"k": "32"},
    "vorticity": {"preset": "zero"},
    "divergence": {"preset": "zero"},
    "boundary": {"preset": "zero"},
    "far_field": {"v1": "0.0", "v2": "0.0"},
    "solve": {"solver": "direct", "strict": "false", "make_admissible": "false",
              "k_c": "12", "tolerance": "1e-8"},
    "output": {"field": "polar", "nr": "24", "nphi": "48", "rout": "",
               "x1min": "-4.0", "x1max": "4.0", "n1": "33",
               "x2min": "-4.0", "x2max": "4.0", "n2": "33"},
    "norms": {"weight": "2.0"},
    "oracle": {"n_radial": "400", "n_angular": "256", "n_boundary": "512"},
}

def _read_config(path, overrides):
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser()
    try:
        parser.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc

    def raw(section, key, fallback=None):
        if parser.has_option(section, key):
            return parser.get(section, key)
        return _DEFAULTS.get(section, {}).get(key, fallback)

    cfg = ProblemConfig()
    for section, keys in _DEFAULTS.items():
        for key in keys:
            cfg.set(section, key, raw(section, key))
    for key, value in overrides.items():
        if value is not None:
            section, name = key.split(".")
            cfg.set(section, name, str(value))
    # data preset parameters are preset-specific, pull whatever is present
    for section in ("vorticity", "divergence", "boundary"):
        if parser.has_section(section):
            for key, value in parser.items(section):
                cfg.set(section, key, value)
    return cfg


def _float(cfg, section, key):
    try:
        return float(cfg.get(section, key))
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"[{section}] {key} must be a number") from exc


def _int(cfg, section, key):
    try:
        return int(cfg.get(section, key))
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"[{section}] {key} must be an integer") from exc


def _bool(cfg, section, key):
    text = str(cfg.get(section, key)).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"[{section}] {key} must be a boolean, got '{text}'")


def _build_grid(cfg):
    r0 = _float(cfg, "domain", "r0")
    rmax = _float(cfg, "grid", "rmax")
    nodes = _int(cfg, "grid", "nodes")
    grading = cfg.get("grid", "grading")
    if r0 <= 0.0:
        raise ConfigError("[domain] r0 must be positive")
    if rmax <= r0:
        raise ConfigError("[grid] rmax must exceed r0")
    if nodes < 9:
        raise ConfigError("[grid] nodes must be at least 9")
    try:
        if grading == "uniform":
            return RadialGrid.uniform(r0, rmax, nodes)
        if grading == "geometric":
            return RadialGrid.geometric(r0, rmax, nodes, ratio=_float(cfg, "grid", "ratio"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    raise ConfigError(f"[grid] grading must be uniform or geometric, got '{grading}'")


def _build_map(cfg):
    kind = cfg.get("domain", "kind")
    if kind == "disk":
        return None
    if kind == "joukowski":
        try:
            return joukowski_map(_float(cfg, "domain", "c"), _float(cfg, "domain", "r0"))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    raise ConfigError(f"[domain] kind must be disk or joukowski, got '{kind}'")


def _param(cfg, section, key, default=None):
    try:
        return cfg.get(section, key)
    except KeyError:
        if default is None:
            raise ConfigError(f"[{section}] preset requires key '{key}'") from None
        return default


def _radial_window(r, lo, hi, taper):
    """C1 plateau window: 1 on [lo+taper, hi-taper], smoothstep edges, 0 outside."""
    r = np.asarray(r, dtype=float)
    up = np.clip((r - lo) / taper, 0.0, 1.0)
    down = np.clip((hi - r) / taper, 0.0, 1.0)
    return (3.0 - 2.0 * up) * up * up * (3.0 - 2.0 * down) * down * down


def _build_scalar_data(cfg, section, grid, K, m, notes):
    """(SpectralField, disk-frame callable or None) for one data section."""
    preset = _param(cfg, section, "preset", "zero")
    span = grid.rmax - grid.r0
    if preset == "zero":
        return SpectralField.zeros(grid, K), None
    if m is not None and preset in ("annular_bump", "mode_bump"):
        notes.append(f"{section}: {preset} interpreted as the Jacobian-weighted "
                     "right-hand side in mapped (disk-frame) coordinates")
    if preset == "annular_bump":
        amp = float(_param(cfg, section, "amplitude", "1.0"))
        lo = float(_param(cfg, section, "lo", str(grid.r0 + span / 3.0)))
        hi = float(_param(cfg, section, "hi", str(grid.r0 + 2.0 * span / 3.0)))
        field, fn = modal_field(grid, K, {0: lambda s: amp * smooth_bump(s, lo, hi)})
        return field, fn
    if preset == "mode_bump":
        k = int(_param(cfg, section, "mode", "1"))
        if not 1 <= k <= K:
            raise ConfigError(f"[{section}] mode must lie in 1..K")
        amp = complex(float(_param(cfg, section, "re", "1.0")),
                      float(_param(cfg, section, "im", "0.0")))
        lo = float(_param(cfg, section, "lo", str(grid.r0 + span / 3.0)))
        hi = float(_param(cfg, section, "hi", str(grid.r0 + 2.0 * span / 3.0)))
        field, fn = modal_field(grid, K, {
            k: lambda s: amp * smooth_bump(s, lo, hi),
            -k: lambda s: np.conj(amp) * smooth_bump(s, lo, hi),
        })
        return field, fn
    if preset == "gaussian_patch":
        x0 = float(_param(cfg, section, "x0"))
        y0 = float(_param(cfg, section, "y0"))
        sigma = float(_param(cfg, section, "sigma"))
        amp = float(_param(cfg, section, "amplitude", "1.0"))
        lo = float(_param(cfg, section, "lo", str(grid.r0 + 0.02 * span)))
        hi = float(_param(cfg, section, "hi", str(grid.rmax - 0.02 * span)))
        center = complex(x0, y0)
        taper = 0.1 * (hi - lo)

        def physical(points):
            p = np.asarray(points, dtype=complex)
            return amp * np.exp(-np.abs(p - center) ** 2 / (2.0 * sigma**2)) \
                * _radial_window(np.abs(p), lo, hi, taper)

        if m is None:
            fn = lambda r, phi: physical(np.asarray(r) * np.exp(1j * np.asarray(phi)))
        else:
            fn = _weighted_sampler(m, physical)
            notes.append(f"{section}: gaussian_patch interpreted in physical coordinates "
                         "and pulled back with the map Jacobian")
        angles = equispaced_angles(max(4 * K, 2 * K + 1, 64))
        rr, pp = np.meshgrid(grid.nodes, angles, indexing="ij")
        return analyze(grid, fn(rr, pp), K), fn
    if preset == "file":
        if m is not None:
            raise ConfigError(f"[{section}] file ingestion is only supported on disk domains")
        path = _param(cfg, section, "path")
        try:
            samples = load_gridded_samples(path)
        except OSError as exc:
            raise IOError(f"cannot read {path}: {exc}") from exc
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        angles = equispaced_angles(max(4 * K, 2 * K + 1, 64))
        values, report = interpolate_to_polar(samples, grid.nodes, angles)
        notes.append(f"{section}: interpolated {path} "
                     f"(outside points zeroed: {report['outside_points']}, "
                     f"interpolation error estimate: {report['interpolation_error_estimate']:.3e})")
        return analyze(grid, values, K), None
    raise ConfigError(f"[{section}] unknown preset '{preset}'")


def _parse_coefficients(text, K):
    radial = {}
    tangential = {}
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(",")
        if len(parts) != 5:
            raise ConfigError("boundary coefficients entries must be "
                              "'k,gr_re,gr_im,gphi_re,gphi_im'")
        k = int(parts[0])
        if abs(k) > K:
            raise ConfigError(f"boundary coefficient mode {k} outside |k| <= {K}")
        radial[k] = complex(float(parts[1]), float(parts[2]))
        tangential[k] = complex(float(parts[3]), float(parts[4]))
    for k in [k for k in radial if k > 0 and -k not in radial]:
        radial[-k] = np.conj(radial[k])
        tangential[-k] = np.conj(tangential[k])
    return radial, tangential


def _build_boundary(cfg, K, far, notes):
    preset = _param(cfg, "boundary", "preset", "zero")
    if preset == "zero":
        return BoundaryTrace.zeros(K)
    if preset == "potential_slip":
        v = far.as_complex
        return BoundaryTrace.from_coeffs(
            K, tangential={1: 1j * np.conj(v), -1: -1j * v})
    if preset == "coefficients":
        radial, tangential = _parse_coefficients(_param(cfg, "boundary", "coefficients"), K)
        return BoundaryTrace.from_coeffs(K, radial=radial, tangential=tangential)
    raise ConfigError(f"[boundary] unknown preset '{preset}'")


def build_problem(cfg):
    """Resolve the config into (disk-frame problem, map or None, notes)."""
    notes = []
    grid = _build_grid(cfg)
    m = _build_map(cfg)
    K = _int(cfg, "modes", "k")
    if K < 1:
        raise ConfigError("[modes] k must be at least 1")
    far = FarField(_float(cfg, "far_field", "v1"), _float(cfg, "far_field", "v2"))
    w, w_fn = _build_scalar_data(cfg, "vorticity", grid, K, m, notes)
    rho, rho_fn = _build_scalar_data(cfg, "divergence", grid, K, m, notes)
    g = _build_boundary(cfg, K, far, notes)
    if m is not None and _param(cfg, "boundary", "preset", "zero") != "zero":
        notes.append("boundary: trace specified in mapped (disk-frame) coordinates")

    if _bool(cfg, "solve", "make_admissible"):
        k_c = _int(cfg, "solve", "k_c")
        if k_c > K:
            raise ConfigError("[solve] k_c cannot exceed the mode band K")
        w = make_admissible(w, rho, g, far, k_c)
        w_fn = None
        notes.append(f"vorticity projected onto the admissible set for k <= {k_c}")
    problem = DiskProblem(w, rho, g, far, vorticity_fn=w_fn, divergence_fn=rho_fn)
    return problem, m, notes


def _solve(cfg, problem):
    solver = cfg.get("solve", "solver")
    tol = _float(cfg, "solve", "tolerance")
    if solver == "direct":
        return solve_disk(problem, warn_tolerance=tol)
    if solver == "stream":
        if float(np.max(np.abs(problem.divergence.coeffs))) > 1e-14:
            raise ConfigError("stream solver requires solenoidal data (zero divergence)")
        trace_mag = max(float(np.max(np.abs(problem.boundary.g_r))),
                        float(np.max(np.abs(problem.boundary.g_phi))))
        if trace_mag > 1e-14:
            raise ConfigError("stream solver requires the no-slip boundary (zero trace)")
        psi = solve_stream(problem.vorticity, problem.far_field, warn_tolerance=tol)
        solution = velocity_from_stream(psi)
        return replace(solution, report=moment_report(problem, tolerance=tol))
    raise ConfigError(f"[solve] solver must be direct or stream, got '{solver}'")


def _write_text(path, lines):
    try:
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise IOError(f"cannot write {path}: {exc}") from exc


def _report_header(cfg, notes):
    lines = ["# divcurl report"]
    lines.extend(cfg.header_lines())
    lines.extend(f"# note: {note}" for note in notes)
    return lines


def _dump_field(cfg, solution, m, out_dir, notes):
    mode = cfg.get("output", "field")
    if mode == "none":
        return
    grid = solution.grid
    if mode == "polar":
        nr = _int(cfg, "output", "nr")
        nphi = _int(cfg, "output", "nphi")
        rout_text = cfg.get("output", "rout")
        rout = float(rout_text) if rout_text else grid.rmax
        radii = np.linspace(grid.r0, min(rout, grid.rmax), nr)
        angles = equispaced_angles(nphi)
        rr, pp = np.meshgrid(radii, angles, indexing="ij")
        z = rr * np.exp(1j * pp)
        if m is None:
            points = z.ravel()
            velocities = solution.sample(points)
        else:
            points = m.inverse(z).ravel()
            vr, vphi = solution.sample_polar(rr, pp)
            vhat = ((vr + 1j * vphi) * np.exp(1j * pp)).ravel()
            velocities = np.conj(1.0 / m.d_inverse(z.ravel())) * vhat
    elif mode == "cartesian":
        x1 = np.linspace(_float(cfg, "output", "x1min"), _float(cfg, "output", "x1max"),
                         _int(cfg, "output", "n1"))
        x2 = np.linspace(_float(cfg, "output", "x2min"), _float(cfg, "output", "x2max"),
                         _int(cfg, "output", "n2"))
        xx, yy = np.meshgrid(x1, x2, indexing="ij")
        points = (xx + 1j * yy).ravel()
        if m is None:
            radius = np.abs(points)
            ok = (radius >= grid.r0) & (radius <= grid.rmax)
            velocities = np.full(points.shape, complex(np.nan, np.nan))
            velocities[ok] = solution.sample(points[ok])
        else:
            z = m.forward(points)
            ok = np.abs(z) <= grid.rmax
            velocities = np.full(points.shape, complex(np.nan, np.nan))
            velocities[ok] = pushforward_velocity(solution, m, points[ok])
    else:
        raise ConfigError(f"[output] field must be polar, cartesian or none, got '{mode}'")
    path = os.path.join(out_dir, "field.csv")
    try:
        write_field_dump(path, points, velocities)
    except OSError as exc:
        raise IOError(f"cannot write {path}: {exc}") from exc
    notes.append("field dump written to field.csv")


def _write_norms(cfg, problem, solution, out_dir, notes):
    weight = _float(cfg, "norms", "weight")
    g_norm = h_half_boundary_norm(problem.boundary)
    w_l2 = l2_weighted_norm(problem.vorticity, 0.0)
    rho_l2 = l2_weighted_norm(problem.divergence, 0.0)
    w_l2n = l2_weighted_norm(problem.vorticity, weight)
    rho_l2n = l2_weighted_norm(problem.divergence, weight)
    grad = h1_seminorm(solution)
    dev = far_field_deviation_h1(solution)
    den1 = w_l2 + rho_l2 + g_norm
    den2 = w_l2n + rho_l2n + g_norm
    lines = _report_header(cfg, notes)
    if not solution.report.admissible:
        lines.append("# note: data is inadmissible, H1 quantities depend on rmax "
                     "(infinite-energy 1/r tail)")
    lines.append("quantity,value")
    lines.append(f"grad_v_l2,{fmt(grad)}")
    lines.append(f"v_minus_vinf_h1,{fmt(dev)}")
    lines.append(f"g_h_half,{fmt(g_norm)}")
    lines.append(f"w_l2,{fmt(w_l2)}")
    lines.append(f"rho_l2,{fmt(rho_l2)}")
    lines.append(f"w_l2_weighted,{fmt(w_l2n)}")
    lines.append(f"rho_l2_weighted,{fmt(rho_l2n)}")
    lines.append(f"weight_exponent,{fmt(weight)}")
    lines.append(f"theorem1_ratio,{fmt(grad / den1) if den1 > 0 else 'nan'}")
    lines.append(f"theorem2_ratio,{fmt(dev / den2) if den2 > 0 else 'nan'}")
    _write_text(os.path.join(out_dir, "norms_report.txt"), lines)


def _write_compat(cfg, report, out_dir, notes):
    lines = _report_header(cfg, notes)
    lines.append(report.to_text().rstrip("\n"))
    _write_text(os.path.join(out_dir, "compat_report.txt"), lines)


def _prepare(args):
    overrides = {
        "modes.k": args.modes,
        "grid.nodes": args.grid_nodes,
        "grid.rmax": args.rmax,
        "solve.solver": args.solver,
    }
    if args.strict:
        overrides["solve.strict"] = "true"
    cfg = _read_config(args.config, overrides)
    out_dir = args.out
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as exc:
        raise IOError(f"cannot create output directory {out_dir}: {exc}") from exc
    return cfg, out_dir


def cmd_check(args):
    cfg, out_dir = _prepare(args)
    problem, _, notes = build_problem(cfg)
    report = moment_report(problem, tolerance=_float(cfg, "solve", "tolerance"))
    _write_compat(cfg, report, out_dir, notes)
    if _bool(cfg, "solve", "strict") and not report.admissible:
        return EXIT_INADMISSIBLE
    return EXIT_OK


def cmd_solve(args, norms_only=False):
    cfg, out_dir = _prepare(args)
    problem, m, notes = build_problem(cfg)
    with warnings.catch_warnings():
        warnings.simplefilter("always")
        solution = _solve(cfg, problem)
    if not norms_only:
        _write_compat(cfg, solution.report, out_dir, notes)
        _dump_field(cfg, solution, m, out_dir, notes)
    _write_norms(cfg, problem, solution, out_dir, notes)
    if _bool(cfg, "solve", "strict") and not solution.report.admissible:
        return EXIT_INADMISSIBLE
    return EXIT_OK


def _parse_points(args):
    points = []
    if args.points:
        for chunk in args.points.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            parts = chunk.split(",")
            if len(parts) != 2:
                raise ConfigError("points must be 'x1,x2;x1,x2;...'")
            points.append(complex(float(parts[0]), float(parts[1])))
    if args.points_file:
        try:
            raw = np.loadtxt(args.points_file, delimiter=",", skiprows=1, ndmin=2)
        except OSError as exc:
            raise IOError(f"cannot read {args.points_file}: {exc}") from exc
        points.extend(complex(a, b) for a, b in raw[:, :2])
    if not points:
        raise ConfigError("oracle needs --points or --points-file")
    return np.array(points, dtype=complex)


def cmd_oracle(args):
    cfg, out_dir = _prepare(args)
    problem, m, notes = build_problem(cfg)
    points = _parse_points(args)
    solution = _solve(cfg, problem)
    n_radial = _int(cfg, "oracle", "n_radial")
    n_angular = _int(cfg, "oracle", "n_angular")
    n_boundary = _int(cfg, "oracle", "n_boundary")

    lines = _report_header(cfg, notes)
    lines.append("x1,x2,v1_solver,v2_solver,v1_oracle,v2_oracle,abs_diff")
    for p in points:
        if m is None:
            v_solver = complex(solution.sample(np.array([p]))[0])
            v_oracle = biot_savart_disk(p, problem, n_radial=n_radial,
                                        n_angular=n_angular, n_boundary=n_boundary)
        else:
            z = complex(m.forward(p))
            vhat = complex(solution.sample(np.array([z]))[0])
            push = complex(np.conj(1.0 / m.d_inverse(z)))
            v_solver = push * vhat
            v_oracle = push * biot_savart_disk(z, problem, n_radial=n_radial,
                                               n_angular=n_angular, n_boundary=n_boundary)
        lines.append(
            f"{fmt(p.real)},{fmt(p.imag)},{fmt(v_solver.real)},{fmt(v_solver.imag)},"
            f"{fmt(v_oracle.real)},{fmt(v_oracle.imag)},{fmt(abs(v_solver - v_oracle))}"
        )
    _write_text(os.path.join(out_dir, "oracle_report.txt"), lines)
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="divcurl",
                                     description="exterior div-curl spectral solver")
    parser.add_argument("command", choices=["check", "solve", "norms", "oracle"])
    parser.add_argument("--config", required=True, help="problem description file")
    parser.add_argument("--out", default="out", help="output directory")
    parser.add_argument("--strict", action="store_true",
                        help="exit 2 when the data is inadmissible")
    parser.add_argument("--solver", choices=["direct", "stream"], default=None)
    parser.add_argument("--modes", type=int, default=None, help="override mode band K")
    parser.add_argument("--grid-nodes", type=int, default=None)
    parser.add_argument("--rmax", type=float, default=None)
    parser.add_argument("--points", default=None, help="oracle points 'x1,x2;x1,x2'")
    parser.add_argument("--points-file", default=None, help="CSV of oracle points")
    args = parser.parse_args(argv)

    try:
        if args.command == "check":
            return cmd_check(args)
        if args.command == "solve":
            return cmd_solve(args)
        if args.command == "norms":
            return cmd_solve(args, norms_only=True)
        return cmd_oracle(args)
    except IOError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def entry():
    raise SystemExit(main())
