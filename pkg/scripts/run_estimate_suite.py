#!/usr/bin/env python3
"""Empirical check of the two a-priori estimates over a randomized suite.

For each random admissible problem the script reports

    ratio1 = ||grad v||_L2 / (||rho||_L2 + ||w||_L2 + ||g||_H1/2)
    ratio2 = ||v - v_inf||_H1 / (||rho||_L2N + ||w||_L2N + ||g||_H1/2)

and their suite maxima at two grid resolutions, which should agree to well
under ten percent if the discrete norms have converged.
"""

import argparse
import pathlib
import sys

import numpy as np

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from divcurl.disk import FarField, solve_disk
from divcurl.grids import RadialGrid
from divcurl.norms import (
    far_field_deviation_h1,
    h1_seminorm,
    h_half_boundary_norm,
    l2_weighted_norm,
)
from divcurl.presets import random_admissible_problem


def suite_ratios(nodes, args):
    grid = RadialGrid.uniform(args.r0, args.rmax, nodes)
    ratio1 = np.empty(args.problems)
    ratio2 = np.empty(args.problems)
    for i in range(args.problems):
        rng = np.random.default_rng(args.seed + i)
        kind = i % 3
        problem = random_admissible_problem(
            rng, grid, K=args.modes, K_data=args.modes - 2, K_c=args.modes,
            with_divergence=(kind == 1), boundary_modes=3 if kind == 2 else 0,
            far_field=FarField(0.8, -0.3) if kind == 2 else FarField(),
        )
        solution = solve_disk(problem)
        g_norm = h_half_boundary_norm(problem.boundary)
        den1 = (l2_weighted_norm(problem.divergence, 0.0)
                + l2_weighted_norm(problem.vorticity, 0.0) + g_norm)
        den2 = (l2_weighted_norm(problem.divergence, args.weight)
                + l2_weighted_norm(problem.vorticity, args.weight) + g_norm)
        ratio1[i] = h1_seminorm(solution) / den1
        ratio2[i] = far_field_deviation_h1(solution) / den2
    return ratio1, ratio2


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--problems", type=int, default=50)
    parser.add_argument("--nodes", type=int, default=801)
    parser.add_argument("--modes", type=int, default=10)
    parser.add_argument("--r0", type=float, default=1.0)
    parser.add_argument("--rmax", type=float, default=8.0)
    parser.add_argument("--weight", type=float, default=2.0)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    print(f"suite of {args.problems} admissible problems, K = {args.modes}, "
          f"N = {args.weight}")
    r1c, r2c = suite_ratios(args.nodes, args)
    r1f, r2f = suite_ratios(2 * args.nodes - 1, args)
    print(f"{'':>10} {'gradient ratio':>16} {'H1 ratio':>16}")
    print(f"{'median':>10} {np.median(r1f):16.6f} {np.median(r2f):16.6f}")
    print(f"{'max':>10} {np.max(r1f):16.6f} {np.max(r2f):16.6f}")
    drift1 = abs(np.max(r1f) - np.max(r1c)) / np.max(r1f)
    drift2 = abs(np.max(r2f) - np.max(r2c)) / np.max(r2f)
    print(f"max drift under one refinement step: "
          f"{drift1:.3e} (gradient), {drift2:.3e} (H1)")


if __name__ == "__main__":
    main()
