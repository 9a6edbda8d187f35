#!/usr/bin/env python3
"""Agreement between the spectral solver and the Biot-Savart quadrature.

Runs one random admissible problem, evaluates both paths at points off the
data support, and prints the maximum relative disagreement as the oracle
lattice is refined.  The trapezoid sums converge super-algebraically here
because the data is smooth and compactly supported.
"""

import argparse
import pathlib
import sys

import numpy as np

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from divcurl.biot_savart import biot_savart_disk
from divcurl.disk import solve_disk
from divcurl.grids import RadialGrid
from divcurl.presets import random_admissible_problem


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--nodes", type=int, default=1501)
    parser.add_argument("--modes", type=int, default=10)
    parser.add_argument("--points", type=int, default=24)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--levels", type=int, default=5)
    args = parser.parse_args()

    grid = RadialGrid.uniform(1.0, 8.0, args.nodes)
    support = (1.8, 4.2)
    rng = np.random.default_rng(args.seed)
    problem = random_admissible_problem(rng, grid, K=args.modes,
                                        K_data=args.modes - 2, K_c=args.modes,
                                        support=support)
    solution = solve_disk(problem)

    radii = np.concatenate([rng.uniform(1.12, 1.62, args.points // 2),
                            rng.uniform(4.45, 7.2, args.points - args.points // 2)])
    points = radii * np.exp(2j * np.pi * rng.random(args.points))
    v_ref = solution.sample(points)
    scale = np.max(np.abs(v_ref))

    print(f"{'n_radial':>9} {'n_angular':>10} {'max rel err':>14}")
    n_r, n_a = 20, 32
    for _ in range(args.levels):
        v = biot_savart_disk(points, problem, n_radial=n_r, n_angular=n_a,
                             support=support)
        err = np.max(np.abs(v - v_ref)) / scale
        print(f"{n_r:9d} {n_a:10d} {err:14.4e}")
        n_r *= 2
        n_a *= 2


if __name__ == "__main__":
    main()
