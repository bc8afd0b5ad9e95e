"""Scattered RBF nodes against a tensor grid in three dimensions.

A tensor grid needs n^d nodes for n points per axis; 216 Halton points
reach the accuracy of a 9^3 = 729 point multilinear grid for the Case 1
benchmark.  The script solves both and prints error and wall-clock time
(measured around the solve only).
"""

import time

from meshctrl import BenchmarkCase, InterpConfig, OptimizerConfig, l2_control_error, make_benchmark, max_control_error, solve


def main():
    case = BenchmarkCase(case=1, sigmas=(0.1, 0.15, 0.2), y0=0.5)
    problem = make_benchmark(case)
    print(f"{'backend':>12} {'M':>5} {'L2 err':>10} {'max err':>10} {'wall s':>7}")
    for backend, points in (("rbf", 216), ("multilinear", 729)):
        config = OptimizerConfig(step=1.0, points=points, interp=InterpConfig(backend))
        start = time.monotonic()
        result = solve(problem, config, n_steps=21)
        wall = time.monotonic() - start
        l2, mx = l2_control_error(result.control, case), max_control_error(result.control, case)
        print(f"{backend:>12} {result.cloud.size:5d} {l2:10.3e} {mx:10.3e} {wall:7.1f}")


if __name__ == "__main__":
    main()
