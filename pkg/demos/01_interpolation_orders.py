"""Interpolation accuracy of the meshfree back-ends.

Fits f(x) = sin(x1) cos(x2) on nested Halton clouds over the unit square and
measures the max error on a 50 x 50 probe lattice.  MLS with linear
reproduction and the r^4 log r spline both converge like h^2 in the fill
distance; Shepard's method only reproduces constants and converges like h.
"""

import numpy as np

from meshctrl import DomainBox, InterpConfig, halton_cloud, interp_field, tensor_grid


def f(x):
    return np.sin(x[:, 0]) * np.cos(x[:, 1])


def main():
    box = DomainBox.unit(2)
    probe = tensor_grid(50, box).points
    exact = f(probe)
    print(f"{'backend':>8} {'M':>6} {'h':>9} {'max err':>10} {'order':>6}")
    for backend in ("shepard", "mls", "rbf"):
        prev = None
        for m in (64, 256, 1024):
            cloud = halton_cloud(m, box).with_fill_distance()
            err = np.abs(interp_field(cloud, f(cloud.points), InterpConfig(backend))(probe) - exact).max()
            order = "" if prev is None else f"{np.log(err / prev[1]) / np.log(cloud.fill_distance / prev[0]):6.2f}"
            print(f"{backend:>8} {m:>6} {cloud.fill_distance:9.4f} {err:10.3e} {order:>6}")
            prev = (cloud.fill_distance, err)


if __name__ == "__main__":
    main()
