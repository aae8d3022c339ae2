"""Grid convergence of the three lowest eigenvalues on the straight strip."""

import argparse
import math
import sys

import numpy as np

from magwave.eigensolve import solve_waveguide
from magwave.gauge import Field
from magwave.grid import Grid
from magwave.profiles import Profile


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--L", type=float, default=10.0)
    ap.add_argument("--levels", type=int, default=4)
    args = ap.parse_args()

    exact = np.array([1 + (m * math.pi / (2 * args.L)) ** 2 for m in (1, 2, 3)])
    prev = None
    print("Nx Ny rel_err_1 rel_err_2 rel_err_3 order_1")
    for lev in range(args.levels):
        Nx, Ny = 50 * 2**lev - 1, 16 * 2**lev - 1
        s = solve_waveguide(Profile(), Field(), Grid(args.L, Nx, Ny), k=3)
        err = np.abs(s.eigenvalues - exact) / exact
        order = "" if prev is None else f"{math.log2(prev[0] / err[0]):.3f}"
        print(f"{Nx} {Ny} {err[0]:.3e} {err[1]:.3e} {err[2]:.3e} {order}")
        prev = err
    return 0


if __name__ == "__main__":
    sys.exit(main())
