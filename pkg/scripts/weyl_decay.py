"""Weyl quasi-mode residuals against n for k = 0 and k = 1.

The k = 0 residual decays like n^-4 (the profile only enters through
f' ~ n^-3 on the support); a travelling mode k != 0 decays like n^-2.
"""

import argparse
import math
import sys

from magwave.analysis.weyl import BUMP_H2_SQ, decay_slope, weyl_grid, weyl_residual
from magwave.gauge import Field
from magwave.profiles import Profile


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha", type=float, default=0.1)
    ap.add_argument("--b", type=float, default=1.0)
    ap.add_argument("--ns", type=int, nargs="+", default=[4, 8, 16, 32, 64])
    ap.add_argument("--ks", type=float, nargs="+", default=[0.0, 1.0])
    args = ap.parse_args()

    p = Profile("lorentzian", args.alpha)
    B = Field("smooth_disk_bump", args.b)
    print("k n residual_sq residual_sq*n^4/|h''|^2 norm_sq/(pi/2)")
    for k in args.ks:
        rs = []
        for n in args.ns:
            res, norm = weyl_residual(p, B, k, n, weyl_grid(n))
            rs.append(res)
            print(f"{k:g} {n} {res:.6e} {res * n**4 / BUMP_H2_SQ:.5f} {norm / (math.pi / 2):.6f}")
        print(f"# k={k:g} slope {decay_slope(args.ns, rs):.3f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
