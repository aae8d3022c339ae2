"""Hardy constant estimates over growing windows, with and without a field."""

import argparse
import sys

from magwave.analysis.hardy import hardy_ladder
from magwave.gauge import Field


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--Ls", type=float, nargs="+", default=[10, 20, 40, 80, 160])
    ap.add_argument("--hx", type=float, default=0.25)
    ap.add_argument("--Ny", type=int, default=31)
    ap.add_argument("--b", type=float, default=1.0)
    ap.add_argument("--radii", type=float, nargs="+", default=[1.0, 1.5])
    args = ap.parse_args()

    zero = hardy_ladder(Field(), args.Ls, args.hx, args.Ny)
    mags = {R: hardy_ladder(Field("smooth_disk_bump", args.b, radius=R), args.Ls, args.hx, args.Ny)
            for R in args.radii}
    print("L C_zero " + " ".join(f"C_R{R:g} ratio_R{R:g}" for R in args.radii))
    for L in args.Ls:
        cols = " ".join(f"{mags[R][L]:.6g} {mags[R][L] / zero[L]:.3f}" for R in args.radii)
        print(f"{L:g} {zero[L]:.6g} {cols}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
