"""Magnetic vs non-magnetic ground energy over the Lorentzian amplitude.

    python3 scripts/alpha_sweep.py --L 40 --hx 0.25 --Ny 31 > sweep.dat
"""

import argparse
import sys

from magwave.analysis.sweep import alpha_sweep
from magwave.gauge import Field
from magwave.grid import grid_with_spacing
from magwave.profiles import Profile


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--L", type=float, default=40.0)
    ap.add_argument("--hx", type=float, default=0.25)
    ap.add_argument("--Ny", type=int, default=31)
    ap.add_argument("--b", type=float, default=1.0, help="field strength")
    ap.add_argument("--radius", type=float, default=1.0)
    ap.add_argument("--alphas", type=float, nargs="+", default=[0.01, 0.02, 0.05, 0.1, 0.2, 0.4])
    ap.add_argument("--bisect", type=int, default=8)
    args = ap.parse_args()

    grid = grid_with_spacing(args.L, args.hx, args.Ny)
    B = Field("smooth_disk_bump", args.b, radius=args.radius)
    r = alpha_sweep(Profile("lorentzian", 0.1), B, args.alphas, grid, bisect_steps=args.bisect)
    print(f"# L={args.L} hx={args.hx} Ny={args.Ny} b={args.b} R={args.radius} delta={r.delta:.6g}")
    print(f"# alpha_critical={r.alpha_critical} monotone={r.monotone}")
    for note in r.notes:
        print(f"# {note}")
    print("# alpha lambda1_magnetic lambda1_nonmagnetic")
    for row in r.gnuplot_rows():
        print(row)
    return 0


if __name__ == "__main__":
    sys.exit(main())
