"""Pathlines from a fan of seeds, written as one CSV for plotting.

    python scripts/export_trajectories.py --family joukowski --t-end 1.5 --out traj.csv
"""

import argparse
import csv
import sys

import numpy as np

from meridian.dynamics import integrate_pathline
from meridian.errors import MeridianError
from meridian.families import make_family


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--family", default="joukowski")
    ap.add_argument("--t-end", type=float, default=1.5)
    ap.add_argument("--seeds", type=int, default=8)
    ap.add_argument("--x0", type=float, default=-2.0)
    ap.add_argument("--rho", type=float, nargs=2, default=(0.2, 2.0))
    ap.add_argument("--tol", type=float, default=1e-9)
    ap.add_argument("--out")
    args = ap.parse_args()

    f = make_family(args.family)
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(("seed", "t", "x0", "rho", "h", "status"))
    for k, rho in enumerate(np.linspace(*args.rho, args.seeds)):
        try:
            tr = integrate_pathline(f, (args.x0, float(rho), 0.0), args.t_end, args.tol, max_step=0.05)
        except MeridianError as exc:
            print(f"seed {k}: {exc}", file=sys.stderr)
            continue
        for t, p, h in zip(tr.times, tr.points, tr.h_values):
            w.writerow((k, repr(t), repr(p[0]), repr(float(np.hypot(p[1], p[2]))), repr(h), tr.status))
    if args.out:
        fh.close()


if __name__ == "__main__":
    main()
