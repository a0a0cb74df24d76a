"""Equilibria and their classification across a one-parameter family.

    python scripts/scan_equilibria.py --family xsq_plus_c --param c --lo -1 --hi 2 --steps 13
"""

import argparse

from meridian.dynamics import parameter_scan
from meridian.families import make_family


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--family", default="xsq_plus_c")
    ap.add_argument("--param", default="c")
    ap.add_argument("--lo", type=float, default=-1.0)
    ap.add_argument("--hi", type=float, default=2.0)
    ap.add_argument("--steps", type=int, default=13)
    ap.add_argument("--box", type=float, nargs=4, default=(-2.0, 2.0, 0.1, 3.0))
    ap.add_argument("--grid", type=int, default=20)
    args = ap.parse_args()

    rows = parameter_scan(lambda **kw: make_family(args.family, kw), {args.param: (args.lo, args.hi)},
                          args.steps, args.box, args.grid)
    print(f"{args.param:>8} {'x0':>10} {'rho':>10} {'lambda1':>10} {'index':>5} {'degree':>6}")
    for r in rows:
        mu = dict(r.mu)[args.param]
        if r.error:
            print(f"{mu:8.3f}  error: {r.error}")
            continue
        rep = r.report
        print(f"{mu:8.3f} {rep.location.s:10.6f} {rep.location.t:10.6f} {rep.eigenvalues.lambda1:10.6f} "
              f"{rep.index:5d} {rep.degree_of_instability:6d}")
    if not rows:
        print("no equilibria in the box for any sample")


if __name__ == "__main__":
    main()
