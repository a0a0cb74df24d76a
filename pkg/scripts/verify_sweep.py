"""Residual maxima of every built-in family on a meridian grid.

    python scripts/verify_sweep.py [--grid 10]
"""

import argparse

from meridian.cli import VERIFY_BOX, verify_bi, verify_field
from meridian.families import FAMILIES, make_family
from meridian.separable import BiSeries, BiTerm, GaspSeries, GaspTerm, gasp_field


def fields():
    for name in sorted(FAMILIES):
        yield name, make_family(name)
    for a in (0.0, 1.0, 2.0, 3.0):
        yield f"gasp alpha={a:g}", gasp_field(GaspSeries(a, [GaspTerm(1.0, 1.0, 0.3, 1.0, 0.4)]))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid", type=int, default=10)
    args = ap.parse_args()
    failed = 0
    for name, f in fields():
        rows = verify_field(f, VERIFY_BOX, args.grid)
        worst = max(rows, key=lambda r: r[1] / r[2])
        ok = all(v <= t for _, v, t in rows)
        failed += not ok
        print(f"{name:<18} worst {worst[0]:<22} {worst[1]:.2e}  {'ok' if ok else 'FAIL'}")
    bi = BiSeries(1.0, 1.0, [BiTerm(1.0, 0.0, 1.0), BiTerm(0.7, 1.0, 0.4, 0.6, 0.3, -1.0, 0.5, 0.8)])
    (_, v, t), = verify_bi(bi, n=args.grid)
    failed += v > t
    print(f"{'bihyperbolic 1,1':<18} worst {'bihyperbolic':<22} {v:.2e}  {'ok' if v <= t else 'FAIL'}")
    raise SystemExit(1 if failed else 0)


if __name__ == "__main__":
    main()
