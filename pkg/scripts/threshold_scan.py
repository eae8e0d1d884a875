#!/usr/bin/env python3
"""Scan barrier-existence thresholds over a parameter range.

Convenience wrapper around the threshold searches: bisect b*(a, L) for a
list of a values (or a*(b, L) for a list of b values, or sweep domain
lengths) and tabulate the results as CSV on stdout plus the usual JSON
artifacts per point.
"""

from __future__ import annotations

import argparse
import os
import sys

from lvcontrol.errors import LvControlError
from lvcontrol.thresholds import find_a_star, find_b_star, sweep_L


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    sub = ap.add_subparsers(dest="mode", required=True)

    bp = sub.add_parser("b-star", help="b*(a, L) for each a in --a-values")
    bp.add_argument("--a-values", required=True, help="comma-separated a values")
    bp.add_argument("--L", type=float, required=True)
    bp.add_argument("--lo", type=float, required=True, help="bracket low endpoint")
    bp.add_argument("--hi", type=float, required=True, help="bracket high endpoint")
    bp.add_argument("--tol", type=float, default=0.05)
    bp.add_argument("--grid-n", type=int, default=201)

    apar = sub.add_parser("a-star", help="a*(b, L) for each b in --b-values")
    apar.add_argument("--b-values", required=True, help="comma-separated b values")
    apar.add_argument("--L", type=float, required=True)
    apar.add_argument("--lo", type=float, required=True)
    apar.add_argument("--hi", type=float, required=True)
    apar.add_argument("--tol", type=float, default=0.05)
    apar.add_argument("--grid-n", type=int, default=201)

    lp = sub.add_parser("L-sweep", help="barrier indicator across lengths")
    lp.add_argument("--a", type=float, required=True)
    lp.add_argument("--b", type=float, required=True)
    lp.add_argument("--L-values", required=True, help="comma-separated lengths, increasing")
    lp.add_argument("--grid-n", type=int, default=201)
    lp.add_argument("--threads", type=int, default=1)

    args = ap.parse_args()
    try:
        if args.mode == "b-star":
            print("a,b_star,bracket_lo,bracket_hi")
            for a in (float(v) for v in args.a_values.split(",") if v.strip()):
                r = find_b_star(a, args.L, (args.lo, args.hi), args.tol, n=args.grid_n)
                print(f"{a:.12g},{r.value:.12g},{r.bracket[0]:.12g},{r.bracket[1]:.12g}")
        elif args.mode == "a-star":
            print("b,a_star,bracket_lo,bracket_hi")
            for b in (float(v) for v in args.b_values.split(",") if v.strip()):
                r = find_a_star(b, args.L, (args.lo, args.hi), args.tol, n=args.grid_n)
                print(f"{b:.12g},{r.value:.12g},{r.bracket[0]:.12g},{r.bracket[1]:.12g}")
        else:
            L_values = [float(v) for v in args.L_values.split(",") if v.strip()]
            sweep = sweep_L(args.a, args.b, L_values, n=args.grid_n, threads=args.threads)
            print("L,barrier")
            for L, flag in sweep.entries:
                print(f"{L:.12g},{int(flag)}")
            if sweep.transition:
                print(f"# transition between L={sweep.transition[0]:.12g} "
                      f"and L={sweep.transition[1]:.12g}", file=sys.stderr)
    except LvControlError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
