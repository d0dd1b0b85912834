"""Slice-combination diameters against dual roughness for a few polygonal norms."""

import argparse
import math

from octanorm.norm2d import Lp, ParamAB
from octanorm.slices2d import deville_check

NORMS = {
    "lp:1": Lp(1),
    "lp:inf": Lp(math.inf),
    "ab:0.5,0": ParamAB(0.5, 0),
    "ab:0.3,0.6": ParamAB(0.3, 0.6),
    "ab:0.1,0.2": ParamAB(0.1, 0.2),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=int, nargs="+", default=[1, 2])
    ap.add_argument("--alpha", type=float, default=1e-3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'norm':>12} {'k':>2} {'slices':>10} {'roughness':>10} {'diff':>9}")
    for name, N in NORMS.items():
        for k in args.k:
            rep = deville_check(N, k=k, alpha=args.alpha, seed=args.seed)
            print(f"{name:>12} {k:2d} {rep.slice_value:10.6f} {rep.roughness_value:10.6f} "
                  f"{rep.difference:9.2e}")


if __name__ == "__main__":
    main()
