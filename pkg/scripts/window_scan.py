"""Scan the lambda window over an (a, b) grid and print t1, t2 and the gap."""

import argparse
import csv
import sys

import numpy as np

from octanorm.props2d import dsd2p_gap, lambda_window, verify_window


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--steps", type=int, default=10, help="grid points per axis in [0, 0.9]")
    ap.add_argument("--verify-grid", type=int, default=0,
                    help="also run verify_window with this many lambdas (0 to skip)")
    args = ap.parse_args()

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["a", "b", "t1", "t2", "feasible", "min_gap_at_midpoints", "interior_mismatches"])
    vals = np.linspace(0, 0.9, args.steps)
    for a in vals:
        for b in vals:
            if a == 0 and b == 0:
                continue
            win = lambda_window(a, b)
            mids = [(i[0] + i[1]) / 2 for i in win.feasible]
            gap = min((dsd2p_gap(a, b, m) for m in mids), default=float("nan"))
            feas = " u ".join(f"({i[0]:.6f},{i[1]:.6f})" for i in win.feasible)
            mism = verify_window(a, b, args.verify_grid).interior_mismatches if args.verify_grid else ""
            w.writerow([f"{a:.4f}", f"{b:.4f}", f"{win.t1:.6f}", f"{win.t2:.6f}",
                        feas, f"{gap:.6f}", mism])


if __name__ == "__main__":
    main()
