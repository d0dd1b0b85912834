"""Roughness brackets for the two-point witness in l1 (+)_p l1, with f(eps)."""

import argparse

from octanorm.roughness import check_upper_inequality, exact_delta_report, f_eps


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=float, nargs="+", default=[1.25, 1.5, 2, 3, 5])
    ap.add_argument("--eps", type=float, nargs="+", default=[0.05, 0.1, 0.5])
    ap.add_argument("--samples", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'p':>6} {'lower':>12} {'2^(1-1/p)':>12} {'width':>9}")
    for p in args.p:
        b, _ = exact_delta_report(p, seed=args.seed)
        print(f"{p:6g} {b.lower:12.9f} {b.upper:12.9f} {b.width:9.1e}")
    print()
    print(f"{'p':>6} {'eps':>6} {'f(eps)':>12} {'violations':>10} {'min slack':>10}")
    for p in args.p:
        for eps in args.eps:
            rep = check_upper_inequality(p, eps, samples=args.samples, seed=args.seed)
            print(f"{p:6g} {eps:6g} {f_eps(p, eps):12.8f} {rep.violations:10d} {rep.min_slack:10.2e}")


if __name__ == "__main__":
    main()
