"""Command-line front end: ``octanorm <group> <command> [options]``.

Every command prints one JSON report (schema ``report_v1``) on stdout and, with
``--json PATH``, also writes it to ``PATH``.  Exit status is 2 for unparsable
or invalid input, 1 when a verification fails, 0 otherwise.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
import time

import numpy as np

from . import norm2d, props2d, roughness, slices2d
from . import seqspace as sq
from .config import TOL
from .polygon import ValidationError
from .report import dumps, make_report, write_atomic
from .specs import (
    SpecParseError,
    format_norm,
    format_space,
    parse_norm,
    parse_pair,
    parse_space,
    parse_vector,
    parse_vectors,
    vector_to_json,
)


class InputError(Exception):
    pass


class Outcome:
    """Results of one command plus whether its verification passed."""

    def __init__(self, inputs: dict, results, ok: bool = True, csv_rows=None, csv_header=None):
        self.inputs = inputs
        self.results = results
        self.ok = ok
        self.csv_rows = csv_rows
        self.csv_header = csv_header


def _norm(args):
    if args.norm is None:
        raise InputError("--norm is required")
    return parse_norm(args.norm)


def _space(args):
    if args.space is None:
        raise InputError("--space is required")
    return parse_space(args.space)


def _text_arg(value: str) -> str:
    """``@path`` reads the argument from a file."""
    if value.startswith("@"):
        with open(value[1:], encoding="utf-8") as fh:
            return fh.read()
    return value


def _budget(args, default):
    return default if args.budget is None else args.budget


def _tol(args, default):
    return default if args.tol is None else args.tol


# norm group


def cmd_norm_eval(args):
    N = _norm(args)
    v = parse_pair(args.point)
    return Outcome({"norm": format_norm(N), "point": list(v)}, {"value": norm2d.evaluate(N, v)})


def cmd_norm_dual(args):
    N = _norm(args)
    f = parse_pair(args.functional)
    return Outcome(
        {"norm": format_norm(N), "functional": list(f), "method": args.method},
        {"value": norm2d.dual_eval(N, f, method=args.method)},
    )


def cmd_norm_validate(args):
    N = _norm(args)
    rep = norm2d.validate(N, samples=args.samples, seed=args.seed, threshold=_tol(args, 1e-9))
    return Outcome({"norm": format_norm(N), "samples": args.samples}, rep, rep.passed)


def cmd_norm_gamma(args):
    N = _norm(args)
    return Outcome({"norm": format_norm(N)}, {"gamma": norm2d.gamma_inf(N)})


def cmd_norm_modulus(args):
    N = _norm(args)
    return Outcome(
        {"norm": format_norm(N), "eps": args.eps, "method": args.method},
        {
            "e1_extreme": norm2d.is_e1_extreme(N),
            "modulus": norm2d.exposedness_modulus(N, args.eps, method=args.method),
        },
    )


# check group


def cmd_check_pos_oh(args):
    N = _norm(args)
    v = props2d.check_pos_oh(N, method=args.method)
    return Outcome({"norm": format_norm(N), "method": args.method}, v)


def cmd_check_pos_sd2p(args):
    N = _norm(args)
    v = props2d.check_pos_sd2p(N, method=args.method)
    return Outcome({"norm": format_norm(N), "method": args.method}, v)


def cmd_check_duality(args):
    N = _norm(args)
    r = props2d.check_duality(N, method=args.method)
    return Outcome({"norm": format_norm(N), "method": args.method}, r, r.consistent)


# window group


def cmd_window_compute(args):
    W = props2d.lambda_window(args.a, args.b)
    res = {"window": W}
    if W.feasible:
        lam = props2d.find_lambda(args.a, args.b)
        res["lambda"] = lam
        res["gap"] = props2d.dsd2p_gap(args.a, args.b, lam)
    return Outcome({"a": args.a, "b": args.b}, res)


def cmd_window_verify(args):
    grid = args.grid
    if args.pairs:
        rng = np.random.default_rng(args.seed)
        pairs = [props2d.random_admissible(rng) for _ in range(args.pairs)]
    else:
        if args.a is None or args.b is None:
            raise InputError("give --a and --b, or --pairs")
        pairs = [(args.a, args.b)]
    reps = [props2d.verify_window(a, b, grid=grid) for a, b in pairs]
    total = sum(r.interior_mismatches for r in reps)
    res = {
        "pairs": [{"a": r.a, "b": r.b, "mismatches": r.mismatches,
                   "skipped_boundary": r.skipped_boundary} for r in reps],
        "interior_mismatches": total,
        "passed": total == 0,
    }
    inputs = {"grid": grid, "pairs": args.pairs, "a": args.a, "b": args.b}
    rows = [(repr(r.a), repr(r.b), r.interior_mismatches, r.skipped_boundary) for r in reps]
    return Outcome(inputs, res, total == 0, csv_rows=rows,
                   csv_header=["a", "b", "interior_mismatches", "skipped_boundary"])


# rough group


def _witness(args, S):
    if args.points is None:
        raise InputError("--points is required")
    pts = parse_vectors(S, _text_arg(args.points))
    weights = None if args.weights is None else [float(w) for w in args.weights.split(",")]
    return roughness.WitnessSet(S, tuple(pts), weights)


def cmd_rough_witness(args):
    S = _space(args)
    W = _witness(args, S)
    if args.direction is None:
        raise InputError("--direction is required")
    y = parse_vector(S, _text_arg(args.direction))
    return Outcome(
        {"space": format_space(S), "points": [vector_to_json(p) for p in W.points],
         "weights": W.weights, "direction": vector_to_json(y)},
        {"value": roughness.witness_value(W, y)},
    )


def cmd_rough_search(args):
    S = _space(args)
    W = _witness(args, S)
    budget = _budget(args, 4000)
    b = roughness.direction_search(W, budget=budget, seed=args.seed)
    return Outcome(
        {"space": format_space(S), "points": [vector_to_json(p) for p in W.points],
         "weights": W.weights, "budget": budget},
        {"lower": b.lower, "lower_direction": vector_to_json(b.lower_direction),
         "evaluations": b.evaluations},
    )


def cmd_rough_theorem_sum(args):
    S = _space(args)
    if not isinstance(S, sq.Sum):
        raise InputError("theorem-sum needs a sum(...) space")
    W = _witness(args, S)
    budget = _budget(args, 4000)
    r = roughness.theorem_sum_direction(S.N, S.left, S.right, W.points, eps=args.eps,
                                        budget=budget, seed=args.seed)
    ok = r.achieved >= r.predicted - _tol(args, 1e-6)
    res = {
        "branch": r.branch, "achieved": r.achieved, "predicted": r.predicted,
        "gamma": r.gamma, "delta_x": r.delta_x, "delta_y": r.delta_y, "c": r.c, "d": r.d,
        "functionals": r.functionals, "direction": vector_to_json(r.direction), "passed": ok,
    }
    return Outcome({"space": format_space(S), "points": [vector_to_json(p) for p in W.points],
                    "eps": args.eps, "budget": budget}, res, ok)


def cmd_rough_exact_delta(args):
    tol = _tol(args, 1e-3)
    budget = _budget(args, 4000)
    b, ok = roughness.exact_delta_report(args.p, tol=tol, budget=budget, seed=args.seed)
    res = {"lower": b.lower, "upper": b.upper, "width": b.width, "upper_source": b.upper_source,
           "lower_direction": vector_to_json(b.lower_direction), "passed": ok}
    return Outcome({"p": args.p, "tol": tol, "budget": budget}, res, ok)


def cmd_rough_fbound(args):
    rep = roughness.check_upper_inequality(args.p, args.eps, samples=args.samples,
                                           seed=args.seed, threshold=_tol(args, 1e-12))
    res = {"f_eps": roughness.f_eps(args.p, args.eps), "bound_coefficient":
           2 ** (1 - 1 / args.p) + roughness.f_eps(args.p, args.eps), "check": rep}
    return Outcome({"p": args.p, "eps": args.eps, "samples": args.samples}, res, rep.passed)


# slices group


def cmd_slices_min_diameter(args):
    N = _norm(args)
    r = slices2d.min_combo_diameter(N, k=args.k, alpha=args.alpha, grid=args.grid,
                                    collect_rows=args.csv is not None)
    rows = [
        [";".join(f"{f[0]!r}:{f[1]!r}" for f in fs), repr(alpha), ";".join(map(repr, lams)), repr(d)]
        for fs, alpha, lams, d in r.rows
    ]
    res = {"value": r.value, "functionals": r.functionals, "lambdas": r.lambdas,
           "n_functionals": r.n_functionals}
    return Outcome({"norm": format_norm(N), "k": args.k, "alpha": args.alpha, "grid": args.grid},
                   res, csv_rows=rows, csv_header=["functionals", "alpha", "lambdas", "diameter"])


def cmd_slices_deville(args):
    N = _norm(args)
    budget = _budget(args, 2000)
    r = slices2d.deville_check(N, k=args.k, alpha=args.alpha, grid=args.grid, budget=budget,
                               seed=args.seed, tol=_tol(args, slices2d.DEVILLE_TOL))
    return Outcome({"norm": format_norm(N), "k": args.k, "alpha": args.alpha, "grid": args.grid,
                    "budget": budget}, r, r.passed)


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=None, help="evaluation budget for searches")
    p.add_argument("--tol", type=float, default=None, help="verification tolerance")
    p.add_argument("--json", metavar="PATH", help="also write the report to PATH")
    p.add_argument("--csv", metavar="PATH", help="write bulk rows (where available) to PATH")
    p.add_argument("--timing", action="store_true", help="record wall-clock time in the report")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="octanorm", description=__doc__.splitlines()[0])
    groups = parser.add_subparsers(dest="group", required=True)

    def leaf(sub, name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func, command=name)
        return p

    def with_norm(p):
        p.add_argument("--norm", help="norm spec, e.g. lp:2, ab:0.5,0, dual(lp:1)")
        return p

    def with_space(p):
        p.add_argument("--space", help="space spec, e.g. sum(lp:2; leaf:1; leaf:1)")
        p.add_argument("--points", help="JSON list of vectors (or @file)")
        p.add_argument("--weights", help="comma-separated weights (default uniform)")
        return p

    method = dict(choices=["auto", "exact", "numeric"], default="auto")

    g = groups.add_parser("norm").add_subparsers(dest="command_name", required=True)
    p = with_norm(leaf(g, "eval", cmd_norm_eval, "evaluate N at a point"))
    p.add_argument("--point", required=True, help="a,b")
    p = with_norm(leaf(g, "dual", cmd_norm_dual, "evaluate the dual norm"))
    p.add_argument("--functional", required=True, help="c,d")
    p.add_argument("--method", choices=["auto", "numeric"], default="auto")
    p = with_norm(leaf(g, "validate", cmd_norm_validate, "property-check the norm axioms"))
    p.add_argument("--samples", type=int, default=10_000)
    with_norm(leaf(g, "gamma", cmd_norm_gamma, "1 / N(1,1)"))
    p = with_norm(leaf(g, "modulus", cmd_norm_modulus, "exposedness modulus at (1,0)"))
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--method", choices=["auto", "numeric"], default="auto")

    g = groups.add_parser("check").add_subparsers(dest="command_name", required=True)
    for name, func in (("pos-oh", cmd_check_pos_oh), ("pos-sd2p", cmd_check_pos_sd2p),
                       ("duality", cmd_check_duality)):
        p = with_norm(leaf(g, name, func, f"{name} checker"))
        p.add_argument("--method", **method)

    g = groups.add_parser("window").add_subparsers(dest="command_name", required=True)
    p = leaf(g, "compute", cmd_window_compute, "closed-form lambda window")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p = leaf(g, "verify", cmd_window_verify, "grid check of the window")
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--pairs", type=int, default=0, help="check this many seeded random (a,b)")
    p.add_argument("--grid", type=int, default=100_000)

    g = groups.add_parser("rough").add_subparsers(dest="command_name", required=True)
    p = with_space(leaf(g, "witness", cmd_rough_witness, "witness value of a direction"))
    p.add_argument("--direction", help="JSON vector (or @file)")
    with_space(leaf(g, "search", cmd_rough_search, "direction search lower bound"))
    p = with_space(leaf(g, "theorem-sum", cmd_rough_theorem_sum, "sum-theorem construction"))
    p.add_argument("--eps", type=float, default=1.0)
    p = leaf(g, "exact-delta", cmd_rough_exact_delta, "bracket 2^(1-1/p) in l1 (+)_p l1")
    p.add_argument("--p", type=float, required=True)
    p = leaf(g, "fbound", cmd_rough_fbound, "f(eps) and the upper-bound inequality")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--samples", type=int, default=10_000)

    g = groups.add_parser("slices").add_subparsers(dest="command_name", required=True)
    for name, func in (("min-diameter", cmd_slices_min_diameter), ("deville", cmd_slices_deville)):
        p = with_norm(leaf(g, name, func, name))
        p.add_argument("--k", type=int, default=2, choices=[1, 2, 3])
        p.add_argument("--alpha", type=float, default=1e-3)
        p.add_argument("--grid", type=int, default=None)
    return parser


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    timing = args.timing or os.environ.get("OCTANORM_TIMING") == "1"
    t0 = time.perf_counter()
    try:
        out = args.func(args)
    except SpecParseError as exc:
        print(f"octanorm: parse error: {exc}", file=stderr)
        return 2
    except (InputError, ValidationError, norm2d.PreconditionError, norm2d.DomainError,
            roughness.WitnessError, sq.ShapeError, ValueError, OSError) as exc:
        print(f"octanorm: invalid input: {exc}", file=stderr)
        return 2
    elapsed = (time.perf_counter() - t0) * 1000 if timing else None
    command = f"{args.group} {args.command}"
    text = dumps(make_report(command, out.inputs, out.results, args.seed, TOL, elapsed))
    try:
        if args.json:
            write_atomic(args.json, text)
        if args.csv and out.csv_rows is not None:
            write_atomic(args.csv, _csv_text(out.csv_header, out.csv_rows))
    except OSError as exc:
        print(f"octanorm: cannot write output: {exc}", file=stderr)
        return 2
    stdout.write(text)
    return 0 if out.ok else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
