"""Scalar search routines used by the numeric (non-polygon) paths."""

from __future__ import annotations

import math

INV_PHI = (math.sqrt(5) - 1) / 2


def bisect_last_true(pred, lo: float, hi: float, width: float) -> float:
    """Largest ``t`` in ``[lo, hi]`` with ``pred(t)`` true, assuming ``pred`` is
    true on an initial segment and ``pred(lo)`` holds."""
    if pred(hi):
        return hi
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if pred(mid):
            lo = mid
        else:
            hi = mid
    return lo


def golden_max(f, lo: float, hi: float, tol: float):
    """Maximize a unimodal ``f`` on ``[lo, hi]``; returns ``(argmax, max)``.

    The endpoints are compared at the end so a maximum sitting on the
    boundary is reported exactly.
    """
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    best = max(((c, fc), (d, fd), (lo, f(lo)), (hi, f(hi))), key=lambda t: t[1])
    return best
