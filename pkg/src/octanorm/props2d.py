"""Positive octahedrality, the positive strong diameter 2 property, and the
lambda-window behind the failure of the diametral SD2P for absolute sums.

Exact checkers work on the polygon lowering; numeric checkers exist for every
norm and are required to agree with the exact ones on polygons.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .config import TOL, Tolerances
from .norm2d import (
    DualOf,
    ParamAB,
    PreconditionError,
    as_polygon,
    evaluate,
    upper_boundary,
)
from .numerics import bisect_last_true, golden_max
from .polygon import ONE, ZERO


class Property(str, Enum):
    POS_OH = "PosOH"
    POS_SD2P = "PosSD2P"


class Method(str, Enum):
    EXACT = "Exact"
    NUMERIC = "Numeric"


@dataclass(frozen=True)
class PropertyVerdict:
    property: Property
    verdict: bool
    witness: tuple[float, float] | None
    residual: float
    method: Method


def _pos_oh_objective(N, w) -> float:
    c, d = w
    return max(2 - evaluate(N, (1 + c, d)), 2 - evaluate(N, (c, 1 + d)))


def check_pos_oh(N, method: str = "auto", tol: Tolerances = TOL, grid: int = 1024) -> PropertyVerdict:
    """Is there a sphere point ``w`` with ``N((1,0)+w) = N((0,1)+w) = 2``?

    On a polygon this happens iff the face through ``(1,0)`` meets the face
    through ``(0,1)``, i.e. the first-quadrant chain has at most two edges.
    """
    P = as_polygon(N) if method in ("auto", "exact") else None
    if method == "exact" and P is None:
        raise PreconditionError("exact path needs a polygonal norm")
    if P is not None:
        if P.n_edges <= 2:
            w = P.verts[0] if P.n_edges == 1 else P.verts[1]
            return PropertyVerdict(Property.POS_OH, True, (float(w[0]), float(w[1])), 0.0, Method.EXACT)
        best = min(_pos_oh_objective(N, (float(x), float(y))) for x, y in P.verts)
        return PropertyVerdict(Property.POS_OH, False, None, max(best, 0.0), Method.EXACT)

    def g(a):
        return _pos_oh_objective(N, (a, upper_boundary(N, a, tol=tol)))

    xs = np.linspace(0.0, 1.0, grid + 1)
    vals = [g(float(a)) for a in xs]
    k = int(np.argmin(vals))
    lo, hi = float(xs[max(k - 1, 0)]), float(xs[min(k + 1, grid)])
    a_best, neg = golden_max(lambda a: -g(a), lo, hi, tol.golden)
    res = -neg
    if vals[k] < res:
        a_best, res = float(xs[k]), vals[k]
    res = max(res, 0.0)
    ok = res <= tol.verdict
    witness = (a_best, upper_boundary(N, a_best, tol=tol)) if ok else None
    return PropertyVerdict(Property.POS_OH, ok, witness, res, Method.NUMERIC)


def check_pos_oh_points(N, points, witness) -> float:
    """Largest defect ``2 - N(p + w)`` over the given positive sphere points."""
    return max(2 - evaluate(N, (p[0] + witness[0], p[1] + witness[1])) for p in points)


def check_pos_sd2p(N, method: str = "auto", tol: Tolerances = TOL) -> PropertyVerdict:
    """Are there ``a, b >= 0`` with ``N(a,1) = N(1,b) = 1`` and the midpoint of
    ``(a,1)`` and ``(1,b)`` on the sphere?

    On a polygon: some edge starts at a vertex with ``x = 1`` and ends at a
    vertex with ``y = 1``.  The witness takes the largest admissible ``a`` and
    ``b`` on the first such edge.
    """
    P = as_polygon(N) if method in ("auto", "exact") else None
    if method == "exact" and P is None:
        raise PreconditionError("exact path needs a polygonal norm")
    if P is not None:
        V = P.verts
        for k in range(len(V) - 1):
            (xk, yk), (xn, yn) = V[k], V[k + 1]
            if xk == ONE and yn == ONE:
                b = yn if xn == ONE else yk
                a = xk if yk == ONE else xn
                return PropertyVerdict(Property.POS_SD2P, True, (float(a), float(b)), 0.0, Method.EXACT)
        a = max(x for x, y in V if y == ONE)
        b = max(y for x, y in V if x == ONE)
        mid = evaluate(N, (float(1 + a) / 2, float(1 + b) / 2))
        return PropertyVerdict(Property.POS_SD2P, False, None, 1 - mid, Method.EXACT)

    # N(a,1) = 1 exactly on an initial segment [0, a_max]; the midpoint norm
    # is monotone in (a, b), so the extreme pre-images decide the property
    a = bisect_last_true(lambda t: evaluate(N, (t, 1.0)) <= 1 + tol.bisection, 0.0, 1.0, tol.bisection)
    b = bisect_last_true(lambda t: evaluate(N, (1.0, t)) <= 1 + tol.bisection, 0.0, 1.0, tol.bisection)
    mid = evaluate(N, ((1 + a) / 2, (1 + b) / 2))
    res = max(1 - mid, 0.0)
    ok = res <= tol.verdict
    return PropertyVerdict(Property.POS_SD2P, ok, (a, b) if ok else None, res, Method.NUMERIC)


@dataclass(frozen=True)
class DualityResult:
    consistent: bool
    sd2p: PropertyVerdict
    oh_of_dual: PropertyVerdict
    witness_norms_midpoint: bool | None


def check_duality(N, method: str = "auto", tol: Tolerances = TOL) -> DualityResult:
    """Compare pos-SD2P of ``N`` with pos-OH of its dual.

    When both hold, also confirm that the octahedrality witness ``(c, d)``
    norms the midpoint ``((1+a)/2, (1+b)/2)``.
    """
    s = check_pos_sd2p(N, method, tol)
    o = check_pos_oh(DualOf(N), method, tol)
    norms_mid = None
    if s.verdict and o.verdict:
        (a, b), (c, d) = s.witness, o.witness
        norms_mid = abs(c * (1 + a) / 2 + d * (1 + b) / 2 - 1) <= 1e-9
    consistent = s.verdict == o.verdict and norms_mid is not False
    return DualityResult(consistent, s, o, norms_mid)


def _intersect(i, j):
    """Intersection of two intervals ``(lo, hi, lo_closed, hi_closed)``, or None."""
    if i[0] != j[0]:
        lo, lc = (i[0], i[2]) if i[0] > j[0] else (j[0], j[2])
    else:
        lo, lc = i[0], i[2] and j[2]
    if i[1] != j[1]:
        hi, hc = (i[1], i[3]) if i[1] < j[1] else (j[1], j[3])
    else:
        hi, hc = i[1], i[3] and j[3]
    if lo < hi or (lo == hi and lc and hc):
        return (lo, hi, lc, hc)
    return None


@dataclass(frozen=True)
class LambdaWindow:
    """Closed-form boundary values for the lambda of the DSD2P argument.

    Intervals are ``(lo, hi, lo_closed, hi_closed)``.  ``feasible`` is the set
    where both closed-form conditions hold (the max-term identification and
    the strict inequality); ``positive`` is the full set where the gap
    ``dsd2p_gap`` is positive, which contains ``feasible``.
    """

    a: float
    b: float
    lo: float
    hi: float
    t1: float
    t2: float
    feasible: tuple = field(default=())
    positive: tuple = field(default=())

    def in_feasible(self, lam: float) -> bool:
        return _member(self.feasible, lam)

    def in_positive(self, lam: float) -> bool:
        return _member(self.positive, lam)


def _member(intervals, x) -> bool:
    for lo, hi, lc, hc in intervals:
        if (lo < x or (lc and x == lo)) and (x < hi or (hc and x == hi)):
            return True
    return False


def _admissible(a: float, b: float):
    if not (0 <= a < 1 and 0 <= b < 1) or (a == 0 and b == 0):
        raise PreconditionError(f"(a, b) = ({a}, {b}) is not admissible")


def lambda_window(a: float, b: float) -> LambdaWindow:
    a, b = float(a), float(b)
    _admissible(a, b)
    lo = a / (2 + a - a * b)
    hi = (2 - a * b) / (2 + b - a * b)
    t1 = a / (1 + a)
    t2 = 1 / (1 + b)
    strict = []
    if t1 > 0:
        strict.append((0.0, t1, False, False))
    if t2 < 1:
        strict.append((t2, 1.0, False, False))
    feasible = [iv for s in strict if (iv := _intersect((lo, hi, True, True), s))]
    return LambdaWindow(a, b, lo, hi, t1, t2, tuple(feasible), tuple(strict))


def dsd2p_gap(a: float, b: float, lam: float) -> float:
    """``1 + N(lam, 1-lam) - N(2 lam + (1-lam) a, 2(1-lam) + lam b)`` for ``ParamAB(a, b)``."""
    _admissible(a, b)
    if not 0 < lam < 1:
        raise PreconditionError(f"lambda must lie in (0, 1), got {lam}")
    N = ParamAB(a, b)
    c = 2 * lam + (1 - lam) * a
    d = 2 * (1 - lam) + lam * b
    return 1 + evaluate(N, (lam, 1 - lam)) - evaluate(N, (c, d))


@dataclass
class WindowReport:
    a: float
    b: float
    grid: int
    window: LambdaWindow
    mismatches: dict
    skipped_boundary: int

    @property
    def interior_mismatches(self) -> int:
        return sum(self.mismatches.values())

    @property
    def passed(self) -> bool:
        return self.interior_mismatches == 0


def verify_window(a: float, b: float, grid: int = 100_000, slack: float = 1e-12) -> WindowReport:
    """Scan ``lambda`` over a uniform grid of ``(0, 1)`` and check

    * ``identified``: the third term is the max of ``N(c, d)`` iff ``lo <= lam <= hi``;
    * ``strict``: the third term is below ``1 + N(lam, 1-lam)`` iff ``lam < t1`` or ``lam > t2``;
    * ``sign``: the gap is positive iff ``lam`` lies in ``window.positive``;
    * ``feasible``: the gap is positive everywhere on ``window.feasible``.

    Grid points within two grid steps of a boundary value are skipped.  A
    zero gap (equality up to ``slack``) counts as not positive.
    """
    W = lambda_window(a, b)
    lam = np.arange(1, grid) / grid
    c = 2 * lam + (1 - lam) * a
    d = 2 * (1 - lam) + lam * b
    third = ((1 - b) * c + (1 - a) * d) / (1 - a * b)
    n_cd = np.maximum(np.maximum(c, d), third)
    n_lam = np.maximum(np.maximum(lam, 1 - lam), ((1 - b) * lam + (1 - a) * (1 - lam)) / (1 - a * b))
    gap = 1 + n_lam - n_cd
    near = np.zeros_like(lam, dtype=bool)
    for v in (W.lo, W.hi, W.t1, W.t2):
        near |= np.abs(lam - v) <= 2.0 / grid
    keep = ~near

    def member(intervals):
        m = np.zeros_like(lam, dtype=bool)
        for lo, hi, lc, hc in intervals:
            m |= ((lam > lo) | (lc & (lam == lo))) & ((lam < hi) | (hc & (lam == hi)))
        return m

    identified = third >= np.maximum(c, d)
    in_lohi = (lam >= W.lo) & (lam <= W.hi)
    strict = third < 1 + n_lam - slack
    in_strict = (lam < W.t1) | (lam > W.t2)
    positive = gap > slack
    mism = {
        "identified": int(np.sum((identified != in_lohi) & keep)),
        "strict": int(np.sum((strict != in_strict) & keep)),
        "sign": int(np.sum((positive != member(W.positive)) & keep)),
        "feasible": int(np.sum(member(W.feasible) & ~positive & keep)),
    }
    return WindowReport(a, b, grid, W, mism, int(np.sum(near)))


def find_lambda(a: float, b: float) -> float:
    """A lambda with positive gap: the midpoint of the first feasible interval."""
    W = lambda_window(a, b)
    lo, hi, _, _ = W.feasible[0]
    return 0.5 * (lo + hi)


def random_admissible(rng) -> tuple[float, float]:
    while True:
        a, b = (float(x) for x in rng.uniform(0, 1, 2))
        if rng.uniform() < 0.2:
            a = 0.0
        elif rng.uniform() < 0.25:
            b = 0.0
        if not (a == 0 and b == 0):
            return a, b

