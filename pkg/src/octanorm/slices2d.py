"""Planar slice geometry and the slice/roughness duality at desk scale.

Polygons here are float ``(m, 2)`` arrays of vertices in counter-clockwise
order.  Slices are closed: ``{x in B : f.x >= 1 - alpha}``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .norm2d import DualOf, PreconditionError, as_polygon, dual_eval, evaluate, subdiff2
from .roughness import RoughnessBracket

COLLINEAR_TOL = 1e-14
DEVILLE_TOL = 0.05
DEFAULT_GRID = {1: 256, 2: 128, 3: 24}


def _require_polygon(N):
    P = as_polygon(N)
    if P is None:
        raise PreconditionError(f"{N!r} is not polygonal")
    return P


def ball_polygon(N) -> np.ndarray:
    """Full symmetric unit ball of a polygonal norm, CCW from ``(1, 0)``."""
    q = np.array(_require_polygon(N).float_verts)
    quads = [q, q[::-1] * [-1, 1], q * [-1, -1], q[::-1] * [1, -1]]
    return canonical(np.concatenate(quads))


def canonical(P) -> np.ndarray:
    """Drop repeated and collinear vertices; keep CCW order.

    Degenerate inputs come back as a single point or a segment's two ends.
    """
    P = np.asarray(P, dtype=float).reshape(-1, 2)
    if len(P) == 0:
        return P
    scale = max(1.0, float(np.abs(P).max()))
    keep = [P[0]]
    for p in P[1:]:
        if np.abs(p - keep[-1]).max() > COLLINEAR_TOL * scale:
            keep.append(p)
    if len(keep) > 1 and np.abs(keep[0] - keep[-1]).max() <= COLLINEAR_TOL * scale:
        keep.pop()
    changed = True
    while changed and len(keep) > 2:
        changed = False
        for i in range(len(keep)):
            o, a, b = keep[i - 1], keep[i], keep[(i + 1) % len(keep)]
            cr = (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
            if abs(cr) <= COLLINEAR_TOL * scale * scale:
                del keep[i]
                changed = True
                break
    if len(keep) == 2 or (len(keep) > 2 and _area2(np.array(keep)) == 0):
        pts = np.array(keep)
        order = np.lexsort((pts[:, 1], pts[:, 0]))
        return pts[[order[0], order[-1]]]
    return np.array(keep)


def _area2(P) -> float:
    x, y = P[:, 0], P[:, 1]
    return float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


@dataclass(frozen=True)
class Slice2:
    norm: object
    functional: tuple
    alpha: float

    def __post_init__(self):
        _require_polygon(self.norm)
        f = tuple(float(v) for v in self.functional)
        if len(f) != 2 or not all(math.isfinite(v) for v in f):
            raise ValueError(f"functional must be two finite reals, got {self.functional!r}")
        nf = dual_eval(self.norm, f)
        if abs(nf - 1) > 1e-9:
            raise ValueError(f"functional has dual norm {nf!r}, expected 1")
        if not (0 < self.alpha <= 1):
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha!r}")
        object.__setattr__(self, "functional", f)
        object.__setattr__(self, "alpha", float(self.alpha))


@dataclass(frozen=True)
class ComboSpec:
    slices: tuple
    lambdas: tuple

    def __post_init__(self):
        sl = tuple(self.slices)
        lam = tuple(float(v) for v in self.lambdas)
        if not sl or len(sl) != len(lam):
            raise ValueError("need matching non-empty slices and weights")
        if any(s.norm != sl[0].norm for s in sl):
            raise ValueError("all slices must share one norm")
        if any(not v > 0 for v in lam) or abs(math.fsum(lam) - 1) > 1e-12:
            raise ValueError("weights must be positive and sum to 1")
        object.__setattr__(self, "slices", sl)
        object.__setattr__(self, "lambdas", lam)


def clip_halfplane(P, f, h) -> np.ndarray:
    """Part of the convex polygon ``P`` with ``f.x >= h``."""
    P = np.asarray(P, dtype=float)
    f = np.asarray(f, dtype=float)
    vals = P @ f - h
    out = []
    m = len(P)
    for i in range(m):
        p, q = P[i], P[(i + 1) % m]
        vp, vq = vals[i], vals[(i + 1) % m]
        if vp >= 0:
            out.append(p)
        if (vp >= 0) != (vq >= 0):
            t = vp / (vp - vq)
            out.append(p + t * (q - p))
    return canonical(np.array(out)) if out else np.zeros((0, 2))


def slice_polygon(s: Slice2) -> np.ndarray:
    out = clip_halfplane(ball_polygon(s.norm), s.functional, 1 - s.alpha)
    if len(out) == 0:
        raise ValueError("slice is empty")
    return out


def _start_lowest(P):
    i = int(np.lexsort((P[:, 0], P[:, 1]))[0])
    return np.roll(P, -i, axis=0)


def minkowski_sum(P, Q) -> np.ndarray:
    """Minkowski sum of convex polygons by merging edges in angular order."""
    P, Q = canonical(P), canonical(Q)
    if len(P) == 1:
        return Q + P[0]
    if len(Q) == 1:
        return P + Q[0]
    P, Q = _start_lowest(P), _start_lowest(Q)
    n, m = len(P), len(Q)
    P2 = np.concatenate([P, P[:2]])
    Q2 = np.concatenate([Q, Q[:2]])
    out = []
    i = j = 0
    while i < n or j < m:
        out.append(P2[i] + Q2[j])
        e, g = P2[i + 1] - P2[i], Q2[j + 1] - Q2[j]
        cr = e[0] * g[1] - e[1] * g[0]
        if i == n:
            cr = -1.0
        elif j == m:
            cr = 1.0
        if cr >= 0:
            i += 1
        if cr <= 0:
            j += 1
    return canonical(np.array(out))


def combo_polygon(c: ComboSpec) -> np.ndarray:
    acc = None
    for s, lam in zip(c.slices, c.lambdas):
        piece = lam * slice_polygon(s)
        acc = piece if acc is None else minkowski_sum(acc, piece)
    return acc


def _pairwise_norm(diffs: np.ndarray, M) -> np.ndarray:
    a, b = np.abs(diffs[..., 0]), np.abs(diffs[..., 1])
    P = as_polygon(M)
    if P is not None:
        nrm = np.array(P.float_normals)
        return np.max(a[..., None] * nrm[:, 0] + b[..., None] * nrm[:, 1], axis=-1)
    flat = [evaluate(M, (x, y)) for x, y in zip(a.ravel(), b.ravel())]
    return np.array(flat).reshape(a.shape)


def diameter(P, M) -> float:
    """``max M(u - v)`` over vertex pairs (attained at vertices by convexity)."""
    P = np.asarray(P, dtype=float).reshape(-1, 2)
    if len(P) <= 1:
        return 0.0
    diffs = P[:, None, :] - P[None, :, :]
    return float(_pairwise_norm(diffs, M).max())


def dual_sphere_functionals(N, grid: int) -> np.ndarray:
    """Grid over the dual sphere plus dual-ball vertices and dual-edge midpoints."""
    theta = 2 * np.pi * np.arange(grid) / grid
    raw = [np.stack([np.cos(theta), np.sin(theta)], axis=1)]
    D = ball_polygon(DualOf(N))
    raw.append(D)
    raw.append(0.5 * (D + np.roll(D, -1, axis=0)))
    cands = np.concatenate(raw)
    cands = cands / np.array([dual_eval(N, f) for f in cands])[:, None]
    _, idx = np.unique(np.round(cands, 12), axis=0, return_index=True)
    return cands[np.sort(idx)]


@dataclass(frozen=True)
class ComboResult:
    value: float
    functionals: tuple
    lambdas: tuple
    alpha: float
    k: int
    n_functionals: int
    rows: tuple = field(default=(), repr=False)


def min_combo_diameter(N, k: int = 2, alpha: float = 1e-3, grid: int | None = None,
                       collect_rows: bool = False) -> ComboResult:
    """Smallest diameter found over uniform combinations of ``k`` slices.

    Functional tuples run over combinations with replacement of the candidate
    set from :func:`dual_sphere_functionals`; the result is an upper bound on
    the true infimum.
    """
    if k not in (1, 2, 3):
        raise ValueError(f"k must be 1, 2 or 3, got {k!r}")
    _require_polygon(N)
    grid = DEFAULT_GRID[k] if grid is None else int(grid)
    F = dual_sphere_functionals(N, grid)
    lam = 1.0 / k
    pieces = [lam * slice_polygon(Slice2(N, tuple(f), alpha)) for f in F]
    best = (math.inf, None)
    rows = []
    for combo in itertools.combinations_with_replacement(range(len(F)), k):
        acc = pieces[combo[0]]
        for j in combo[1:]:
            acc = minkowski_sum(acc, pieces[j])
        dia = diameter(acc, N)
        if collect_rows:
            rows.append((tuple(tuple(F[j]) for j in combo), alpha, (lam,) * k, dia))
        if dia < best[0]:
            best = (dia, combo)
    dia, combo = best
    return ComboResult(dia, tuple(tuple(float(v) for v in F[j]) for j in combo),
                       (lam,) * k, float(alpha), k, len(F), tuple(rows))


def sphere_point(N, direction) -> np.ndarray:
    u = np.asarray(direction, dtype=float)
    return u / evaluate(N, u)


def subdiff_extremes(N, x) -> np.ndarray:
    """Extreme points of the full-plane subdifferential of ``N`` at ``x != 0``."""
    s = np.sign(x)
    out = []
    for c, d in subdiff2(N, (abs(x[0]), abs(x[1]))):
        for sc in ((s[0],) if s[0] else (1.0, -1.0)):
            for sd in ((s[1],) if s[1] else (1.0, -1.0)):
                out.append((sc * c, sd * d))
    return np.array(out)


def tau_2d(N, x, y) -> float:
    E = subdiff_extremes(N, np.asarray(x, dtype=float))
    proj = E @ np.asarray(y, dtype=float)
    return float(proj.max() - proj.min())


def _direction_candidates(N, point_extremes) -> np.ndarray:
    P = as_polygon(N)
    cands = [ball_polygon(N)] if P is not None else []
    for E in point_extremes:
        for e1, e2 in itertools.combinations(E, 2):
            g = e1 - e2
            if np.any(g):
                cands.append(np.array([[-g[1], g[0]], [g[1], -g[0]]]))
    if not cands:
        cands.append(np.array([[1.0, 0.0], [0.0, 1.0]]))
    D = np.concatenate(cands)
    return D / np.array([evaluate(N, d) for d in D])[:, None]


def witness_sup_2d(N, points, weights=None):
    """Exact ``sup`` over unit ``y`` of ``sum_i w_i tau(x_i, y)``.

    The objective is convex and positively homogeneous, so on a polygonal
    sphere it peaks at a ball vertex; kink directions are added for safety.
    Returns ``(value, direction)``.
    """
    pts = [np.asarray(p, dtype=float) for p in points]
    w = np.full(len(pts), 1.0 / len(pts)) if weights is None else np.asarray(weights, float)
    Es = [subdiff_extremes(N, p) for p in pts]
    D = _direction_candidates(N, Es)
    total = np.zeros(len(D))
    for wi, E in zip(w, Es):
        proj = D @ E.T
        total += wi * (proj.max(axis=1) - proj.min(axis=1))
    i = int(np.argmax(total))
    return float(total[i]), tuple(float(v) for v in D[i])


def _sphere_candidates(N, grid: int) -> np.ndarray:
    theta = 2 * np.pi * np.arange(grid) / grid
    raw = [np.stack([np.cos(theta), np.sin(theta)], axis=1)]
    if as_polygon(N) is not None:
        B = ball_polygon(N)
        raw += [B, 0.5 * (B + np.roll(B, -1, axis=0))]
    C = np.concatenate(raw)
    C = C / np.array([evaluate(N, c) for c in C])[:, None]
    _, idx = np.unique(np.round(C, 12), axis=0, return_index=True)
    return C[np.sort(idx)]


def roughness_2d(N, n_max: int = 2, budget: int = 2000, seed: int = 0,
                 grid: int = 32) -> RoughnessBracket:
    """Estimate ``inf`` over witness sets of size ``<= n_max`` of the exact direction sup.

    ``upper`` is the best (smallest) witness value found, an upper bound on
    the infimum; ``lower`` is the trivial certified bound 0.
    """
    if n_max not in (1, 2, 3, 4):
        raise ValueError(f"n_max must lie in 1..4, got {n_max!r}")
    rng = np.random.default_rng(seed)
    C = _sphere_candidates(N, grid)
    best = (math.inf, None, None)
    used = 0

    def consider(idx):
        nonlocal best, used
        used += 1
        val, y = witness_sup_2d(N, C[list(idx)])
        if val < best[0]:
            best = (val, tuple(tuple(float(v) for v in C[i]) for i in idx), y)

    for i in range(len(C)):
        consider((i,))
    for n in range(2, n_max + 1):
        for _ in range(max(0, (budget - used) // max(1, n_max - 1))):
            consider(tuple(int(i) for i in rng.choice(len(C), size=n, replace=True)))
            if used >= budget:
                break
    val, witness, y = best
    return RoughnessBracket(lower=0.0, lower_direction=None, upper=val,
                            upper_source="best witness set found (bounds the infimum from above)",
                            evaluations=used, witness=witness, witness_direction=y)


@dataclass(frozen=True)
class DevilleReport:
    k: int
    alpha: float
    slice_value: float
    roughness_value: float
    tolerance: float
    note: str = ("matched-budget heuristic: both values are upper estimates of "
                 "infima that the dual characterization says coincide")

    @property
    def difference(self) -> float:
        return abs(self.slice_value - self.roughness_value)

    @property
    def passed(self) -> bool:
        return self.difference <= self.tolerance


def deville_check(N, k: int = 2, alpha: float = 1e-3, grid: int | None = None,
                  budget: int = 2000, seed: int = 0, tol: float = DEVILLE_TOL) -> DevilleReport:
    """Compare slice-combination diameters of ``B_N`` with roughness of ``N*``."""
    _require_polygon(N)
    sl = min_combo_diameter(N, k, alpha, grid)
    rough = roughness_2d(DualOf(N), n_max=k, budget=budget, seed=seed)
    return DevilleReport(k, float(alpha), sl.value, rough.upper, tol)

