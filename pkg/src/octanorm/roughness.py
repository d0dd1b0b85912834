"""Average roughness in the sequence-space model.

``witness_value`` is the exact ray limit of the averaged symmetric difference
quotient.  ``direction_search`` maximizes it over directions and so certifies
a lower bound on the roughness of a witness set; upper bounds only ever come
from closed forms (``f_eps`` and the ``2^(1-1/p)`` limit).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import seqspace as sq
from .norm2d import Lp, gamma_inf, norming_functional
from .seqspace import Leaf, SparseVec, Sum

UNIT_TOL = 1e-9
WEIGHT_TOL = 1e-12
SIMPLEX_STEP = 64
TAU_MAX = 2.0


class WitnessError(ValueError):
    pass


@dataclass(frozen=True)
class WitnessSet:
    space: object
    points: tuple
    weights: tuple | None = None

    def __post_init__(self):
        pts = tuple(self.points)
        if not pts:
            raise WitnessError("a witness set needs at least one point")
        for i, x in enumerate(pts):
            sq.check_shape(self.space, x)
            nx = sq.norm(self.space, x)
            if abs(nx - 1) > UNIT_TOL:
                raise WitnessError(f"point {i} has norm {nx!r}, expected 1")
        object.__setattr__(self, "points", pts)
        if self.weights is not None:
            w = tuple(float(v) for v in self.weights)
            if len(w) != len(pts):
                raise WitnessError("weights and points differ in length")
            if any(not v > 0 for v in w):
                raise WitnessError("weights must be positive")
            if abs(math.fsum(w) - 1) > WEIGHT_TOL:
                raise WitnessError("weights must sum to 1")
            object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class RoughnessBracket:
    lower: float
    lower_direction: object
    upper: float | None = None
    upper_source: str = ""
    evaluations: int = 0
    witness: tuple | None = None
    witness_direction: tuple | None = None

    def __post_init__(self):
        if self.upper is not None and self.lower > self.upper + 1e-12:
            raise ValueError(f"lower {self.lower!r} exceeds upper {self.upper!r}")

    @property
    def width(self) -> float | None:
        return None if self.upper is None else self.upper - self.lower


def _average(values, weights) -> float:
    # uniform weights use fsum/n so that all-equal values come back exactly
    if weights is None:
        return math.fsum(values) / len(values)
    return math.fsum(w * v for w, v in zip(weights, values))


def weighted_tau(space, points, weights, y) -> float:
    """``sum_i w_i tau(x_i, y/||y||)``; points need not be unit (zero gives 2)."""
    ny = sq.norm(space, y)
    if ny == 0:
        raise WitnessError("zero direction")
    u = sq.scale(space, y, 1.0 / ny)
    return _average([sq.tau(space, x, u) for x in points], weights)


def witness_value(W: WitnessSet, y) -> float:
    sq.check_shape(W.space, y)
    return weighted_tau(W.space, W.points, W.weights, y)


def _compositions(total: int, parts: int):
    """All tuples of ``parts`` non-negative ints summing to ``total``, lex order."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _simplex_step(n_leaves: int, budget: int) -> int:
    """Finest grid denominator ``<= SIMPLEX_STEP`` whose simplex fits in ``budget``."""
    m = SIMPLEX_STEP
    while m > 1 and math.comb(m + n_leaves - 1, n_leaves - 1) > budget:
        m //= 2
    return m


class _Search:
    """Shared state for one deterministic maximization run."""

    def __init__(self, space, points, weights, budget):
        self.space = space
        self.points = points
        self.weights = weights
        self.budget = budget
        self.used = 0
        self.best = -math.inf
        self.best_coords: dict = {}
        self.paths = [path for path, _ in sq.leaves(space)]
        self.fresh = {
            path: sq.fresh_index([sq.at(x, path) for x in points]) for path in self.paths
        }
        self.coords = []
        for path in self.paths:
            support = set()
            for x in points:
                support |= set(sq.at(x, path))
            for i in sorted(support | {self.fresh[path]}):
                self.coords.append((path, i))

    def vector(self, coords: dict):
        parts: dict = {}
        for (path, i), v in coords.items():
            parts.setdefault(path, {})[i] = v
        return sq.from_leaves(self.space, {p: SparseVec(d) for p, d in parts.items()})

    @property
    def done(self) -> bool:
        return self.used >= self.budget or self.best >= TAU_MAX

    def offer(self, coords: dict) -> bool:
        """Evaluate a candidate; keeps it only on strict improvement."""
        if self.done:
            return False
        y = self.vector(coords)
        if sq.norm(self.space, y) == 0:
            return False
        self.used += 1
        val = weighted_tau(self.space, self.points, self.weights, y)
        if val > self.best:
            self.best, self.best_coords = val, dict(coords)
            return True
        return False


def _run_search(space, points, weights, budget: int, seed: int):
    if budget < 1:
        raise ValueError("budget must be at least 1")
    rng = np.random.default_rng(seed)
    s = _Search(space, points, weights, budget)
    L = len(s.paths)

    # fresh-coordinate splits across leaves
    m = _simplex_step(L, max(1, budget // 2))
    for comp in _compositions(m, L):
        s.offer({(p, s.fresh[p]): k / m for p, k in zip(s.paths, comp) if k})
        if s.done:
            break

    for c in s.coords:
        s.offer({c: 1.0})

    n_random = max(0, (budget - s.used) // 2)
    for _ in range(n_random):
        if s.done:
            break
        k = int(rng.integers(1, min(len(s.coords), 4) + 1))
        idx = rng.choice(len(s.coords), size=k, replace=False)
        vals = rng.standard_normal(k)
        s.offer({s.coords[int(j)]: float(v) for j, v in zip(idx, vals)})

    # coordinate-ascent polish around the incumbent
    step = 0.5
    while not s.done and step > 1e-6 and s.best_coords:
        improved = False
        scale = max(abs(v) for v in s.best_coords.values())
        for c, sign in itertools.product(s.coords, (1.0, -1.0)):
            trial = dict(s.best_coords)
            trial[c] = trial.get(c, 0.0) + sign * step * scale
            if s.offer(trial):
                improved = True
            if s.done:
                break
        if not improved:
            step /= 2
    direction = s.vector(s.best_coords)
    direction = sq.scale(space, direction, 1.0 / sq.norm(space, direction))
    return s.best, direction, s.used


def search_points(space, points, weights, budget: int = 4000, seed: int = 0):
    """Maximize ``weighted_tau`` over directions; returns ``(value, unit direction, evals)``.

    Points are arbitrary vectors of ``space`` (non-unit and zero allowed), which
    is what the factor problems of a sum produce.
    """
    points = tuple(points)
    for x in points:
        sq.check_shape(space, x)
    return _run_search(space, points, weights, budget, seed)


def direction_search(W: WitnessSet, budget: int = 4000, seed: int = 0) -> RoughnessBracket:
    val, y, used = _run_search(W.space, W.points, W.weights, budget, seed)
    return RoughnessBracket(lower=val, lower_direction=y, evaluations=used)


@dataclass(frozen=True)
class TheoremResult:
    branch: str
    direction: object
    achieved: float
    predicted: float
    gamma: float
    delta_x: float | None
    delta_y: float | None
    c: float
    d: float
    functionals: tuple = field(default=())


def theorem_sum_direction(N, space_x, space_y, pairs, eps: float = 1.0,
                          budget: int = 4000, seed: int = 0) -> TheoremResult:
    """Direction on ``X (+)_N Y`` built from factor directions as in the sum theorem.

    ``pairs`` are ``(x_i, y_i)`` with ``N(||x_i||, ||y_i||) = 1``.  Each pair gets
    a norming functional ``(c_i, d_i)``; the factor problems are reweighted by
    ``mu_i = c_i / (n c)`` and ``nu_i = d_i / (n d)`` and solved by
    :func:`search_points`.  The returned direction has factor norms ``eps``.
    """
    pairs = [tuple(z) for z in pairs]
    if not pairs:
        raise WitnessError("no paired points")
    Z = Sum(N, space_x, space_y)
    W = WitnessSet(Z, tuple(pairs))
    n = len(pairs)
    fs = []
    for x, y in pairs:
        fs.append(norming_functional(N, (sq.norm(space_x, x), sq.norm(space_y, y))))
    c = math.fsum(f[0] for f in fs) / n
    d = math.fsum(f[1] for f in fs) / n
    gamma = gamma_inf(N)
    xs = [x for x, _ in pairs]
    ys = [y for _, y in pairs]

    dx = dy = None
    if c == 0:
        branch = "c=0"
        dy, uy, _ = search_points(space_y, ys, None, budget, seed)
        z = (sq.zero(space_x), sq.scale(space_y, uy, eps))
        predicted = dy
    elif d == 0:
        branch = "d=0"
        dx, ux, _ = search_points(space_x, xs, None, budget, seed)
        z = (sq.scale(space_x, ux, eps), sq.zero(space_y))
        predicted = dx
    else:
        branch = "main"
        mu = [f[0] / (n * c) for f in fs]
        nu = [f[1] / (n * d) for f in fs]
        # zero-weight points drop out of the factor problems
        px = [(x, w) for x, w in zip(xs, mu) if w > 0]
        py = [(y, w) for y, w in zip(ys, nu) if w > 0]
        dx, ux, _ = search_points(space_x, [p for p, _ in px], [w for _, w in px], budget, seed)
        dy, uy, _ = search_points(space_y, [p for p, _ in py], [w for _, w in py], budget, seed + 1)
        z = (sq.scale(space_x, ux, eps), sq.scale(space_y, uy, eps))
        predicted = gamma * min(dx, dy)
    achieved = witness_value(W, z)
    return TheoremResult(branch, z, achieved, predicted, gamma, dx, dy, c, d,
                         tuple((float(a), float(b)) for a, b in fs))


def l1_sum_direction(space_x, space_y, pairs, budget: int = 4000, seed: int = 0):
    """Direction ``(x, 0)`` on ``X (+)_1 Y`` from a search on the X-parts alone.

    Returns ``(direction, achieved, x_value)``; the two values coincide because
    the l1 sum passes the X-side quotient through unchanged.
    """
    pairs = [tuple(z) for z in pairs]
    Z = Sum(Lp(1), space_x, space_y)
    W = WitnessSet(Z, tuple(pairs))
    xs = [x for x, _ in pairs]
    x_value, ux, _ = search_points(space_x, xs, None, budget, seed)
    z = (ux, sq.zero(space_y))
    return z, witness_value(W, z), x_value


def f_eps(p: float, eps: float) -> float:
    """Error term of the upper bound ``2^(1-1/p) + f(eps)`` for the l1 (+)_p l1 model."""
    p, eps = float(p), float(eps)
    if not (1 < p < math.inf):
        raise ValueError(f"p must lie in (1, inf), got {p!r}")
    if not (0 < eps < 1):
        raise ValueError(f"eps must lie in (0, 1), got {eps!r}")
    tail = eps ** (p - 1) / p
    if p <= 2:
        return (p - 1) / 2 * eps + tail
    return (p - 1) * 2 ** (p - 2 / p - 2) * eps + tail


def two_point_model(p: float):
    """``l1 (+)_p l1`` with witnesses ``(e0, 0)`` and ``(0, e0)``."""
    S = Sum(Lp(p), Leaf(1), Leaf(1))
    e0 = SparseVec({0: 1.0})
    return S, ((e0, SparseVec()), (SparseVec(), e0))


@dataclass(frozen=True)
class InequalityReport:
    p: float
    eps: float
    samples: int
    violations: int
    max_violation: float
    min_slack: float
    threshold: float = 1e-12

    @property
    def passed(self) -> bool:
        return self.violations == 0


def _random_sparse(rng, max_index: int) -> SparseVec:
    k = int(rng.integers(0, 4))
    idx = rng.choice(max_index, size=k, replace=False)
    return SparseVec({int(i): float(v) for i, v in zip(idx, rng.standard_normal(k))})


def check_upper_inequality(p: float, eps: float, samples: int = 10_000, seed: int = 0,
                           threshold: float = 1e-12) -> InequalityReport:
    """Sample ``z`` with ``||z|| = eps`` and test
    ``(1/2) sum_j (||z_j + z|| + ||z_j - z||) <= (2^(1-1/p) + f(eps)) ||z|| + 2``."""
    f = f_eps(p, eps)
    S, (z1, z2) = two_point_model(p)
    rng = np.random.default_rng(seed)
    bound_coef = 2 ** (1 - 1 / p) + f
    worst = -math.inf
    min_slack = math.inf
    bad = 0
    done = 0
    while done < samples:
        z = (_random_sparse(rng, 4), _random_sparse(rng, 4))
        nz = sq.norm(S, z)
        if nz == 0:
            continue
        z = sq.scale(S, z, eps / nz)
        nz = sq.norm(S, z)
        lhs = 0.5 * math.fsum(
            sq.norm(S, sq.add(S, zj, sq.scale(S, z, sgn))) for zj in (z1, z2) for sgn in (1.0, -1.0)
        )
        slack = bound_coef * nz + 2 - lhs
        min_slack = min(min_slack, slack)
        worst = max(worst, -slack)
        if -slack > threshold:
            bad += 1
        done += 1
    return InequalityReport(p, eps, samples, bad, max(worst, 0.0), min_slack, threshold)


def exact_delta_report(p: float, tol: float = 1e-3, budget: int = 4000, seed: int = 0):
    """Bracket the roughness of the two-point witness in ``l1 (+)_p l1``.

    Returns ``(bracket, passed)``; ``passed`` means width ``<= tol``.
    """
    p = float(p)
    if not (1 < p < math.inf):
        raise ValueError(f"p must lie in (1, inf), got {p!r}")
    S, pts = two_point_model(p)
    lower = direction_search(WitnessSet(S, pts), budget=budget, seed=seed)
    upper = 2 ** (1 - 1 / p)
    b = RoughnessBracket(lower.lower, lower.lower_direction, upper,
                         "limit of 2^(1-1/p) + f(eps) as eps -> 0", lower.evaluations)
    return b, b.width <= tol
