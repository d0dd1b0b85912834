"""Absolute normalized norms on the plane and their duality calculus.

Four representations are supported:

* :class:`Lp` -- the ``p``-norms, ``p`` in ``[1, inf]``;
* :class:`ParamAB` -- ``max{|c|, |d|, ((1-b)|c| + (1-a)|d|) / (1-ab)}``, the
  polygon with vertices ``(1,0), (1,b), (a,1), (0,1)``;
* :class:`~octanorm.polygon.Polygon2` -- an arbitrary polygonal ball;
* :class:`DualOf` -- the dual norm of another representation.

Polygonal inputs (``Lp(1)``, ``Lp(inf)``, ``ParamAB``, polygons and their
duals) are lowered to :class:`Polygon2` for every exact computation; the
closed forms are fast paths.  A generic numeric path (bisection for the
sphere, golden section for the dual norm) is kept for cross-checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .config import TOL, Tolerances
from .numerics import bisect_last_true, golden_max
from .polygon import ONE, ZERO, Polygon2, ValidationError, as_fraction

__all__ = [
    "Lp",
    "ParamAB",
    "DualOf",
    "Polygon2",
    "AbsNorm2",
    "DomainError",
    "PreconditionError",
    "ValidationError",
    "evaluate",
    "upper_boundary",
    "dual_eval",
    "polygon_polar",
    "as_polygon",
    "simplify",
    "dual_exponent",
    "norming_functional",
    "subdiff2",
    "is_e1_extreme",
    "exposedness_modulus",
    "gamma_inf",
    "validate",
    "ValidationReport",
]


class DomainError(ValueError):
    """Non-finite input to a norm."""


class PreconditionError(ValueError):
    """An operation was called outside its documented domain."""


class _Callable:
    def __call__(self, a, b) -> float:
        return evaluate(self, (a, b))


@dataclass(frozen=True)
class Lp(_Callable):
    p: float

    def __post_init__(self):
        p = float(self.p)
        if math.isnan(p) or p < 1:
            raise ValidationError(f"p must lie in [1, inf], got {self.p!r}")
        object.__setattr__(self, "p", p)


@dataclass(frozen=True)
class ParamAB(_Callable):
    a: float
    b: float

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not (0 <= a < 1 and 0 <= b < 1):
            raise ValidationError(f"need a, b in [0, 1), got ({a}, {b})")
        if a == 0 and b == 0:
            raise ValidationError("ParamAB(0, 0) is the l-infinity norm; use Lp(inf)")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)


@dataclass(frozen=True)
class DualOf(_Callable):
    base: "AbsNorm2"


AbsNorm2 = Lp | ParamAB | Polygon2 | DualOf


def dual_exponent(p: float) -> float:
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1)


def _lp(p: float, a: float, b: float) -> float:
    a, b = abs(a), abs(b)
    if math.isinf(p):
        return max(a, b)
    if p == 1:
        return a + b
    m = max(a, b)
    if m == 0:
        return 0.0
    return m * ((a / m) ** p + (b / m) ** p) ** (1 / p)


def _check_pair(v) -> tuple[float, float]:
    a, b = v
    a, b = float(a), float(b)
    if not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError(f"non-finite input {v!r}")
    return a, b


_LINF = Polygon2(((1, 0), (1, 1), (0, 1)))
_L1 = Polygon2(((1, 0), (0, 1)))


@lru_cache(maxsize=1024)
def as_polygon(N) -> Polygon2 | None:
    """Exact polygon lowering, or ``None`` for a strictly convex ``Lp``."""
    if isinstance(N, Polygon2):
        return N
    if isinstance(N, ParamAB):
        a, b = as_fraction(N.a), as_fraction(N.b)
        return Polygon2(((ONE, ZERO), (ONE, b), (a, ONE), (ZERO, ONE)))
    if isinstance(N, Lp):
        if N.p == 1:
            return _L1
        if math.isinf(N.p):
            return _LINF
        return None
    if isinstance(N, DualOf):
        base = as_polygon(N.base)
        return None if base is None else base.polar()
    raise TypeError(f"not a norm: {N!r}")


def simplify(N) -> Lp | Polygon2:
    """Canonical exact form: a polygon, or ``Lp`` with ``1 < p < inf``."""
    poly = as_polygon(N)
    if poly is not None:
        return poly
    if isinstance(N, Lp):
        return N
    if isinstance(N, DualOf):
        inner = simplify(N.base)
        return Lp(dual_exponent(inner.p))
    raise TypeError(f"not a norm: {N!r}")


def polygon_polar(P: Polygon2) -> Polygon2:
    """First-quadrant chain of the dual ball.

    Each primal edge on the line ``c*x + d*y = 1`` becomes the dual vertex
    ``(c, d)``.
    """
    return P.polar()


def evaluate(N, v) -> float:
    a, b = _check_pair(v)
    a, b = abs(a), abs(b)
    if isinstance(N, Lp):
        return _lp(N.p, a, b)
    if isinstance(N, ParamAB):
        s = ((1 - N.b) * a + (1 - N.a) * b) / (1 - N.a * N.b)
        return max(a, b, s)
    if isinstance(N, Polygon2):
        return max(c * a + d * b for c, d in N.float_normals)
    if isinstance(N, DualOf):
        return dual_eval(N.base, (a, b))
    raise TypeError(f"not a norm: {N!r}")


def upper_boundary(N, a: float, method: str = "auto", tol: Tolerances = TOL) -> float:
    """``max{b >= 0 : N(a, b) <= 1}`` for ``0 <= a <= 1``."""
    a = float(a)
    if not 0 <= a <= 1:
        raise PreconditionError(f"a must lie in [0, 1], got {a}")
    if method == "auto":
        if isinstance(N, Lp):
            if math.isinf(N.p):
                return 1.0
            if N.p == 1:
                return 1.0 - a
            return (1.0 - a**N.p) ** (1 / N.p) if a < 1 else 0.0
        if isinstance(N, (ParamAB, Polygon2)):
            return float(as_polygon(N).height(a))
    elif method != "numeric":
        raise ValueError(f"unknown method {method!r}")
    return bisect_last_true(lambda t: evaluate(N, (a, t)) <= 1.0, 0.0, 1.0, tol.bisection)


def dual_eval(N, f, method: str = "auto", tol: Tolerances = TOL) -> float:
    """``N*(c, d) = max{|ac| + |bd| : N(a, b) <= 1}``."""
    c, d = _check_pair(f)
    c, d = abs(c), abs(d)
    if method == "auto":
        if isinstance(N, Lp):
            return _lp(dual_exponent(N.p), c, d)
        if isinstance(N, (ParamAB, Polygon2)):
            return max(c * x + d * y for x, y in as_polygon(N).float_verts)
        if isinstance(N, DualOf):
            return evaluate(N.base, (c, d))
        raise TypeError(f"not a norm: {N!r}")
    if method != "numeric":
        raise ValueError(f"unknown method {method!r}")
    # a -> a*c + h(a)*d is concave because the sphere height h is concave
    _, val = golden_max(
        lambda a: a * c + upper_boundary(N, a, method="numeric", tol=tol) * d,
        0.0,
        1.0,
        tol.golden,
    )
    return val


def subdiff2(N, v, tol: Tolerances = TOL) -> list[tuple[float, float]]:
    """Extreme points of ``{(c,d) >= 0 : N*(c,d) = 1, c*v1 + d*v2 = N(v)}``.

    One functional where the sphere is smooth at ``v / N(v)``, two at a
    polygon vertex, ordered by decreasing ``c``.
    """
    s, t = _check_pair(v)
    s, t = abs(s), abs(t)
    if s == 0 and t == 0:
        raise PreconditionError("subdifferential requested at the origin")
    M = simplify(N)
    if isinstance(M, Lp):
        n = _lp(M.p, s, t)
        e = M.p - 1
        return [((s / n) ** e, (t / n) ** e)]
    chain = M.dual_chain
    vals = [float(c) * s + float(d) * t for c, d in chain]
    top = max(vals)
    slack = tol.active * top
    active = [k for k, val in enumerate(vals) if val >= top - slack]
    picks = [chain[active[0]]]
    if chain[active[-1]] != chain[active[0]]:
        picks.append(chain[active[-1]])
    return [(float(c), float(d)) for c, d in picks]


def norming_functional(N, v, tie: str = "lex", tol: Tolerances = TOL) -> tuple[float, float]:
    """A positive ``(c, d)`` with ``N*(c, d) = 1`` and ``c*v1 + d*v2 = 1``.

    ``v`` must be a positive point of the unit sphere.  Where several
    functionals qualify, ``tie="lex"`` picks the lexicographically smallest
    ``(c, d)``; ``tie="max"`` picks the largest.
    """
    a, b = _check_pair(v)
    if a < 0 or b < 0:
        raise PreconditionError(f"point {v!r} is not positive")
    n = evaluate(N, (a, b))
    if abs(n - 1) > tol.sphere:
        raise PreconditionError(f"N{(a, b)} = {n!r} is not 1")
    cands = subdiff2(N, (a, b), tol)
    if tie == "lex":
        return min(cands)
    if tie == "max":
        return max(cands)
    raise ValueError(f"unknown tie-break rule {tie!r}")


def is_e1_extreme(N) -> bool:
    """Is ``(1, 0)`` an extreme point of the unit ball?"""
    M = simplify(N)
    if isinstance(M, Lp):
        return True
    return M.verts[1][0] < 1


def exposedness_modulus(N, eps: float, method: str = "auto", tol: Tolerances = TOL) -> float:
    """Largest ``gamma`` with ``N(a,b) <= 1, a > 1 - gamma  =>  |b| < eps``.

    Equals ``1 - a*`` where ``a*`` is the largest first coordinate at which
    the sphere still reaches height ``eps``.
    """
    eps = float(eps)
    if not 0 < eps <= 1:
        raise PreconditionError(f"eps must lie in (0, 1], got {eps}")
    if not is_e1_extreme(N):
        raise PreconditionError("(1,0) is not an extreme point of the unit ball")
    if method == "auto":
        P = as_polygon(N)
        if P is not None:
            e = as_fraction(eps)
            for (x0, y0), (x1, y1) in zip(P.verts, P.verts[1:]):
                if y1 >= e:
                    x = x0 + (x1 - x0) * (e - y0) / (y1 - y0)
                    return float(1 - x)
        if isinstance(N, Lp) and not math.isinf(N.p):
            return 1.0 - (1.0 - eps**N.p) ** (1 / N.p)
    elif method != "numeric":
        raise ValueError(f"unknown method {method!r}")
    a_star = bisect_last_true(
        lambda a: upper_boundary(N, a, method=method if method == "numeric" else "auto", tol=tol) >= eps,
        0.0,
        1.0,
        tol.bisection,
    )
    return 1.0 - a_star


def gamma_inf(N) -> float:
    """Largest ``gamma`` with ``max(|a|, |b|) >= gamma * N(a, b)``, i.e. ``1/N(1,1)``."""
    return 1.0 / evaluate(N, (1.0, 1.0))


@dataclass
class ValidationReport:
    norm: object
    samples: int
    seed: int
    threshold: float
    worst: dict = field(default_factory=dict)

    @property
    def worst_violation(self) -> float:
        return max(self.worst.values()) if self.worst else 0.0

    @property
    def passed(self) -> bool:
        return self.worst_violation <= self.threshold


def validate(N, samples: int = 10_000, seed: int = 0, threshold: float = 1e-9) -> ValidationReport:
    """Property-check the norm axioms on random points; never raises on failure.

    Violations are measured relative to the size of the points involved.
    """
    if isinstance(N, Polygon2):
        Polygon2(N.verts)
    simplify(N)
    rng = np.random.default_rng(seed)
    ev = lambda a, b: evaluate(N, (a, b))  # noqa: E731
    worst = {k: 0.0 for k in ("normalized", "absolute", "monotone", "triangle", "sandwich")}

    def bump(key, val):
        if val > worst[key]:
            worst[key] = float(val)

    bump("normalized", max(abs(ev(1, 0) - 1), abs(ev(0, 1) - 1)))
    pts = rng.standard_normal((samples, 4))
    shrink = rng.uniform(0, 1, (samples, 2))
    for (a, b, c, d), (r, s) in zip(pts.tolist(), shrink.tolist()):
        n_ab = ev(a, b)
        scale = abs(a) + abs(b) + 1e-300
        bump("absolute", max(abs(ev(-a, b) - n_ab), abs(ev(a, -b) - n_ab), abs(ev(-a, -b) - n_ab)) / scale)
        bump("monotone", (ev(r * a, s * b) - n_ab) / scale)
        scale2 = scale + abs(c) + abs(d)
        bump("triangle", (ev(a + c, b + d) - n_ab - ev(c, d)) / scale2)
        bump("sandwich", max(max(abs(a), abs(b)) - n_ab, n_ab - abs(a) - abs(b)) / scale)
    return ValidationReport(norm=N, samples=samples, seed=seed, threshold=threshold, worst=worst)
