"""Exact rational kernel for polygonal absolute normalized norms.

A :class:`Polygon2` stores the first-quadrant part of a symmetric convex unit
ball as a vertex chain running counter-clockwise from ``(1, 0)`` to ``(0, 1)``.
Coordinates are kept as :class:`fractions.Fraction`, so polarity, face
detection and the property checkers in :mod:`octanorm.props2d` are exact.
Floats passed in are converted exactly (``Fraction(0.1)`` is the binary value).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

Point = tuple[Fraction, Fraction]

ONE = Fraction(1)
ZERO = Fraction(0)


class ValidationError(ValueError):
    """A norm representation breaks one of its structural invariants."""


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    xf = float(x)
    if not math.isfinite(xf):
        raise ValidationError(f"non-finite coordinate {x!r}")
    return Fraction(xf)


def cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _canonical_chain(raw) -> tuple[Point, ...]:
    pts = []
    for item in raw:
        try:
            x, y = item
        except (TypeError, ValueError):
            raise ValidationError(f"vertex {item!r} is not a pair") from None
        p = (as_fraction(x), as_fraction(y))
        if p[0] < 0 or p[1] < 0:
            raise ValidationError(f"vertex {item!r} leaves the first quadrant")
        if not pts or pts[-1] != p:
            pts.append(p)
    if len(pts) < 2 or pts[0] != (ONE, ZERO) or pts[-1] != (ZERO, ONE):
        raise ValidationError("vertex chain must start at (1,0) and end at (0,1)")
    for p, q in zip(pts, pts[1:]):
        if q[0] > p[0] or q[1] < p[1]:
            raise ValidationError(
                f"boundary not monotone between {_fmt(p)} and {_fmt(q)}"
            )
    out: list[Point] = []
    for p in pts:
        while len(out) >= 2 and cross(out[-2], out[-1], p) == 0:
            out.pop()
        out.append(p)
    for o, a, b in zip(out, out[1:], out[2:]):
        if cross(o, a, b) < 0:
            raise ValidationError(f"chain is not convex at {_fmt(a)}")
    return tuple(out)


def _fmt(p) -> str:
    return f"({float(p[0]):g},{float(p[1]):g})"


@dataclass(frozen=True)
class Polygon2:
    """First-quadrant boundary of a polygonal unit ball.

    Collinear vertices are merged on construction, so two polygons describing
    the same ball compare equal.
    """

    verts: tuple[Point, ...]

    def __post_init__(self):
        object.__setattr__(self, "verts", _canonical_chain(self.verts))

    def __call__(self, a, b) -> float:
        from .norm2d import evaluate

        return evaluate(self, (a, b))

    @cached_property
    def normals(self) -> tuple[Point, ...]:
        """Edge functionals ``(c, d)`` with ``c*x + d*y == 1`` along each edge."""
        out = []
        for p, q in zip(self.verts, self.verts[1:]):
            det = p[0] * q[1] - q[0] * p[1]
            if det <= 0:
                raise ValidationError("degenerate edge through the origin")
            out.append(((q[1] - p[1]) / det, (p[0] - q[0]) / det))
        return tuple(out)

    @cached_property
    def dual_chain(self) -> tuple[Point, ...]:
        """``(1,0)``, the edge normals, ``(0,1)``; not deduplicated.

        Vertex ``j`` of the chain is supported exactly by the functionals on the
        segment between entries ``j`` and ``j + 1`` of this list.
        """
        return ((ONE, ZERO),) + self.normals + ((ZERO, ONE),)

    @cached_property
    def float_normals(self) -> tuple[tuple[float, float], ...]:
        return tuple((float(c), float(d)) for c, d in self.normals)

    @cached_property
    def float_verts(self) -> tuple[tuple[float, float], ...]:
        return tuple((float(x), float(y)) for x, y in self.verts)

    def gauge(self, a, b) -> Fraction:
        """Exact norm of a rational point."""
        a, b = abs(as_fraction(a)), abs(as_fraction(b))
        return max(c * a + d * b for c, d in self.normals)

    def support(self, c, d) -> Fraction:
        """Exact dual norm: max of ``|c|x + |d|y`` over the vertices."""
        c, d = abs(as_fraction(c)), abs(as_fraction(d))
        return max(c * x + d * y for x, y in self.verts)

    def height(self, a) -> Fraction:
        """``max{b >= 0 : N(a, b) <= 1}`` for ``0 <= a <= 1``."""
        a = as_fraction(a)
        best = None
        for c, d in self.normals:
            if d > 0:
                h = (1 - c * a) / d
                best = h if best is None or h < best else best
        return max(best, ZERO)

    def polar(self) -> "Polygon2":
        return Polygon2(self.dual_chain)

    @property
    def n_edges(self) -> int:
        return len(self.verts) - 1


def polygon_from_floats(verts) -> Polygon2:
    return Polygon2(tuple(tuple(v) for v in verts))


def convex_hull(points):
    """Andrew's monotone chain; works for Fractions and floats, drops collinear."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def random_polygon(rng, max_points: int = 5, denom: int = 97) -> Polygon2:
    """Random valid polygon with rational vertices on a ``1/denom`` lattice."""
    k = int(rng.integers(0, max_points + 1))
    pts = [(ZERO, ZERO), (ONE, ZERO), (ZERO, ONE)]
    for _ in range(k):
        x, y = rng.integers(0, denom + 1, size=2)
        pts.append((Fraction(int(x), denom), Fraction(int(y), denom)))
    hull = convex_hull(pts)
    i = hull.index((ONE, ZERO))
    hull = hull[i:] + hull[:i]
    j = hull.index((ZERO, ONE))
    return Polygon2(tuple(hull[: j + 1]))
