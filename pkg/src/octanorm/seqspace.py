"""Finitely supported sequence spaces and their absolute sums.

A space is a tree: ``Leaf(p)`` is the dense subspace of finitely supported
vectors of ``l_p``; ``Sum(N, A, B)`` is ``A (+)_N B``.  A vector of a leaf is a
:class:`SparseVec`; a vector of a sum is the pair ``(left, right)``.

Directional derivatives are computed exactly: closed forms on the leaves and
the monotone convex chain rule through the sums, using the extreme points of
``N``'s subdifferential from :func:`octanorm.norm2d.subdiff2`.
"""

from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass

from .norm2d import evaluate, subdiff2


class ShapeError(ValueError):
    """A vector does not match the tree shape of its space."""


class SparseVec(Mapping):
    """Finitely supported real sequence; zero entries are never stored."""

    __slots__ = ("_d",)

    def __init__(self, entries=None):
        d = {}
        for k, v in dict(entries or {}).items():
            k = int(k)
            v = float(v)
            if k < 0:
                raise ValueError(f"negative index {k}")
            if not math.isfinite(v):
                raise ValueError(f"non-finite entry at index {k}")
            if v != 0.0:
                d[k] = v
        self._d = dict(sorted(d.items()))

    def __getitem__(self, k):
        return self._d[k]

    def __iter__(self):
        return iter(self._d)

    def __len__(self):
        return len(self._d)

    def __eq__(self, other):
        if isinstance(other, SparseVec):
            return self._d == other._d
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._d.items()))

    def __repr__(self):
        return f"SparseVec({self._d})"

    def __add__(self, other: "SparseVec") -> "SparseVec":
        out = dict(self._d)
        for k, v in other.items():
            out[k] = out.get(k, 0.0) + v
        return SparseVec(out)

    def __sub__(self, other: "SparseVec") -> "SparseVec":
        return self + (-other)

    def __neg__(self) -> "SparseVec":
        return SparseVec({k: -v for k, v in self._d.items()})

    def __mul__(self, s: float) -> "SparseVec":
        return SparseVec({k: s * v for k, v in self._d.items()})

    __rmul__ = __mul__

    def norm(self, p: float) -> float:
        vals = [abs(v) for v in self._d.values()]
        if not vals:
            return 0.0
        if math.isinf(p):
            return max(vals)
        if p == 1:
            return math.fsum(vals)
        m = max(vals)
        return m * math.fsum((v / m) ** p for v in vals) ** (1 / p)


@dataclass(frozen=True)
class Leaf:
    p: float

    def __post_init__(self):
        p = float(self.p)
        if math.isnan(p) or p < 1:
            raise ValueError(f"p must lie in [1, inf], got {self.p!r}")
        object.__setattr__(self, "p", p)


@dataclass(frozen=True)
class Sum:
    N: object
    left: "Leaf | Sum"
    right: "Leaf | Sum"


SpaceExpr = Leaf | Sum


def check_shape(S, v) -> None:
    if isinstance(S, Leaf):
        if not isinstance(v, SparseVec):
            raise ShapeError(f"expected a SparseVec for {S}, got {type(v).__name__}")
        return
    if not (isinstance(v, tuple) and len(v) == 2):
        raise ShapeError(f"expected a (left, right) pair for a sum, got {v!r}")
    check_shape(S.left, v[0])
    check_shape(S.right, v[1])


def zero(S):
    if isinstance(S, Leaf):
        return SparseVec()
    return (zero(S.left), zero(S.right))


def add(S, u, v):
    if isinstance(S, Leaf):
        return u + v
    return (add(S.left, u[0], v[0]), add(S.right, u[1], v[1]))


def scale(S, u, s: float):
    if isinstance(S, Leaf):
        return u * s
    return (scale(S.left, u[0], s), scale(S.right, u[1], s))


def leaves(S, path=()):
    """``(path, Leaf)`` pairs in left-to-right order; a path is a tuple of 0/1."""
    if isinstance(S, Leaf):
        yield path, S
    else:
        yield from leaves(S.left, path + (0,))
        yield from leaves(S.right, path + (1,))


def at(v, path):
    for step in path:
        v = v[step]
    return v


def from_leaves(S, parts: dict, path=()):
    """Build a vector from ``{path: SparseVec}``; missing leaves are zero."""
    if isinstance(S, Leaf):
        return parts.get(path, SparseVec())
    return (from_leaves(S.left, parts, path + (0,)), from_leaves(S.right, parts, path + (1,)))


def norm(S, v) -> float:
    if isinstance(S, Leaf):
        if not isinstance(v, SparseVec):
            raise ShapeError(f"expected a SparseVec for {S}")
        return v.norm(S.p)
    if not (isinstance(v, tuple) and len(v) == 2):
        raise ShapeError(f"expected a (left, right) pair for a sum, got {v!r}")
    return evaluate(S.N, (norm(S.left, v[0]), norm(S.right, v[1])))


def _leaf_dirderiv(p: float, x: SparseVec, y: SparseVec) -> float:
    if not x:
        return y.norm(p)
    if p == 1:
        terms = [math.copysign(1.0, xv) * y.get(i, 0.0) for i, xv in x.items()]
        terms += [abs(yv) for i, yv in y.items() if i not in x]
        return math.fsum(terms)
    if math.isinf(p):
        m = max(abs(v) for v in x.values())
        return max(math.copysign(1.0, xv) * y.get(i, 0.0) for i, xv in x.items() if abs(xv) == m)
    nx = x.norm(p)
    return math.fsum(
        math.copysign((abs(xv) / nx) ** (p - 1), xv) * y.get(i, 0.0) for i, xv in x.items()
    )


def dirderiv(S, x, y) -> float:
    """One-sided derivative ``lim_{t->0+} (||x + t y|| - ||x||) / t``."""
    if isinstance(S, Leaf):
        if not (isinstance(x, SparseVec) and isinstance(y, SparseVec)):
            raise ShapeError(f"expected SparseVecs for {S}")
        return _leaf_dirderiv(S.p, x, y)
    check_shape(S, x)
    check_shape(S, y)
    s, t = norm(S.left, x[0]), norm(S.right, x[1])
    if s == 0 and t == 0:
        return norm(S, y)
    # at a zero factor dirderiv already returns the norm of the direction
    da = dirderiv(S.left, x[0], y[0])
    db = dirderiv(S.right, x[1], y[1])
    return max(al * da + be * db for al, be in subdiff2(S.N, (s, t)))


def tau(S, x, y) -> float:
    """Roughness quotient ``d+(x; y) + d+(x; -y)``; always ``>= 0``."""
    return dirderiv(S, x, y) + dirderiv(S, x, scale(S, y, -1.0))


def tau_fd_bracket(S, x, y, t_seq) -> list[float]:
    """Symmetric difference quotients ``(||x+ty|| + ||x-ty|| - 2||x||) / t``.

    By convexity the quotient is non-decreasing in ``t``, so along a
    decreasing ``t_seq`` the list is non-increasing and bounded below by
    :func:`tau`.  A zero direction gives zeros.
    """
    ts = [float(t) for t in t_seq]
    if any(t <= 0 for t in ts) or any(b >= a for a, b in zip(ts, ts[1:])):
        raise ValueError("t_seq must be positive and strictly decreasing")
    if norm(S, y) == 0:
        return [0.0] * len(ts)
    nx = norm(S, x)
    out = []
    for t in ts:
        plus = norm(S, add(S, x, scale(S, y, t)))
        minus = norm(S, add(S, x, scale(S, y, -t)))
        out.append((plus + minus - 2 * nx) / t)
    return out


def _supports(v):
    if isinstance(v, SparseVec):
        yield set(v)
    elif isinstance(v, tuple):
        for part in v:
            yield from _supports(part)
    else:
        for item in v:
            yield from _supports(item)


def fresh_index(v) -> int:
    """Smallest index outside the support of ``v`` (a vector or a collection of them)."""
    used = set().union(*_supports(v)) if v is not None else set()
    k = 0
    while k in used:
        k += 1
    return k
