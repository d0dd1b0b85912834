"""Text forms of norms, spaces and vectors.

Norm specs::

    lp:<p>                     p a number or ``inf``
    ab:<a>,<b>
    poly:[(x1,y1),...,(xn,yn)] coordinates may be rationals ``n/d``
    dual(<norm>)

Space specs::

    leaf:<p>
    sum(<norm>; <space>; <space>)

Whitespace is ignored.  Vector literals are JSON: a leaf vector is an object
mapping indices to values, a sum vector is a two-element list.
"""

from __future__ import annotations

import json
import math
import re
from fractions import Fraction

from .norm2d import DualOf, Lp, ParamAB
from .polygon import Polygon2, ValidationError
from .seqspace import Leaf, SparseVec, Sum

_NUMBER = re.compile(r"[+-]?(?:inf|(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?(?:/\d+)?)")


class SpecParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        self.reason = message
        super().__init__(f"{message} at position {pos}\n  {text}\n  {' ' * pos}^")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg, pos=None):
        raise SpecParseError(msg, self.text, self.pos if pos is None else pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, s: str) -> bool:
        self.skip()
        return self.text.startswith(s, self.pos)

    def expect(self, s: str):
        self.skip()
        if not self.text.startswith(s, self.pos):
            found = self.text[self.pos:self.pos + 1] or "end of input"
            self.error(f"expected {s!r}, found {found!r}")
        self.pos += len(s)

    def number(self) -> str:
        self.skip()
        m = _NUMBER.match(self.text, self.pos)
        if not m:
            self.error("expected a number")
        self.pos = m.end()
        return m.group()

    def real(self) -> float:
        start = self.pos
        tok = self.number()
        try:
            return float(Fraction(tok)) if "/" in tok else float(tok)
        except (ValueError, ZeroDivisionError):
            self.error(f"bad number {tok!r}", start)

    def rational(self) -> Fraction:
        start = self.pos
        tok = self.number()
        if "inf" in tok:
            self.error("polygon coordinates must be finite", start)
        try:
            return Fraction(tok)
        except (ValueError, ZeroDivisionError):
            self.error(f"bad number {tok!r}", start)

    def end(self):
        self.skip()
        if self.pos != len(self.text):
            self.error("unexpected trailing input")

    def build(self, ctor, *args, pos):
        try:
            return ctor(*args)
        except (ValueError, ValidationError) as exc:
            self.error(str(exc), pos)

    def norm(self):
        self.skip()
        start = self.pos
        if self.peek("lp:"):
            self.expect("lp:")
            return self.build(Lp, self.real(), pos=start)
        if self.peek("ab:"):
            self.expect("ab:")
            a = self.real()
            self.expect(",")
            b = self.real()
            return self.build(ParamAB, a, b, pos=start)
        if self.peek("poly:"):
            self.expect("poly:")
            self.expect("[")
            verts = []
            while True:
                self.expect("(")
                x = self.rational()
                self.expect(",")
                y = self.rational()
                self.expect(")")
                verts.append((x, y))
                if self.peek(","):
                    self.expect(",")
                    continue
                break
            self.expect("]")
            return self.build(Polygon2, tuple(verts), pos=start)
        if self.peek("dual("):
            self.expect("dual(")
            base = self.norm()
            self.expect(")")
            return DualOf(base)
        self.error("expected a norm ('lp:', 'ab:', 'poly:' or 'dual(')")

    def space(self):
        self.skip()
        start = self.pos
        if self.peek("leaf:"):
            self.expect("leaf:")
            return self.build(Leaf, self.real(), pos=start)
        if self.peek("sum("):
            self.expect("sum(")
            N = self.norm()
            self.expect(";")
            left = self.space()
            self.expect(";")
            right = self.space()
            self.expect(")")
            return Sum(N, left, right)
        self.error("expected a space ('leaf:' or 'sum(')")


def parse_norm(text: str):
    p = _Parser(text)
    N = p.norm()
    p.end()
    return N


def parse_space(text: str):
    p = _Parser(text)
    S = p.space()
    p.end()
    return S


def _fmt_real(x: float) -> str:
    if math.isinf(x):
        return "inf"
    return repr(float(x))


def _fmt_frac(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_norm(N) -> str:
    if isinstance(N, Lp):
        return f"lp:{_fmt_real(N.p)}"
    if isinstance(N, ParamAB):
        return f"ab:{_fmt_real(N.a)},{_fmt_real(N.b)}"
    if isinstance(N, Polygon2):
        return "poly:[" + ",".join(f"({_fmt_frac(x)},{_fmt_frac(y)})" for x, y in N.verts) + "]"
    if isinstance(N, DualOf):
        return f"dual({format_norm(N.base)})"
    raise TypeError(f"not a norm: {N!r}")


def format_space(S) -> str:
    if isinstance(S, Leaf):
        return f"leaf:{_fmt_real(S.p)}"
    if isinstance(S, Sum):
        return f"sum({format_norm(S.N)}; {format_space(S.left)}; {format_space(S.right)})"
    raise TypeError(f"not a space: {S!r}")


class VectorParseError(ValueError):
    pass


def vector_from_json(S, obj):
    """Shape-checked vector from decoded JSON (object per leaf, pair per sum)."""
    if isinstance(S, Leaf):
        if not isinstance(obj, dict):
            raise VectorParseError(f"expected an index->value object for {format_space(S)}")
        try:
            return SparseVec({int(k): float(v) for k, v in obj.items()})
        except (TypeError, ValueError) as exc:
            raise VectorParseError(str(exc)) from None
    if not (isinstance(obj, list) and len(obj) == 2):
        raise VectorParseError(f"expected a two-element list for {format_space(S)}")
    return (vector_from_json(S.left, obj[0]), vector_from_json(S.right, obj[1]))


def vector_to_json(v):
    if isinstance(v, SparseVec):
        return {str(k): val for k, val in v.items()}
    return [vector_to_json(v[0]), vector_to_json(v[1])]


def parse_vectors(S, text: str) -> list:
    """A JSON list of vectors of ``S``."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"invalid JSON: {exc.msg}", text, exc.pos) from None
    if not isinstance(obj, list):
        raise SpecParseError("expected a JSON list of vectors", text, 0)
    try:
        return [vector_from_json(S, item) for item in obj]
    except VectorParseError as exc:
        raise SpecParseError(str(exc), text, 0) from None


def parse_vector(S, text: str):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"invalid JSON: {exc.msg}", text, exc.pos) from None
    try:
        return vector_from_json(S, obj)
    except VectorParseError as exc:
        raise SpecParseError(str(exc), text, 0) from None


def parse_pair(text: str) -> tuple[float, float]:
    p = _Parser(text)
    a = p.real()
    p.expect(",")
    b = p.real()
    p.end()
    return a, b
