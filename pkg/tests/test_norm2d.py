import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.spatial import ConvexHull

from octanorm.norm2d import (
    DomainError,
    DualOf,
    Lp,
    ParamAB,
    PreconditionError,
    as_polygon,
    dual_eval,
    evaluate,
    exposedness_modulus,
    gamma_inf,
    is_e1_extreme,
    norming_functional,
    polygon_polar,
    subdiff2,
    upper_boundary,
    validate,
)
from octanorm.polygon import Polygon2, ValidationError, random_polygon

from .conftest import L1, L2, LINF, norms

AB = ParamAB(0.5, 0)


@pytest.mark.parametrize(
    "N, v, expected",
    [
        (L2, (1, 1), math.sqrt(2)),
        (AB, (0.25, 0.75), 0.75),
        (AB, (0.875, 1.5), 1.625),
        (L1, (0, 0), 0.0),
        (AB, (0, 0), 0.0),
    ],
)
def test_evaluate_values(N, v, expected):
    assert evaluate(N, v) == pytest.approx(expected, abs=1e-15)


def test_paramab_matches_three_term_max():
    rng = np.random.default_rng(1)
    for a, b, x, y in rng.uniform(0, 1, (200, 4)):
        if a == 0 and b == 0:
            continue
        N = ParamAB(a, b)
        third = ((1 - b) * x + (1 - a) * y) / (1 - a * b)
        assert evaluate(N, (x, y)) == pytest.approx(max(x, y, third), rel=1e-14)
        assert evaluate(as_polygon(N), (x, y)) == pytest.approx(max(x, y, third), rel=1e-12)


def test_non_finite_input_rejected():
    with pytest.raises(DomainError):
        evaluate(L2, (math.nan, 1))


def test_paramab_rejects_origin_parameters():
    with pytest.raises((ValueError, ValidationError)):
        ParamAB(0, 0)


@pytest.mark.parametrize("N, a, expected", [(L1, 0.3, 0.7), (LINF, 0.3, 1.0), (AB, 0.75, 0.5)])
def test_upper_boundary(N, a, expected):
    assert upper_boundary(N, a) == pytest.approx(expected, abs=1e-15)
    assert upper_boundary(N, a, method="numeric") == pytest.approx(expected, abs=1e-11)


@pytest.mark.parametrize(
    "N, f, expected", [(L2, (3, 4), 5.0), (L1, (0.2, 0.9), 0.9), (AB, (1, 0.5), 1.0)]
)
def test_dual_eval(N, f, expected):
    assert dual_eval(N, f) == pytest.approx(expected, abs=1e-14)
    assert dual_eval(N, f, method="numeric") == pytest.approx(expected, abs=1e-8)


def test_dual_eval_against_grid_oracle():
    theta = np.linspace(0, math.pi / 2, 20001)
    for N in (AB, ParamAB(0.2, 0.7), Lp(3)):
        pts = [(math.cos(t), math.sin(t)) for t in theta]
        pts = [(x / evaluate(N, (x, y)), y / evaluate(N, (x, y))) for x, y in pts]
        for c, d in [(1, 0.5), (0.3, 0.8), (2, 1)]:
            # sampled sphere points can only under-estimate the max
            brute = max(c * x + d * y for x, y in pts)
            exact = dual_eval(N, (c, d))
            assert brute <= exact + 1e-12
            assert exact - brute <= 1e-4


def test_polar_examples():
    assert polygon_polar(as_polygon(LINF)) == as_polygon(L1)
    P = polygon_polar(as_polygon(AB))
    assert P.verts == ((1, 0), (1, Fraction(1, 2)), (0, 1))


def test_polar_against_hull_oracle():
    """Dual ball = hull of the edge normals and the axis points."""
    rng = np.random.default_rng(7)
    for _ in range(20):
        P = random_polygon(rng)
        pts = np.array([(float(c), float(d)) for c, d in P.normals] + [(0, 0), (1, 0), (0, 1)])
        hull = ConvexHull(pts)
        hv = {tuple(np.round(pts[i], 12)) for i in hull.vertices} - {(0.0, 0.0)}
        mine = {tuple(np.round(v, 12)) for v in P.polar().float_verts}
        assert hv == mine


def test_norming_functional_examples():
    s = 2**-0.5
    c, d = norming_functional(L2, (s, s))
    assert (c, d) == pytest.approx((s, s), abs=1e-15)
    assert norming_functional(L1, (1, 0)) == (1.0, 0.0)
    # the vertex (0.5, 1) is supported by (1, 0.5) and (0, 1); lex picks (0, 1)
    assert norming_functional(AB, (0.5, 1)) == (0.0, 1.0)
    assert norming_functional(AB, (0.5, 1), tie="max") == (1.0, 0.5)
    with pytest.raises(PreconditionError):
        norming_functional(AB, (0.2, 0.2))


def test_subdiff_examples():
    assert subdiff2(L2, (1, 0)) == [(1.0, 0.0)]
    assert sorted(subdiff2(L1, (1, 0))) == [(1.0, 0.0), (1.0, 1.0)]
    assert sorted(subdiff2(AB, (0.5, 1))) == [(0.0, 1.0), (1.0, 0.5)]
    with pytest.raises(PreconditionError):
        subdiff2(L2, (0, 0))


@given(norms(), st.floats(0.01, 1), st.floats(0.01, 1))
def test_subdiff_functionals_norm_the_point(N, s, t):
    n = evaluate(N, (s, t))
    for c, d in subdiff2(N, (s, t)):
        assert c * s + d * t == pytest.approx(n, rel=1e-9)
        assert dual_eval(N, (c, d)) == pytest.approx(1.0, rel=1e-9)


def test_e1_extreme():
    assert is_e1_extreme(L2)
    assert not is_e1_extreme(LINF)
    assert is_e1_extreme(AB)
    assert not is_e1_extreme(ParamAB(0, 0.5))


@pytest.mark.parametrize(
    "N, eps, expected",
    [(L1, 0.1, 0.1), (L2, 0.1, 1 - math.sqrt(0.99)), (AB, 0.25, 0.125)],
)
def test_exposedness_modulus(N, eps, expected):
    assert exposedness_modulus(N, eps) == pytest.approx(expected, abs=1e-12)
    assert exposedness_modulus(N, eps, method="numeric") == pytest.approx(expected, abs=1e-9)


def test_exposedness_modulus_grid_oracle():
    # largest gamma with a > 1 - gamma on the ball forcing b < eps
    a = np.linspace(0, 1, 200001)
    for N, eps in [(AB, 0.25), (L2, 0.1)]:
        h = np.array([upper_boundary(N, x) for x in a])
        a_star = a[h >= eps].max()
        assert exposedness_modulus(N, eps) == pytest.approx(1 - a_star, abs=1e-5)


def test_exposedness_requires_extreme_point():
    with pytest.raises(PreconditionError):
        exposedness_modulus(LINF, 0.1)


@pytest.mark.parametrize(
    "N, expected",
    [(L2, 2**-0.5), (Lp(3), 2 ** (-1 / 3)), (L1, 0.5), (LINF, 1.0), (AB, 2 / 3)],
)
def test_gamma_inf(N, expected):
    assert gamma_inf(N) == pytest.approx(expected, rel=1e-15)


def test_validate_reports():
    assert validate(Lp(1.5)).passed
    assert validate(Lp(1.5)).worst_violation <= 1e-12
    assert validate(DualOf(AB)).passed
    with pytest.raises(ValidationError):
        Polygon2(((1, 0), (0.4, 1), (0.5, 0.9), (0, 1)))


@given(norms(), st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3))
def test_norm_axioms(N, a, b, c, d):
    n = evaluate(N, (a, b))
    scale = 1 + abs(a) + abs(b) + abs(c) + abs(d)
    assert evaluate(N, (-a, b)) == pytest.approx(n, abs=1e-12 * scale)
    assert max(abs(a), abs(b)) <= n + 1e-12 * scale
    assert n <= abs(a) + abs(b) + 1e-12 * scale
    assert evaluate(N, (a + c, b + d)) <= n + evaluate(N, (c, d)) + 1e-12 * scale
    assert evaluate(N, (1, 0)) == pytest.approx(1.0, abs=1e-12)
    assert evaluate(N, (0, 1)) == pytest.approx(1.0, abs=1e-12)


@given(norms(dual=False), st.floats(0, 2), st.floats(0, 2))
def test_bidual_equals_norm(N, a, b):
    assert dual_eval(DualOf(N), (a, b)) == pytest.approx(evaluate(N, (a, b)), abs=1e-9)


def test_polygon_canonicalization_merges_collinear():
    P = Polygon2(((1, 0), (1, Fraction(1, 2)), (1, 1), (0, 1)))
    assert P.verts == ((1, 0), (1, 1), (0, 1))
    with pytest.raises(ValidationError):
        Polygon2(((1, 0), (0.5, 0.5)))
    with pytest.raises(ValidationError):
        Polygon2(((1, 0), (0.2, 0.2), (0, 1)))
