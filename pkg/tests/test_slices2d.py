import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial import ConvexHull

from octanorm import slices2d as s
from octanorm.norm2d import DualOf, Lp, ParamAB, PreconditionError, dual_eval, evaluate

from .conftest import L1, L2, LINF, polygons


DIRS = np.stack([np.cos(np.linspace(0, 2 * np.pi, 721)), np.sin(np.linspace(0, 2 * np.pi, 721))], 1)


def same_polygon(P, Q, tol=1e-12):
    """Convex polygons compared through their support functions."""
    hP = (np.asarray(P, float) @ DIRS.T).max(axis=0)
    hQ = (np.asarray(Q, float) @ DIRS.T).max(axis=0)
    return np.allclose(hP, hQ, atol=tol)


def hull_oracle(points):
    pts = np.unique(np.round(np.asarray(points), 13), axis=0)
    if len(pts) < 3:
        return pts
    return pts[ConvexHull(pts, qhull_options="QJ").vertices]


def test_slice_examples():
    P = s.slice_polygon(s.Slice2(LINF, (1, 0), 0.1))
    assert same_polygon(P, [(0.9, -1), (1, -1), (1, 1), (0.9, 1)])
    P = s.slice_polygon(s.Slice2(L1, (1, 1), 0.1))
    # contains the whole edge from (1,0) to (0,1)
    assert any(np.allclose(v, (1, 0)) for v in P) and any(np.allclose(v, (0, 1)) for v in P)
    assert same_polygon(P, [(1, 0), (0, 1), (-0.05, 0.95), (0.95, -0.05)])
    P = s.slice_polygon(s.Slice2(LINF, (1, 0), 1.0))
    assert same_polygon(P, [(0, -1), (1, -1), (1, 1), (0, 1)])


def test_slice_rejects_bad_input():
    with pytest.raises(ValueError):
        s.Slice2(LINF, (2, 0), 0.1)
    with pytest.raises(ValueError):
        s.Slice2(LINF, (1, 0), 0.0)
    with pytest.raises(PreconditionError):
        s.Slice2(L2, (1, 0), 0.1)


def test_combo_examples():
    one = s.Slice2(LINF, (1, 0), 0.2)
    assert same_polygon(s.combo_polygon(s.ComboSpec((one,), (1.0,))), s.slice_polygon(one))
    half = s.combo_polygon(s.ComboSpec((one, one), (0.5, 0.5)))
    assert same_polygon(half, s.slice_polygon(one))
    alpha = 1e-3
    c = s.ComboSpec((s.Slice2(LINF, (1, 0), alpha), s.Slice2(LINF, (0, 1), alpha)), (0.5, 0.5))
    assert s.diameter(s.combo_polygon(c), LINF) == pytest.approx(1 + alpha / 2, abs=1e-12)


def test_diameter_examples():
    assert s.diameter(s.ball_polygon(LINF), LINF) == 2
    assert s.diameter([(1, 0), (0, 1)], L1) == 2
    assert s.diameter([(0.3, 0.2)], L1) == 0


@settings(max_examples=60)
@given(polygons(), st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi),
       st.floats(1e-3, 1), st.floats(0.05, 0.95))
def test_minkowski_matches_hull_oracle(N, t1, t2, alpha, lam):
    f1 = np.array([math.cos(t1), math.sin(t1)])
    f2 = np.array([math.cos(t2), math.sin(t2)])
    A = s.slice_polygon(s.Slice2(N, tuple(f1 / dual_eval(N, f1)), alpha))
    B = s.slice_polygon(s.Slice2(N, tuple(f2 / dual_eval(N, f2)), alpha))
    M = s.minkowski_sum(lam * A, (1 - lam) * B)
    sums = [lam * a + (1 - lam) * b for a in A for b in B]
    assert same_polygon(M, hull_oracle(sums), tol=1e-9)
    # edge merge yields each vertex once, no collinear extras
    assert len(M) <= len(A) + len(B)
    assert s.diameter(M, N) == pytest.approx(s.diameter(np.array(sums), N), abs=1e-12)
    # Minkowski sum is commutative
    assert same_polygon(M, s.minkowski_sum((1 - lam) * B, lam * A), tol=1e-9)


@settings(max_examples=60)
@given(polygons(), st.floats(0, 2 * math.pi), st.floats(1e-3, 1))
def test_slices_and_combos_stay_in_ball(N, t, alpha):
    f = np.array([math.cos(t), math.sin(t)])
    f = f / dual_eval(N, f)
    P = s.slice_polygon(s.Slice2(N, tuple(f), alpha))
    for v in P:
        assert evaluate(N, v) <= 1 + 1e-12
        assert f @ v >= 1 - alpha - 1e-12
    g = np.array([-f[1], f[0]])
    g = g / dual_eval(N, g)
    C = s.combo_polygon(s.ComboSpec((s.Slice2(N, tuple(f), alpha), s.Slice2(N, tuple(g), alpha)),
                                    (0.3, 0.7)))
    for v in C:
        assert evaluate(N, v) <= 1 + 1e-12
    assert s.diameter(C, N) <= 2 + 1e-12


def test_min_combo_diameter_small_for_polygons():
    # a functional exposing a single vertex cuts a slice of size O(alpha)
    for N in (L1, LINF, ParamAB(0.5, 0)):
        for k in (1, 2):
            v = s.min_combo_diameter(N, k=k, alpha=1e-3, grid=32).value
            assert v <= 0.05


def test_min_combo_diameter_monotone_in_alpha():
    N = ParamAB(0.3, 0.6)
    vals = [s.min_combo_diameter(N, k=1, alpha=a, grid=64).value for a in (1e-3, 1e-2, 0.1, 0.5)]
    assert all(b >= a - 1e-15 for a, b in zip(vals, vals[1:]))


def test_min_combo_rows():
    r = s.min_combo_diameter(LINF, k=2, alpha=1e-2, grid=8, collect_rows=True)
    assert len(r.rows) == math.comb(r.n_functionals + 1, 2)
    assert min(row[-1] for row in r.rows) == r.value


def test_tau_2d_values():
    # l1 at (1,0): subdifferential segment (1,-1)..(1,1), tau = 2|t|
    assert s.tau_2d(L1, (1, 0), (0.3, 0.5)) == pytest.approx(1.0)
    assert s.tau_2d(L1, (0.5, 0.5), (0.3, -0.7)) == 0
    assert s.tau_2d(LINF, (1, 0), (0.1, 0.9)) == 0
    assert s.tau_2d(L2, (0.6, 0.8), (1, 0)) == 0


def test_witness_sup_restricted_vertices():
    val, y = s.witness_sup_2d(DualOf(LINF), [(1, 0), (0, 1)])
    assert val == pytest.approx(1.0, abs=1e-15)
    assert evaluate(L1, y) == pytest.approx(1.0)


def test_witness_sup_against_dense_direction_grid():
    rng = np.random.default_rng(4)
    theta = np.linspace(0, 2 * math.pi, 20001)
    for N in (L1, ParamAB(0.5, 0), DualOf(ParamAB(0.2, 0.6))):
        pts = [s.sphere_point(N, rng.standard_normal(2)) for _ in range(3)]
        pts += [s.ball_polygon(N)[0]]
        val, _ = s.witness_sup_2d(N, pts)
        brute = 0.0
        for t in theta[::20]:
            y = s.sphere_point(N, (math.cos(t), math.sin(t)))
            brute = max(brute, float(np.mean([s.tau_2d(N, x, y) for x in pts])))
        assert brute <= val + 1e-12
        assert val - brute <= 1e-2


def test_roughness_2d_inf_near_zero():
    for N in (L1, LINF, DualOf(ParamAB(0.5, 0))):
        b = s.roughness_2d(N, n_max=2, budget=200)
        assert b.lower == 0 and b.upper <= 1e-12


@pytest.mark.parametrize("N", [L1, LINF, ParamAB(0.5, 0)])
def test_deville_check_agrees(N):
    rep = s.deville_check(N, k=2, alpha=1e-3, grid=48, budget=300)
    assert rep.passed, (rep.slice_value, rep.roughness_value)
