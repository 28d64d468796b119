import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from linkflex.dquat import LineAxis, dq_to_isometry
from linkflex.errors import NotGeneric, NotRealizable, ParallelAxes
from linkflex.ncpoly import MotionPoly, product
from linkflex.synth import (RationalPlaneCurve, bennett_from_conic, bennett_residuals,
                            curve_motion, dh_between_lines, ellipse_drawer, loop_dh_from_axes,
                            random_bennett_poly, sample_grid, trace, trace_path_spread,
                            translation_poly)

seeds = st.integers(0, 2 ** 32 - 1)


# frozen oracles ---------------------------------------------------------------

def test_dh_of_perpendicular_lines():
    L = LineAxis.through([0, 0, 0], [0, 0, 1])
    L2 = LineAxis.through([2, 0, 5], [0, 1, 0])
    pair = dh_between_lines(L, L2)
    assert pair.d == pytest.approx(-2.0)
    assert pair.alpha == pytest.approx(np.pi / 2)
    assert np.allclose(pair.normal, [-1, 0, 0])
    assert np.allclose(pair.foot, [0, 0, 5]) and np.allclose(pair.foot2, [2, 0, 5])


def test_dh_of_parallel_and_equal_lines():
    L = LineAxis.through([0, 0, 0], [0, 0, 1])
    with pytest.raises(ParallelAxes):
        dh_between_lines(L, LineAxis.through([1, 0, 0], [0, 0, 1]))
    assert dh_between_lines(L, L.reversed()).degenerate


def test_bennett_residuals_of_a_textbook_isogram():
    a, al = 1.0, 0.4
    b = a * np.sin(0.9) / np.sin(al)
    r = bennett_residuals([a, b, a, b], [al, 0.9, al, 0.9], [0, 0, 0, 0])
    assert np.max(np.abs(r)) < 1e-15


def test_ellipse_curve_passes_through_origin():
    C = RationalPlaneCurve.ellipse(2.0, 1.0)
    assert np.allclose(C(1e12)[:2], [0, 0], atol=1e-9)
    assert np.allclose(C(0.0), [-4, 0, 0])
    assert np.allclose(C(1.0), [-2, 1, 0])


def test_translation_poly_coefficients():
    P = translation_poly(RationalPlaneCurve.ellipse(2.0, 1.0))
    assert np.allclose(P.coeffs, [[1, 0, 0, 0, 0, -2, 0, 0],
                                  [0, 0, 0, 0, 0, 0, 1, 0],
                                  [1, 0, 0, 0, 0, 0, 0, 0]])
    with pytest.raises(NotRealizable):
        translation_poly(RationalPlaneCurve([0, 0, 1], [0], [1, 1]))


def test_curve_json_round_trip():
    C = RationalPlaneCurve([1.5, -2], [0, 0.25], [1, 0, 3])
    D = RationalPlaneCurve.from_json(C.to_json())
    assert D.to_json() == C.to_json()


def test_circle_is_not_a_generic_ellipse():
    with pytest.raises(NotGeneric):
        ellipse_drawer(1.0, 1.0)


def test_ellipse_needs_premultiplier():
    cm = curve_motion(RationalPlaneCurve.ellipse(2.0, 1.0), choices=[None, None, (0, -1, 0)])
    assert cm.premultiplier == "k"
    assert cm.poly.degree == 3
    assert product(cm.factors).allclose(cm.poly, 1e-10)


def test_sample_grid_avoids_the_seam():
    t = sample_grid(100)
    assert len(t) == 100
    assert np.min(np.abs(np.abs(t) - 1.0)) >= 1e-3 - 1e-15
    assert np.all(np.diff(t) > 0)


# properties -----------------------------------------------------------------

@given(seeds)
def test_random_conic_gives_bennett_linkage(seed):
    P = random_bennett_poly(np.random.default_rng(seed))
    B = bennett_from_conic(P)
    assert np.max(np.abs(B.bennett_residuals())) < 1e-8
    d, alpha, s = loop_dh_from_axes(B.axes)
    assert np.allclose(d, B.d) and np.allclose(alpha, B.alpha)
    for r, w in B.factorizations:
        assert (MotionPoly.linear(r) * MotionPoly.linear(w)).allclose(P, 1e-8 * max(1.0, P.scale))


@given(seeds, st.floats(-3, 3))
def test_conic_coupler_pose_is_reached_by_both_chains(seed, t):
    P = random_bennett_poly(np.random.default_rng(seed))
    B = bennett_from_conic(P)
    (r1, w1), (r2, w2) = B.factorizations
    a = dq_to_isometry(MotionPoly.linear(r1)(t) * MotionPoly.linear(w1)(t))
    b = dq_to_isometry(MotionPoly.linear(r2)(t) * MotionPoly.linear(w2)(t))
    assert a.allclose(b, 1e-7)


@given(st.floats(0.5, 3.0), st.floats(0.5, 3.0), st.floats(0.5, 2.0), st.floats(0.5, 2.0))
def test_ellipse_drawer_traces_its_ellipse(a, b, c, d):
    assume(abs(a - b) > 0.1)
    g, _ = ellipse_drawer(a, b, c, d)
    ts = sample_grid(24)
    pts = trace(g, 4, 1, ts)
    assert np.max(np.abs((pts[:, 0] + a) ** 2 / a ** 2 + pts[:, 1] ** 2 / b ** 2 - 1)) < 1e-7
    assert np.max(np.abs(pts[:, 2])) < 1e-9
    assert trace_path_spread(g, 4, 1, ts) < 1e-8
    assert g.path_independence_residual() < 1e-8 * max(1.0, a, b)
