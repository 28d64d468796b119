import numpy as np
import pytest
from hypothesis import given, strategies as st

from linkflex.dquat import (DualQuaternion, Isometry, LineAxis, Quaternion, dq_to_isometry,
                            dq_to_isometry_right, dqmul, halfturn_line, linear_factor_axis,
                            point_action, qmul)
from linkflex.errors import NotADisplacement, NotOnStudyQuadric, NotOrderTwo

finite = st.floats(-3, 3, allow_nan=False, allow_infinity=False)
vec3 = st.tuples(finite, finite, finite)
quat4 = st.tuples(finite, finite, finite, finite)
dq8 = st.tuples(*([finite] * 8))


def displacement(q, v):
    """Rotation quaternion ``q`` followed by the translation ``v``."""
    q = np.asarray(q, dtype=float)
    if np.linalg.norm(q) < 1e-2:
        q = np.array([1.0, 0, 0, 0])
    return DualQuaternion.translation(v) * DualQuaternion(q / np.linalg.norm(q))


# frozen oracles ---------------------------------------------------------------

def test_unit_products():
    i, j, k = (Quaternion(0, 1, 0, 0), Quaternion(0, 0, 1, 0), Quaternion(0, 0, 0, 1))
    assert (i * j).allclose(k)
    assert (j * k).allclose(i)
    assert (k * i).allclose(j)
    assert (i * i).allclose(Quaternion(-1, 0, 0, 0))
    assert np.allclose(qmul([1, 2, 3, 4], [5, 6, 7, 8]), [-60, 12, 30, 24])


def test_dual_unit_is_nilpotent():
    e = DualQuaternion((0, 0, 0, 0), (1, 0, 0, 0))
    assert np.allclose((e * e).c, 0)


def test_translation_coefficients():
    assert np.allclose(DualQuaternion.translation([1, 2, 3]).c, [1, 0, 0, 0, 0, 0.5, 1, 1.5])


def test_quarter_turn_about_z():
    h = DualQuaternion.rotation([0, 0, 1], np.pi / 2)
    iso = dq_to_isometry(h)
    assert np.allclose(iso([1, 0, 0]), [0, 1, 0])
    assert np.allclose(dq_to_isometry_right(h)([1, 0, 0]), [0, -1, 0])


def test_rotation_about_offset_line():
    h = DualQuaternion.rotation([0, 0, 1], np.pi, point=[1, 0, 0])
    assert np.allclose(dq_to_isometry(h)([0, 0, 5]), [2, 0, 5])


def test_halfturn_line_round_trip():
    L = LineAxis.through([1, 2, 0], [0, 0, 1])
    assert halfturn_line(DualQuaternion.from_line(L)).same_line(L)
    assert np.allclose(L.point, [1, 2, 0])
    assert L.distance_to([4, 6, 7]) == pytest.approx(5.0)


def test_linear_factor_revolution_and_translation():
    r = linear_factor_axis(DualQuaternion((0.5, 0, 0, 2), (0, 2, -1, 0)))
    assert r.kind == "revolution"
    assert r.scale == pytest.approx(2.0) and r.shift == pytest.approx(0.5)
    assert r.axis.same_line(LineAxis.through([0.5, 1, 0], [0, 0, 1]))
    tr = linear_factor_axis(DualQuaternion((1, 0, 0, 0), (0, 0, 3, 0)))
    assert tr.kind == "translation" and np.allclose(tr.direction, [0, 1, 0])


def test_error_cases():
    with pytest.raises(NotADisplacement):
        dq_to_isometry(DualQuaternion((0, 0, 0, 0), (1, 0, 0, 0)))
    with pytest.raises(NotADisplacement):
        dq_to_isometry(DualQuaternion((1, 0, 0, 0), (1, 0, 0, 0)))
    with pytest.raises(NotOrderTwo):
        halfturn_line(DualQuaternion((1, 0, 0, 0)))
    with pytest.raises(NotOnStudyQuadric):
        linear_factor_axis(DualQuaternion((0, 1, 0, 0), (1, 0, 0, 0)))
    with pytest.raises(ValueError):
        LineAxis([1, 0, 0], [1, 0, 0])
    with pytest.raises(ValueError):
        Isometry(2 * np.eye(3), np.zeros(3))


# properties -----------------------------------------------------------------

@given(dq8, dq8, dq8)
def test_product_is_associative(a, b, c):
    a, b, c = (np.array(x) for x in (a, b, c))
    assert np.allclose(dqmul(dqmul(a, b), c), dqmul(a, dqmul(b, c)), atol=1e-9)


@given(dq8, dq8)
def test_norm_is_multiplicative(a, b):
    A, B = DualQuaternion.from_array(a), DualQuaternion.from_array(b)
    na, nb, nab = A.norm(), B.norm(), (A * B).norm()
    assert nab[0] == pytest.approx(na[0] * nb[0], abs=1e-8)
    assert nab[1] == pytest.approx(na[0] * nb[1] + na[1] * nb[0], abs=1e-8)


@given(dq8, dq8)
def test_batched_product_matches_scalar(a, b):
    A = np.array([a, b])
    B = np.array([b, a])
    out = dqmul(A, B)
    assert np.allclose(out[0], dqmul(np.array(a), np.array(b)), atol=1e-12)
    assert np.allclose(out[1], dqmul(np.array(b), np.array(a)), atol=1e-12)


@given(quat4, vec3, quat4, vec3)
def test_left_action_is_a_homomorphism(q1, v1, q2, v2):
    g, h = displacement(q1, v1), displacement(q2, v2)
    assert dq_to_isometry(g * h).allclose(dq_to_isometry(g) @ dq_to_isometry(h), atol=1e-9)
    assert dq_to_isometry_right(g * h).allclose(
        dq_to_isometry_right(h) @ dq_to_isometry_right(g), atol=1e-9)


@given(quat4, vec3, vec3)
def test_sandwich_matches_isometry(q, v, p):
    h = displacement(q, v)
    assert np.allclose(point_action(h, p), dq_to_isometry(h)(p), atol=1e-9)


@given(quat4, vec3)
def test_isometry_round_trip(q, v):
    h = displacement(q, v)
    assert DualQuaternion.from_isometry(dq_to_isometry(h)).projectively_close(h)


@given(quat4, vec3, st.floats(0.1, 10))
def test_projective_scaling_is_ignored(q, v, lam):
    h = displacement(q, v)
    assert dq_to_isometry(h * lam).allclose(dq_to_isometry(h), atol=1e-9)


@given(quat4, vec3, vec3, vec3)
def test_lines_move_with_isometries(q, v, p, u):
    if np.linalg.norm(u) < 1e-2:
        u = (1.0, 0.0, 0.0)
    L = LineAxis.through(p, u)
    h = displacement(q, v)
    iso = dq_to_isometry(h)
    moved = halfturn_line(h * DualQuaternion.from_line(L) * h.inverse())
    assert moved.same_line(L.transformed(iso), atol=1e-7)
