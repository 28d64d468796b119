"""Multipods through the duality between group space and leg space.

Group space coordinates (17, projective) are ordered
``h, m11, m12, m13, m21, ..., m33, x1, x2, x3, y1, y2, y3, r`` and leg space
coordinates ``u, a1, a2, a3, b1, b2, b3, z11, z12, ..., z33, l``.  A leg
``(a, b, d)`` has length preserved by the isometry ``p -> M p + y`` iff the
pairing of the two points vanishes.
"""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .dquat import Isometry
from .errors import (ImaginaryLength, NoRealSixth, NotBoundary, NotGeneric, NotInvolution,
                     NotPlanar, OnAxis, OutOfDomain)

RANK_RTOL = 1e-7


# ---------------------------------------------------------------------------
# points of group space and leg space
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GroupSpacePoint:
    """``(h, M, x, y, r)``; entries may be complex."""

    h: complex
    M: np.ndarray
    x: np.ndarray
    y: np.ndarray
    r: complex

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate([[self.h], np.ravel(self.M), self.x, self.y, [self.r]])

    @classmethod
    def from_vector(cls, v) -> "GroupSpacePoint":
        v = np.asarray(v)
        if v.shape != (17,):
            raise ValueError("group space points have 17 coordinates")
        return cls(v[0], v[1:10].reshape(3, 3), v[10:13], v[13:16], v[16])

    def normalized(self) -> "GroupSpacePoint":
        v = self.vector
        return GroupSpacePoint.from_vector(v / np.linalg.norm(v))

    def isometry(self, tol: float = 1e-12) -> Isometry:
        """The direct isometry of a real point with ``h != 0``."""
        if abs(self.h) <= tol:
            raise NotBoundary("point lies on the boundary h = 0")
        v = np.real_if_close(self.vector / self.h)
        g = GroupSpacePoint.from_vector(v)
        return Isometry(np.real(g.M), np.real(g.y))


@dataclass(frozen=True)
class LegSpacePoint:
    """``(u, a, b, z, l)``; ``z`` is the 3x3 block."""

    u: complex
    a: np.ndarray
    b: np.ndarray
    z: np.ndarray
    l: complex

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate([[self.u], self.a, self.b, np.ravel(self.z), [self.l]])

    @classmethod
    def from_vector(cls, v) -> "LegSpacePoint":
        v = np.asarray(v)
        if v.shape != (17,):
            raise ValueError("leg space points have 17 coordinates")
        return cls(v[0], v[1:4], v[4:7], v[7:16].reshape(3, 3), v[16])

    def segre_residual(self) -> float:
        """Distance from the leg variety: second singular value of ``[[u, b], [a, z]]`` over the first."""
        W = np.block([[np.atleast_2d(self.u), np.atleast_2d(self.b)],
                      [np.reshape(self.a, (3, 1)), self.z]])
        s = np.linalg.svd(W, compute_uv=False)
        return float(s[1] / s[0]) if s[0] > 0 else 0.0


@dataclass(frozen=True)
class Leg:
    """Base anchor ``a``, platform anchor ``b`` and length ``d > 0``."""

    a: np.ndarray
    b: np.ndarray
    d: float

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float).reshape(3)
        b = np.asarray(self.b, dtype=float).reshape(3)
        if not self.d >= 0:
            raise ValueError("leg length must be nonnegative")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", float(self.d))

    def length_under(self, iso: Isometry) -> float:
        return float(np.linalg.norm(iso(self.a) - self.b))

    def twin(self) -> "Leg":
        return Leg(self.b, self.a, self.d)

    def to_json(self) -> dict:
        return {"a": self.a.tolist(), "b": self.b.tolist(), "d": self.d}


def group_point(iso: Isometry) -> GroupSpacePoint:
    """Coordinates ``h = 1``, ``M``, ``y`` the image of the origin, ``x = -M^T y``, ``r = <x, x>``."""
    M = np.asarray(iso.rotation, dtype=float)
    y = np.asarray(iso.translation, dtype=float)
    x = -M.T @ y
    return GroupSpacePoint(1.0, M, x, y, float(x @ x))


def leg_point(leg: Leg) -> LegSpacePoint:
    """Coordinates ``u = 1``, ``a``, ``b``, ``z = a b^T`` and ``l = <a,a> + <b,b> - d^2``."""
    return LegSpacePoint(1.0, leg.a, leg.b, np.outer(leg.a, leg.b),
                         float(leg.a @ leg.a + leg.b @ leg.b - leg.d ** 2))


def pairing(g: GroupSpacePoint, y: LegSpacePoint):
    """Bilinear form ``l h + u r - 2<a, x> - 2<b, y> - 2 sum z_ij m_ij``.

    Here ``m_ij`` is the coefficient of ``a_i`` in the ``j``-th coordinate of
    ``M a``, i.e. the entry ``M[j, i]`` of the rotation matrix.  For affine
    points the form equals ``|M a + y - b|^2 - d^2``.
    """
    return (y.l * g.h + y.u * g.r - 2 * np.dot(y.a, g.x) - 2 * np.dot(y.b, g.y)
            - 2 * np.sum(y.z * np.transpose(g.M)))


def pairing_matrix() -> np.ndarray:
    """Matrix ``P`` with ``pairing(g, y) = g.vector @ P @ y.vector``."""
    P = np.zeros((17, 17))
    P[0, 16] = 1.0          # h * l
    P[16, 0] = 1.0          # r * u
    for i in range(3):
        P[10 + i, 1 + i] = -2.0     # x_i a_i
        P[13 + i, 4 + i] = -2.0     # y_i b_i
    for i in range(3):
        for j in range(3):
            P[1 + 3 * j + i, 7 + 3 * i + j] = -2.0      # M[j, i] z_ij
    return P


def group_equations(v) -> np.ndarray:
    """Residual vector of the defining quadrics of the group variety at ``v`` (17 coordinates).

    The quadrics are ``M M^T - h^2 I``, ``M^T M - h^2 I``, ``adj(M) - h M^T``,
    ``M^T y + h x``, ``M x + h y``, ``<x,x> - r h`` and ``<y,y> - r h``,
    completed by ``y x M e_j + M (x x e_j)`` for ``j = 1, 2, 3`` (from
    ``y = -M x / h`` and ``M a x M b = h M (a x b)``).  Without the last nine
    the quadrics vanish on the group variety but do not generate its ideal,
    and the Jacobian rank drops at smooth boundary points.
    """
    g = GroupSpacePoint.from_vector(np.asarray(v))
    h, M, x, y, r = g.h, g.M, g.x, g.y, g.r
    I = np.eye(3)
    adj = np.array([[M[1, 1] * M[2, 2] - M[1, 2] * M[2, 1], M[0, 2] * M[2, 1] - M[0, 1] * M[2, 2],
                     M[0, 1] * M[1, 2] - M[0, 2] * M[1, 1]],
                    [M[1, 2] * M[2, 0] - M[1, 0] * M[2, 2], M[0, 0] * M[2, 2] - M[0, 2] * M[2, 0],
                     M[0, 2] * M[1, 0] - M[0, 0] * M[1, 2]],
                    [M[1, 0] * M[2, 1] - M[1, 1] * M[2, 0], M[0, 1] * M[2, 0] - M[0, 0] * M[2, 1],
                     M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]]])
    return np.concatenate([
        np.ravel(M @ M.T - h * h * I), np.ravel(M.T @ M - h * h * I), np.ravel(adj - h * M.T),
        M.T @ y + h * x, M @ x + h * y, [x @ x - r * h, y @ y - r * h],
        np.ravel([np.cross(y, M[:, j]) + M @ np.cross(x, I[j]) for j in range(3)])])


def group_residual(g: GroupSpacePoint) -> float:
    """Largest defining-equation residual after scaling the point to unit norm."""
    v = g.vector
    v = v / np.linalg.norm(v)
    return float(np.max(np.abs(group_equations(v))))


def group_jacobian(v, step: float = 1e-7) -> np.ndarray:
    """Jacobian of :func:`group_equations` (exact for quadrics by central differences)."""
    v = np.asarray(v, dtype=complex)
    cols = []
    for k in range(17):
        e = np.zeros(17, dtype=complex)
        e[k] = step
        cols.append((group_equations(v + e) - group_equations(v - e)) / (2 * step))
    return np.array(cols).T


def random_isometry(rng) -> Isometry:
    q = rng.standard_normal(4)
    q /= np.linalg.norm(q)
    w, x, y, z = q
    R = np.array([[1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
                  [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
                  [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)]])
    return Isometry(R, rng.standard_normal(3))


# ---------------------------------------------------------------------------
# Duporcq: the sixth planar leg
# ---------------------------------------------------------------------------

def _planar_matrix(leg: Leg) -> np.ndarray:
    return np.outer([1.0, leg.a[0], leg.a[1]], [1.0, leg.b[0], leg.b[1]])


@dataclass(frozen=True)
class SixthLegPoint:
    """Sixth intersection point of the span of five planar legs with the planar leg cone.

    ``matrix`` is ``[[u, b1, b2], [a1, z11, z12], [a2, z21, z22]]`` scaled to
    ``u = 1`` when possible; ``l`` the matching corrected length.
    """

    matrix: np.ndarray
    l: complex
    span_residual: float
    segre_residual: float

    @property
    def is_real(self) -> bool:
        scale = max(1.0, float(np.max(np.abs(self.matrix))))
        return bool(np.max(np.abs(np.imag(self.matrix))) <= 1e-8 * scale and abs(np.imag(self.l)) <= 1e-8 * scale)

    @property
    def a(self) -> np.ndarray:
        return np.array([self.matrix[1, 0], self.matrix[2, 0], 0.0])

    @property
    def b(self) -> np.ndarray:
        return np.array([self.matrix[0, 1], self.matrix[0, 2], 0.0])

    @property
    def d_squared(self):
        return self.a @ self.a + self.b @ self.b - self.l

    def to_json(self) -> dict:
        def enc(z):
            return [float(np.real(z)), float(np.imag(z))]
        return {"a": [enc(v) for v in self.a[:2]], "b": [enc(v) for v in self.b[:2]],
                "d_squared": enc(self.d_squared), "real": self.is_real,
                "span_residual": self.span_residual, "segre_residual": self.segre_residual}


def _planar_vectors(legs: Sequence[Leg]) -> Tuple[np.ndarray, np.ndarray]:
    W = np.array([np.ravel(_planar_matrix(g)) for g in legs])
    L = np.array([leg_point(g).l for g in legs])
    return W, L


def duporcq_sixth_point(legs: Sequence[Leg], seed: int = 0, starts: int = 200,
                        tol: float = 1e-11) -> SixthLegPoint:
    """Sixth point of ``span(legs)`` on the planar leg cone, possibly complex.

    Rank-one matrices ``p q^T`` in the span of the five anchor matrices solve
    four bilinear equations on ``P^2 x P^2``; their six solutions contain the
    five input legs.  The system is solved by multistart Newton in random
    affine charts and the five known points are discarded.

    Raises
    ------
    NotPlanar
        If an anchor point has nonzero third coordinate.
    NotGeneric
        If the five points do not span a 4-dimensional projective space or
        the sixth point cannot be isolated.
    """
    legs = list(legs)
    if len(legs) != 5:
        raise ValueError("need five legs")
    if any(abs(g.a[2]) > 1e-12 or abs(g.b[2]) > 1e-12 for g in legs):
        raise NotPlanar("anchor points must lie in the plane z = 0")
    W, L = _planar_vectors(legs)
    full = np.column_stack([W, L])
    sv = np.linalg.svd(full, compute_uv=False)
    if sv[-1] < 1e-9 * sv[0]:
        raise NotGeneric("the five legs do not span a 4-space")
    sw = np.linalg.svd(W, compute_uv=False)
    if sw[-1] < 1e-9 * sw[0]:
        raise NotGeneric("the anchor matrices are linearly dependent")
    # complement of span(W) in the 9-dim matrix space
    _, _, Vt = np.linalg.svd(W)
    N = Vt[5:]                                            # 4 x 9
    known = [w / np.linalg.norm(w) for w in W]
    rng = np.random.default_rng(seed)

    def residual(p, q):
        return N @ np.ravel(np.outer(p, q))

    found: List[np.ndarray] = []
    for _ in range(starts):
        # random charts p = p0 + s1 p1 + s2 p2, q = q0 + s3 q1 + s4 q2
        P = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        Q = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        s = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        for _it in range(60):
            p = P[0] + s[0] * P[1] + s[1] * P[2]
            q = Q[0] + s[2] * Q[1] + s[3] * Q[2]
            F = residual(p, q)
            if np.max(np.abs(F)) < tol:
                break
            J = np.column_stack([residual(P[1], q), residual(P[2], q), residual(p, Q[1]), residual(p, Q[2])])
            try:
                s = s - np.linalg.solve(J, F)
            except np.linalg.LinAlgError:
                break
            if not np.all(np.isfinite(s)) or np.max(np.abs(s)) > 1e8:
                break
        else:
            continue
        p = P[0] + s[0] * P[1] + s[1] * P[2]
        q = Q[0] + s[2] * Q[1] + s[3] * Q[2]
        if not np.max(np.abs(residual(p, q))) < tol * 10:
            continue
        m = np.ravel(np.outer(p, q))
        m = m / np.linalg.norm(m)
        k = int(np.argmax(np.abs(m)))
        m = m * (abs(m[k]) / m[k])
        if any(_proj_close(m, w) for w in known):
            continue
        if not any(_proj_close(m, f) for f in found):
            found.append(m)
    if len(found) != 1:
        raise NotGeneric("expected one new rank-one point, found %d" % len(found))
    m = found[0].reshape(3, 3)
    lam, *_ = np.linalg.lstsq(W.T.astype(complex), np.ravel(m), rcond=None)
    if abs(m[0, 0]) > 1e-12 * np.max(np.abs(m)):
        scale = 1.0 / m[0, 0]
    else:
        scale = 1.0 / np.max(np.abs(m))
    m = m * scale
    lam = lam * scale
    l6 = lam @ L
    vec = np.concatenate([np.ravel(m), [l6]])
    coef, *_ = np.linalg.lstsq(full.T.astype(complex), vec, rcond=None)
    span_res = float(np.linalg.norm(full.T @ coef - vec) / np.linalg.norm(vec))
    svals = np.linalg.svd(m, compute_uv=False)
    if abs(m[0, 0]) > 1e-12:
        m = m / m[0, 0]
    return SixthLegPoint(m, complex(l6), span_res, float(svals[1] / svals[0]))


def _proj_close(u, v, tol: float = 1e-6) -> bool:
    u = u / np.linalg.norm(u)
    v = v / np.linalg.norm(v)
    return abs(abs(np.vdot(u, v)) - 1.0) < tol


def duporcq_sixth(legs: Sequence[Leg], seed: int = 0) -> Leg:
    """Real sixth leg completing five planar legs to a hexapod with the same configurations.

    Raises
    ------
    NoRealSixth
        If the sixth point is complex, at infinity or has ``d^2 < 0``; the
        exception carries the :class:`SixthLegPoint`.
    """
    pt = duporcq_sixth_point(legs, seed=seed)
    if not pt.is_real or abs(pt.matrix[0, 0] - 1) > 1e-9:
        raise NoRealSixth("sixth point is not a real finite leg", point=pt)
    d2 = float(np.real(pt.d_squared))
    if d2 < 0:
        raise NoRealSixth("sixth leg has imaginary length", point=pt)
    return Leg(np.real(pt.a), np.real(pt.b), np.sqrt(d2))


def planar_pentapod_configuration(legs: Sequence[Leg], seed: int = 0, starts: int = 100,
                                  tol: float = 1e-12) -> Isometry:
    """Some isometry realizing all leg lengths, by Gauss-Newton on rotation vector and translation.

    Raises
    ------
    NotGeneric
        If no start converges.
    """
    from .dquat import DualQuaternion, dq_to_isometry  # local: only needed here

    rng = np.random.default_rng(seed)

    def iso_of(p):
        w = p[:3]
        ang = np.linalg.norm(w)
        axis = w / ang if ang > 0 else np.array([1.0, 0, 0])
        h = DualQuaternion.rotation(axis, ang)
        rot = dq_to_isometry(h).rotation
        return Isometry(rot, p[3:])

    def F(p):
        iso = iso_of(p)
        return np.array([np.sum((iso(g.a) - g.b) ** 2) - g.d ** 2 for g in legs])

    for _ in range(starts):
        p = rng.standard_normal(6)
        for _it in range(100):
            f = F(p)
            if np.max(np.abs(f)) < tol:
                return iso_of(p)
            J = np.zeros((len(legs), 6))
            for k in range(6):
                e = np.zeros(6)
                e[k] = 1e-7
                J[:, k] = (F(p + e) - F(p - e)) / 2e-7
            step, *_ = np.linalg.lstsq(J, -f, rcond=None)
            p = p + step
            if not np.all(np.isfinite(p)):
                break
    raise NotGeneric("no configuration found")


# ---------------------------------------------------------------------------
# Bricard-Borel pods
# ---------------------------------------------------------------------------

def borel_leg(a, alpha: float, beta: float) -> Leg:
    """Leg of the Bricard-Borel pod with base point ``a``.

    The platform point inverts ``(a1, a2)`` in the circle of radius
    ``sqrt(|alpha|)`` (followed by a half turn when ``alpha < 0``) and keeps
    ``a3``.

    Raises
    ------
    OnAxis
        If ``(a1, a2) = (0, 0)``.
    ImaginaryLength
        If ``a1^2 + a2^2 + b1^2 + b2^2 - beta <= 0``.
    """
    if alpha == 0:
        raise ValueError("alpha must be nonzero")
    a = np.asarray(a, dtype=float)
    rho = a[0] ** 2 + a[1] ** 2
    if rho == 0:
        raise OnAxis("base point on the z-axis")
    b = np.array([alpha * a[0] / rho, alpha * a[1] / rho, a[2]])
    d2 = rho + b[0] ** 2 + b[1] ** 2 - beta
    if d2 <= 0:
        raise ImaginaryLength("squared length %.3g is not positive" % d2)
    return Leg(a, b, np.sqrt(d2))


def borel_domain(alpha: float, beta: float) -> Tuple[float, float]:
    """Interval ``[-theta_max, theta_max]`` of admissible rotation angles.

    Raises
    ------
    OutOfDomain
        If ``2 alpha cos(theta) - beta < 0`` for every angle.
    """
    if 2 * abs(alpha) - beta < 0:
        raise OutOfDomain("2 alpha cos(theta) - beta is negative for all theta")
    c = beta / (2 * alpha)
    if alpha > 0:
        th = np.pi if c <= -1 else float(np.arccos(min(1.0, c)))
        return (-th, th)
    th = 0.0 if c >= 1 else float(np.arccos(max(-1.0, c)))
    return (th, 2 * np.pi - th)


def borel_motion(alpha: float, beta: float, theta: float, branch: int = 1) -> Isometry:
    """Rotation about the z-axis by ``theta`` followed by the translation ``(0, 0, y3)``.

    ``y3 = branch * sqrt(2 alpha cos(theta) - beta)``.

    Raises
    ------
    OutOfDomain
        If the radicand is negative.
    """
    rad = 2 * alpha * np.cos(theta) - beta
    if rad < -1e-15:
        raise OutOfDomain("2 alpha cos(theta) - beta = %.3g < 0" % rad)
    c, s = np.cos(theta), np.sin(theta)
    R = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    return Isometry(R, np.array([0.0, 0.0, (1 if branch >= 0 else -1) * np.sqrt(max(rad, 0.0))]))


# ---------------------------------------------------------------------------
# boundary strata
# ---------------------------------------------------------------------------

class Stratum(str, Enum):
    Zi_inversion = "Zi_inversion"
    Zb_collineation = "Zb_collineation"
    Zs_similarity = "Zs_similarity"
    Zc_conic = "Zc_conic"
    Zv_vertex = "Zv_vertex"


def is_smooth(v, rtol: float = RANK_RTOL) -> bool:
    """Smoothness of the group variety at ``v``: Jacobian rank 10 (its codimension)."""
    J = group_jacobian(np.asarray(v, dtype=complex) / np.linalg.norm(v))
    s = np.linalg.svd(J, compute_uv=False)
    return int(np.sum(s > rtol * s[0])) >= 10


def classify_bond(g: GroupSpacePoint, tol: float = 1e-9) -> Stratum:
    """Boundary stratum of a point with ``h = 0``.

    Decision sequence: some ``m_ij`` nonzero gives ``Zi_inversion`` at smooth
    points and ``Zb_collineation`` at singular ones; otherwise both ``x``
    and ``y`` nonzero gives ``Zs_similarity``; exactly one of them nonzero
    gives ``Zc_conic``; only ``r`` nonzero gives ``Zv_vertex``.

    Raises
    ------
    NotBoundary
        If ``h`` is not zero or the point is off the group variety.
    """
    v = np.asarray(g.vector, dtype=complex)
    nv = np.linalg.norm(v)
    if nv == 0:
        raise NotBoundary("zero vector")
    v = v / nv
    gn = GroupSpacePoint.from_vector(v)
    if abs(gn.h) > tol:
        raise NotBoundary("h is not zero")
    if np.max(np.abs(group_equations(v))) > tol:
        raise NotBoundary("point is not on the group variety")
    m_nz = np.max(np.abs(gn.M)) > tol
    x_nz = np.max(np.abs(gn.x)) > tol
    y_nz = np.max(np.abs(gn.y)) > tol
    if m_nz:
        return Stratum.Zi_inversion if is_smooth(v) else Stratum.Zb_collineation
    if x_nz and y_nz:
        return Stratum.Zs_similarity
    if x_nz or y_nz:
        return Stratum.Zc_conic
    return Stratum.Zv_vertex


def boundary_hyperplane(g: GroupSpacePoint) -> np.ndarray:
    """Linear form on leg space (17 coefficients) dual to ``g``."""
    return np.asarray(g.vector) @ pairing_matrix()


# ---------------------------------------------------------------------------
# projections, similarities and inversions of the plane
# ---------------------------------------------------------------------------

def orthogonal_projection(normal) -> np.ndarray:
    """2x3 matrix with orthonormal rows spanning the plane orthogonal to ``normal``."""
    n = np.asarray(normal, dtype=float)
    n = n / np.linalg.norm(n)
    t = np.array([1.0, 0, 0]) if abs(n[0]) < 0.9 else np.array([0, 1.0, 0])
    e1 = np.cross(n, t)
    e1 /= np.linalg.norm(e1)
    return np.array([e1, np.cross(n, e1)])


@dataclass(frozen=True)
class Similarity2D:
    """``p -> A p + t`` with ``A`` a nonzero multiple of an orthogonal matrix."""

    A: np.ndarray
    t: np.ndarray

    def __call__(self, p):
        return np.asarray(p) @ np.asarray(self.A).T + self.t


@dataclass(frozen=True)
class Inversion2D:
    """``p -> c + k (p - c) / |p - c|^2``; ``k < 0`` includes the half turn."""

    center: np.ndarray
    k: float

    def __call__(self, p):
        q = np.atleast_2d(np.asarray(p, dtype=float)) - self.center
        n2 = np.sum(q * q, axis=1, keepdims=True)
        out = self.center + self.k * q / n2
        return out[0] if np.ndim(p) == 1 else out


def _anchors(legs):
    return np.array([g.a for g in legs]), np.array([g.b for g in legs])


def similarity_projection_verify(legs: Sequence[Leg], p_a, p_b, s: Similarity2D, tol: float = 1e-9) -> bool:
    """Whether ``s(p_a(a_l)) = p_b(b_l)`` for every leg, within ``tol``."""
    A, B = _anchors(legs)
    lhs = s(A @ np.asarray(p_a).T)
    return bool(np.max(np.linalg.norm(lhs - B @ np.asarray(p_b).T, axis=1)) < tol)


def inversion_projection_verify(legs: Sequence[Leg], p_a, p_b, inv: Inversion2D, tol: float = 1e-9) -> bool:
    """Whether ``inv(p_a(a_l)) = p_b(b_l)`` for every leg, within ``tol``."""
    A, B = _anchors(legs)
    lhs = inv(A @ np.asarray(p_a).T)
    return bool(np.max(np.linalg.norm(lhs - B @ np.asarray(p_b).T, axis=1)) < tol)


def fit_similarity(P, Q) -> Tuple[Similarity2D, float]:
    """Least-squares similarity (direct or opposite) mapping points ``P`` to ``Q``; returns it and the max error."""
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    zp = P[:, 0] + 1j * P[:, 1]
    zq = Q[:, 0] + 1j * Q[:, 1]
    best = None
    for flip in (False, True):
        w = np.conj(zp) if flip else zp
        X = np.column_stack([w, np.ones_like(w)])
        (c, e), *_ = np.linalg.lstsq(X, zq, rcond=None)
        err = float(np.max(np.abs(X @ np.array([c, e]) - zq)))
        A = np.array([[c.real, -c.imag], [c.imag, c.real]])
        if flip:
            A = A @ np.diag([1.0, -1.0])
        if best is None or err < best[1]:
            best = (Similarity2D(A, np.array([e.real, e.imag])), err)
    return best


# ---------------------------------------------------------------------------
# combined collineations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CombinedCollineation:
    """Lines ``G_a`` (base) and ``G_b`` (platform) with the legs each one carries."""

    line_a: Tuple[np.ndarray, np.ndarray]
    line_b: Tuple[np.ndarray, np.ndarray]
    on_a: Tuple[int, ...]
    on_b: Tuple[int, ...]

    def to_json(self) -> dict:
        return {"line_a": [v.tolist() for v in self.line_a], "line_b": [v.tolist() for v in self.line_b],
                "on_a": list(self.on_a), "on_b": list(self.on_b)}


def _collinear_lines(points, tol):
    """Distinct lines through at least two of the points, with their incident indices."""
    out = []
    for i, j in itertools.combinations(range(len(points)), 2):
        u = points[j] - points[i]
        if np.linalg.norm(u) <= tol:
            continue
        u = u / np.linalg.norm(u)
        inc = tuple(k for k in range(len(points))
                    if np.linalg.norm(np.cross(points[k] - points[i], u)) <= tol)
        if not any(inc == o[2] for o in out):
            out.append((points[i], u, inc))
    return out


def combined_collineations(base, platform, tol: float = 1e-9) -> List[CombinedCollineation]:
    """Line pairs ``(G_a, G_b)`` such that every leg has ``a`` on ``G_a`` or ``b`` on ``G_b``.

    Only lines through at least two anchor points are considered, on both
    sides.  Lines carrying all anchors of one side are excluded, since then
    the other line is arbitrary.
    """
    A = np.asarray(base, dtype=float)
    B = np.asarray(platform, dtype=float)
    n = len(A)
    if len(B) != n:
        raise ValueError("base and platform need the same number of points")
    la = [L for L in _collinear_lines(A, tol) if len(L[2]) < n]
    lb = [L for L in _collinear_lines(B, tol) if len(L[2]) < n]
    out = []
    for pa, ua, ia in la:
        for pb, ub, ib in lb:
            if set(ia) | set(ib) == set(range(n)):
                out.append(CombinedCollineation((pa, ua), (pb, ub), ia, ib))
    return out


# ---------------------------------------------------------------------------
# twin pairs and icosapods
# ---------------------------------------------------------------------------

def _check_involution(sigma: Isometry, tol: float) -> None:
    sq = sigma @ sigma
    if not sq.allclose(Isometry.identity(), atol=tol) or sigma.allclose(Isometry.identity(), atol=tol):
        raise NotInvolution("isometry is not of order two")


def twin_distances(sigma: Isometry, leg: Leg, tol: float = 1e-9) -> Tuple[float, float]:
    """``(|sigma(a) - b|, |sigma(b) - a|)``; equal for an involution.

    Raises
    ------
    NotInvolution
    """
    _check_involution(sigma, tol)
    return (float(np.linalg.norm(sigma(leg.a) - leg.b)), float(np.linalg.norm(sigma(leg.b) - leg.a)))


def twin_check(sigma: Isometry, leg: Leg, tol: float = 1e-9) -> bool:
    """Whether ``sigma`` preserves the length of both the leg and its twin.

    Raises
    ------
    NotInvolution
    """
    d1, d2 = twin_distances(sigma, leg, tol)
    return bool(abs(d1 - leg.d) <= tol and abs(d2 - leg.d) <= tol)


def halfturn(axis_point, axis_direction) -> Isometry:
    n = np.asarray(axis_direction, dtype=float)
    n = n / np.linalg.norm(n)
    p = np.asarray(axis_point, dtype=float)
    R = 2 * np.outer(n, n) - np.eye(3)
    return Isometry(R, p - R @ p)


@dataclass(frozen=True)
class TwinPair:
    """A leg ``(a, b, d)`` standing for itself and its twin ``(b, a, d)``; entries may be complex."""

    a: np.ndarray
    b: np.ndarray
    l: complex

    @classmethod
    def from_leg(cls, leg: Leg) -> "TwinPair":
        return cls(leg.a, leg.b, leg_point(leg).l)

    @property
    def d_squared(self):
        return self.a @ self.a + self.b @ self.b - self.l

    @property
    def is_real(self) -> bool:
        v = np.concatenate([self.a, self.b, [self.l]])
        return bool(np.max(np.abs(np.imag(v))) <= 1e-8 * max(1.0, float(np.max(np.abs(v)))))

    def legs(self) -> Tuple[Leg, Leg]:
        d2 = float(np.real(self.d_squared))
        if not self.is_real or d2 < 0:
            raise ImaginaryLength("twin pair is not a real leg pair")
        leg = Leg(np.real(self.a), np.real(self.b), np.sqrt(d2))
        return leg, leg.twin()

    def to_json(self) -> dict:
        def enc(v):
            return [[float(np.real(z)), float(np.imag(z))] for z in np.ravel(v)]
        return {"a": enc(self.a), "b": enc(self.b), "l": enc([self.l])[0], "real": self.is_real}


def twin_coordinates(a, b, l) -> np.ndarray:
    """Symmetrized coordinates ``(u, a + b, z_ii, z_ij + z_ji (i < j), l)`` in 11-space."""
    a = np.asarray(a)
    b = np.asarray(b)
    z = np.outer(a, b)
    return np.concatenate([[1.0], a + b, np.diag(z), [z[0, 1] + z[1, 0], z[0, 2] + z[2, 0], z[1, 2] + z[2, 1]], [l]])


#: Twin coordinate point dual to the trace relation ``m11 + m22 + m33 + h = 0``
#: shared by all half turns.
TRACE_POINT = np.array([0.0, 0, 0, 0, -0.5, -0.5, -0.5, 0, 0, 0, 1.0])


def icosapod_span(pairs: Sequence[TwinPair]) -> np.ndarray:
    """Orthonormal basis (rows) of the linear conditions cutting out ``span(pairs, TRACE_POINT)``."""
    V = np.array([twin_coordinates(p.a, p.b, p.l) for p in pairs] + [TRACE_POINT], dtype=complex)
    _, _, Vt = np.linalg.svd(V)
    return np.conj(Vt[V.shape[0]:])


def _quadratic_jacobian(F, w) -> np.ndarray:
    """Central-difference Jacobian, exact up to rounding for quadratic ``F``."""
    h = 1e-6 * max(1.0, float(np.max(np.abs(w))))
    cols = []
    for k in range(len(w)):
        e = np.zeros(len(w), dtype=complex)
        e[k] = h
        cols.append((F(w + e) - F(w - e)) / (2 * h))
    return np.array(cols).T


def _twin_from_span(V: np.ndarray, rng, iterations: int = 60) -> Optional[np.ndarray]:
    """One Newton run for a twin point ``x = lam @ V`` in a random chart on ``lam``.

    With ``x = (u, s, S, l)`` the point is a twin pair iff
    ``s s^T - 4 u S = u^2 e e^T`` where ``e = a - b``; then ``a + b = s / u``.
    Returns ``(a, b, l)`` or ``None`` when the run fails or ends at ``u = 0``.
    """
    iu = np.triu_indices(3)
    chart = rng.standard_normal(4) + 1j * rng.standard_normal(4)

    def sym(x):
        S = np.diag(x[4:7])
        S[0, 1] = S[1, 0] = x[7] / 2
        S[0, 2] = S[2, 0] = x[8] / 2
        S[1, 2] = S[2, 1] = x[9] / 2
        return S

    def G(z):
        x = z[:4] @ V
        u, s = x[0], x[1:4]
        R = np.outer(s, s) - 4 * u * sym(x) - u * u * np.outer(z[4:], z[4:])
        return np.concatenate([R[iu], [chart @ z[:4] - 1]])

    z = rng.standard_normal(7) + 1j * rng.standard_normal(7)
    for _it in range(iterations):
        g = G(z)
        if np.max(np.abs(g)) < 1e-12 * max(1.0, float(np.max(np.abs(z)))) ** 2:
            break
        try:
            z = z - np.linalg.solve(_quadratic_jacobian(G, z), g)
        except np.linalg.LinAlgError:
            return None
        if not np.all(np.isfinite(z)):
            return None
    else:
        return None
    x = z[:4] @ V
    if abs(x[0]) < 1e-6 * np.max(np.abs(x)):
        return None
    s, e = x[1:4] / x[0], z[4:]
    return np.concatenate([(s + e) / 2, (s - e) / 2, [x[10] / x[0]]])


def icosapod_complete(pairs: Sequence[TwinPair], seed: int = 0, starts: int = 400,
                      tol: float = 1e-11) -> List[TwinPair]:
    """Further twin pairs compatible with every half turn compatible with the three given pairs.

    Every half turn satisfies ``trace(M) + h = 0``; in twin coordinates this
    adds :data:`TRACE_POINT` to the span of the three pairs.  The resulting
    3-plane meets the variety of twin pairs in ten points; the seven new
    ones are searched by complex multistart Newton on the seven linear
    conditions in ``(a, b, l)`` and deduplicated up to the swap ``a <-> b``.
    Half of the starts come from Newton runs in a chart of the span itself,
    which reach points with very large ``l``.
    Fewer than seven results trigger a warning.

    Raises
    ------
    NotGeneric
        If the three pairs are linearly dependent.
    """
    pairs = list(pairs)
    if len(pairs) != 3:
        raise ValueError("need three twin pairs")
    V = np.array([twin_coordinates(p.a, p.b, p.l) for p in pairs] + [TRACE_POINT], dtype=complex)
    sv = np.linalg.svd(V, compute_uv=False)
    if sv[-1] < 1e-8 * sv[0]:
        raise NotGeneric("twin pairs are linearly dependent")
    N = icosapod_span(pairs)                                  # 7 x 11
    rng = np.random.default_rng(seed)
    scale = max(1.0, float(np.max(np.abs(V))))

    def F(w):
        return N @ twin_coordinates(w[:3], w[3:6], w[6])

    def polish(w):
        for _it in range(120):
            f = F(w)
            if np.max(np.abs(f)) < tol * max(scale, float(np.max(np.abs(w))) ** 2):
                return w
            try:
                w = w - np.linalg.solve(_quadratic_jacobian(F, w), f)
            except np.linalg.LinAlgError:
                return None
            if not np.all(np.isfinite(w)) or np.max(np.abs(w)) > 1e8 * scale:
                return None
        return None

    inputs = [np.concatenate([p.a, p.b, [p.l]]).astype(complex) for p in pairs]
    found: List[np.ndarray] = []
    for k in range(starts):
        if k % 2 == 0:
            w = (rng.standard_normal(7) + 1j * rng.standard_normal(7)) * np.sqrt(scale)
        else:
            # solutions with large l are easy to reach from the span chart
            w = _twin_from_span(V, rng)
            if w is None:
                continue
        w = polish(w)
        if w is None or any(_same_pair(w, q) for q in inputs + found):
            continue
        found.append(w)
    found.sort(key=lambda w: tuple(np.round(np.concatenate([w.real, w.imag]), 8)))
    out = [TwinPair(w[:3], w[3:6], w[6]) for w in found]
    if len(out) > 7:
        raise NotGeneric("more than seven additional twin pairs; input not generic")
    if len(out) < 7:
        warnings.warn("found %d of 7 additional twin pairs" % len(out), RuntimeWarning, stacklevel=2)
    return out


def _same_pair(w, q, tol: float = 1e-6) -> bool:
    s = max(1.0, float(np.max(np.abs(q))))
    swapped = np.concatenate([w[3:6], w[:3], [w[6]]])
    return bool(np.max(np.abs(w - q)) < tol * s or np.max(np.abs(swapped - q)) < tol * s)


def icosapod_span_residual(pairs: Sequence[TwinPair], candidate: TwinPair) -> float:
    """Relative distance of the candidate's twin coordinates from the span of the inputs and the trace point."""
    N = icosapod_span(pairs)
    c = twin_coordinates(candidate.a, candidate.b, candidate.l)
    return float(np.linalg.norm(N @ c) / np.linalg.norm(c))


# ---------------------------------------------------------------------------
# Hilbert series
# ---------------------------------------------------------------------------

def hilbert_expand(numerator: Sequence[int], pole_order: int, terms: int) -> List[int]:
    """First ``terms`` coefficients of ``numerator(t) / (1 - t)^pole_order``.

    ``numerator`` lists integer coefficients, lowest degree first.
    """
    if pole_order < 0 or terms < 0:
        raise ValueError("pole order and number of terms must be nonnegative")
    from math import comb

    out = []
    for n in range(terms):
        c = 0
        for k, a in enumerate(numerator):
            if k > n:
                break
            m = n - k
            c += int(a) * (comb(m + pole_order - 1, m) if pole_order > 0 else int(m == 0))
        out.append(c)
    return out
