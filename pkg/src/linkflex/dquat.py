"""Quaternions, dual quaternions and the Study-quadric model of SE(3).

Coefficients are stored as flat numpy arrays in the order
``(1, i, j, k)`` for quaternions and ``(1, i, j, k, e, ei, ej, ek)`` for
dual quaternions.  The low-level helpers :func:`qmul` and :func:`dqmul`
act on the last axis and accept real or complex arrays, so they double as
the arithmetic for :class:`ComplexDualQuaternion` and for polynomial
coefficient arrays in :mod:`linkflex.ncpoly`.

Action convention
-----------------
Points are embedded as ``1 + e(p1 i + p2 j + p3 k)``.  A displacement ``h``
acts by ``p -> h p tau(conj(h)) / N(h)`` where ``tau`` flips the sign of
``e``.  With this choice

* ``1 + (e/2) v`` is the translation by ``v``,
* ``cos(phi/2) + sin(phi/2) u`` is the rotation by ``phi`` about ``u``,
* ``dq_to_isometry(g * h) == dq_to_isometry(g) @ dq_to_isometry(h)``.

:func:`dq_to_isometry_right` gives the right action ``p -> h^-1 p tau(h)``
(scaled so that translations agree); it reverses products and is what the
curve drawer in :mod:`linkflex.synth` uses.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import NotADisplacement, NotOnStudyQuadric, NotOrderTwo

TOL = 1e-9


# ---------------------------------------------------------------------------
# array kernels
# ---------------------------------------------------------------------------

def qmul(p, q):
    """Hamilton product over the last axis (shape ``(..., 4)``)."""
    p = np.asarray(p)
    q = np.asarray(q)
    if p.ndim == 1 and q.ndim == 1:
        # scalar fast path; the array version is dominated by overhead here
        w1, x1, y1, z1 = p.tolist()
        w2, x2, y2, z2 = q.tolist()
        return np.array([
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
            w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
        ], dtype=np.result_type(p, q))
    w1, x1, y1, z1 = p[..., 0], p[..., 1], p[..., 2], p[..., 3]
    w2, x2, y2, z2 = q[..., 0], q[..., 1], q[..., 2], q[..., 3]
    out = np.empty(np.broadcast_shapes(p.shape, q.shape), dtype=np.result_type(p, q))
    out[..., 0] = w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2
    out[..., 1] = w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2
    out[..., 2] = w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2
    out[..., 3] = w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2
    return out


def qconj(q):
    q = np.asarray(q)
    return q * np.array([1, -1, -1, -1])


def dqmul(a, b):
    """Dual quaternion product over the last axis (shape ``(..., 8)``)."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim == 1 and b.ndim == 1:
        a0, a1, b0, b1 = a[:4], a[4:], b[:4], b[4:]
        return np.concatenate([qmul(a0, b0), qmul(a0, b1) + qmul(a1, b0)])
    a, b = np.broadcast_arrays(a, b)
    shape = a.shape
    A = a.reshape(-1, 8)
    B = b.reshape(-1, 8)
    # one matrix product against the structure constants beats eight small slices
    out = ((A @ _DQ_TABLE).reshape(-1, 8, 8) * B[:, :, None]).sum(axis=1)
    return out.reshape(shape)


def _structure_constants():
    E = np.eye(8)
    T = np.empty((8, 8, 8))
    for i in range(8):
        for j in range(8):
            a, b = E[i], E[j]
            T[i, j, :4] = qmul(a[:4], b[:4])
            T[i, j, 4:] = qmul(a[:4], b[4:]) + qmul(a[4:], b[:4])
    return T.reshape(8, 64)


_DQ_TABLE = _structure_constants()


def dqconj(a):
    a = np.asarray(a)
    return a * np.array([1, -1, -1, -1, 1, -1, -1, -1])


def dqtau(a):
    """Substitute ``e -> -e``."""
    a = np.asarray(a)
    return a * np.array([1, 1, 1, 1, -1, -1, -1, -1])


def dqnorm(a):
    """Return ``(primal, dual)`` of ``N(a) = a conj(a)`` (last axis)."""
    a = np.asarray(a)
    a0, a1 = a[..., :4], a[..., 4:]
    return np.sum(a0 * a0, axis=-1), 2.0 * np.sum(a0 * a1, axis=-1)


def dqinv(a):
    """Inverse of a dual quaternion with invertible primal part."""
    a = np.asarray(a)
    p, d = a[..., :4], a[..., 4:]
    n = np.sum(p * p, axis=-1)[..., None]
    pinv = qconj(p) / n
    return np.concatenate([pinv, -qmul(qmul(pinv, d), pinv)], axis=-1)


def _scale_to_unit(c):
    m = np.max(np.abs(c))
    return c / m if m > 0 else c


# ---------------------------------------------------------------------------
# value types
# ---------------------------------------------------------------------------

class Quaternion:
    """Hamiltonian quaternion ``w + x i + y j + z k``."""

    __slots__ = ("c",)

    def __init__(self, w=0.0, x=0.0, y=0.0, z=0.0):
        self.c = np.array([w, x, y, z], dtype=np.result_type(w, x, y, z, float))
        self.c.setflags(write=False)

    @classmethod
    def from_array(cls, c) -> "Quaternion":
        c = np.asarray(c)
        return cls(*c[:4])

    w = property(lambda self: self.c[0])
    x = property(lambda self: self.c[1])
    y = property(lambda self: self.c[2])
    z = property(lambda self: self.c[3])

    @property
    def vector(self):
        return np.array(self.c[1:])

    def conj(self) -> "Quaternion":
        return Quaternion.from_array(qconj(self.c))

    def norm(self):
        """``N(q) = q conj(q)``, the sum of four squares."""
        return float(np.sum(self.c * self.c).real) if not np.iscomplexobj(self.c) \
            else complex(np.sum(self.c * self.c))

    def inverse(self) -> "Quaternion":
        n = np.sum(self.c * self.c)
        if n == 0:
            raise ZeroDivisionError("quaternion with zero norm")
        return Quaternion.from_array(qconj(self.c) / n)

    def __add__(self, other):
        other = _as_quat(other)
        return Quaternion.from_array(self.c + other.c)

    __radd__ = __add__

    def __sub__(self, other):
        return Quaternion.from_array(self.c - _as_quat(other).c)

    def __rsub__(self, other):
        return Quaternion.from_array(_as_quat(other).c - self.c)

    def __neg__(self):
        return Quaternion.from_array(-self.c)

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return Quaternion.from_array(qmul(self.c, other.c))
        if isinstance(other, DualQuaternion):
            return DualQuaternion.from_quaternion(self) * other
        return Quaternion.from_array(self.c * other)

    def __rmul__(self, other):
        return Quaternion.from_array(self.c * other)

    def __truediv__(self, s):
        return Quaternion.from_array(self.c / s)

    def allclose(self, other, atol=TOL) -> bool:
        return bool(np.allclose(self.c, _as_quat(other).c, atol=atol, rtol=0))

    def __repr__(self):
        return "Quaternion(%s)" % ", ".join("%.6g" % v for v in self.c)


def _as_quat(v) -> Quaternion:
    if isinstance(v, Quaternion):
        return v
    return Quaternion(v)


class DualQuaternion:
    """Element ``p + e d`` of the dual quaternions (``e`` central, ``e^2 = 0``).

    Parameters
    ----------
    primal, dual : Quaternion or sequence of 4 numbers
    """

    __slots__ = ("c",)
    _dtype = float

    def __init__(self, primal=(1.0, 0.0, 0.0, 0.0), dual=(0.0, 0.0, 0.0, 0.0)):
        p = primal.c if isinstance(primal, Quaternion) else np.asarray(primal)
        d = dual.c if isinstance(dual, Quaternion) else np.asarray(dual)
        c = np.concatenate([p, d]).astype(np.result_type(p, d, self._dtype))
        if c.shape != (8,):
            raise ValueError("primal and dual parts need 4 coefficients each")
        c.setflags(write=False)
        self.c = c

    @classmethod
    def from_array(cls, c):
        c = np.asarray(c)
        if np.iscomplexobj(c) and cls is DualQuaternion:
            if np.any(c.imag != 0):
                return ComplexDualQuaternion(c[:4], c[4:])
            c = c.real
        return cls(c[:4], c[4:])

    @classmethod
    def from_quaternion(cls, q: Quaternion):
        return cls(q.c, np.zeros(4, dtype=q.c.dtype))

    # constructors for displacements -------------------------------------
    @classmethod
    def identity(cls):
        return cls()

    @classmethod
    def translation(cls, v):
        v = np.asarray(v, dtype=float)
        return cls((1.0, 0.0, 0.0, 0.0), (0.0, *(0.5 * v)))

    @classmethod
    def rotation(cls, axis, angle, point=None):
        """Rotation by ``angle`` about the line through ``point`` along ``axis``."""
        u = np.asarray(axis, dtype=float)
        u = u / np.linalg.norm(u)
        r = cls((np.cos(angle / 2), *(np.sin(angle / 2) * u)))
        if point is None:
            return r
        tp = cls.translation(point)
        return tp * r * cls.translation(-np.asarray(point, dtype=float))

    @classmethod
    def from_isometry(cls, iso: "Isometry"):
        r = _rotmat_to_quat(iso.rotation)
        return cls.translation(iso.translation) * cls(r)

    @classmethod
    def from_line(cls, line: "LineAxis"):
        """Order-2 element ``u + e m`` (half turn about ``line``)."""
        return cls((0.0, *line.direction), (0.0, *line.moment))

    # parts ----------------------------------------------------------------
    @property
    def primal(self) -> Quaternion:
        return Quaternion.from_array(self.c[:4])

    @property
    def dual(self) -> Quaternion:
        return Quaternion.from_array(self.c[4:])

    @property
    def scalar_part(self):
        """Coefficients of ``1`` and ``e``."""
        return self.c[0], self.c[4]

    # algebra -----------------------------------------------------------------
    def conj(self):
        return type(self).from_array(dqconj(self.c))

    def tau(self):
        return type(self).from_array(dqtau(self.c))

    def norm(self):
        """``N(h) = h conj(h)`` as ``(primal, dual)``; the dual part is the Study form."""
        n0, n1 = dqnorm(self.c)
        return n0[()], n1[()]

    def study(self):
        return self.norm()[1]

    def inverse(self):
        if np.sum(np.abs(self.c[:4]) ** 2) == 0:
            raise ZeroDivisionError("dual quaternion with vanishing primal part")
        return type(self).from_array(dqinv(self.c))

    def _wrap(self, c):
        if isinstance(self, ComplexDualQuaternion) or np.iscomplexobj(c):
            return ComplexDualQuaternion.from_array(c)
        return DualQuaternion.from_array(c)

    def __mul__(self, other):
        if isinstance(other, DualQuaternion):
            return self._wrap(dqmul(self.c, other.c))
        if isinstance(other, Quaternion):
            return self._wrap(dqmul(self.c, DualQuaternion.from_quaternion(other).c))
        return self._wrap(self.c * other)

    def __rmul__(self, other):
        if isinstance(other, Quaternion):
            return DualQuaternion.from_quaternion(other) * self
        return self._wrap(self.c * other)

    def __truediv__(self, s):
        return self._wrap(self.c / s)

    def __add__(self, other):
        return self._wrap(self.c + _as_dq(other).c)

    __radd__ = __add__

    def __sub__(self, other):
        return self._wrap(self.c - _as_dq(other).c)

    def __rsub__(self, other):
        return self._wrap(_as_dq(other).c - self.c)

    def __neg__(self):
        return self._wrap(-self.c)

    def allclose(self, other, atol=TOL) -> bool:
        return bool(np.allclose(self.c, _as_dq(other).c, atol=atol, rtol=0))

    def projectively_close(self, other, atol=1e-9) -> bool:
        """Compare up to a real (or complex) scale factor."""
        a = _scale_to_unit(self.c)
        b = _scale_to_unit(_as_dq(other).c)
        k = np.argmax(np.abs(a))
        if b[k] == 0:
            return False
        b = b * (a[k] / b[k])
        return bool(np.max(np.abs(a - b)) < atol)

    def __repr__(self):
        return "%s(%s | %s)" % (
            type(self).__name__,
            ", ".join("%.6g" % v for v in self.c[:4]),
            ", ".join("%.6g" % v for v in self.c[4:]),
        )


class ComplexDualQuaternion(DualQuaternion):
    """Dual quaternion with complex coefficients (parameters at ``+-i`` in bonds)."""

    __slots__ = ()
    _dtype = complex

    def norm(self):
        a0, a1 = self.c[:4], self.c[4:]
        return complex(np.sum(a0 * a0)), complex(2 * np.sum(a0 * a1))

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.c.imag == 0))


def _as_dq(v) -> DualQuaternion:
    if isinstance(v, DualQuaternion):
        return v
    if isinstance(v, Quaternion):
        return DualQuaternion.from_quaternion(v)
    return DualQuaternion((v, 0, 0, 0))


# ---------------------------------------------------------------------------
# geometry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Isometry:
    """Direct isometry ``p -> rotation @ p + translation``."""

    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        R = np.asarray(self.rotation, dtype=float).reshape(3, 3)
        t = np.asarray(self.translation, dtype=float).reshape(3)
        if np.max(np.abs(R.T @ R - np.eye(3))) > 1e-6 or abs(np.linalg.det(R) - 1) > 1e-6:
            raise ValueError("rotation must be orthogonal with determinant 1")
        object.__setattr__(self, "rotation", R)
        object.__setattr__(self, "translation", t)

    @classmethod
    def identity(cls):
        return cls(np.eye(3), np.zeros(3))

    def __call__(self, points):
        p = np.asarray(points, dtype=float)
        return p @ self.rotation.T + self.translation

    def __matmul__(self, other: "Isometry") -> "Isometry":
        return Isometry(self.rotation @ other.rotation,
                        self.rotation @ other.translation + self.translation)

    def inverse(self) -> "Isometry":
        return Isometry(self.rotation.T, -self.rotation.T @ self.translation)

    def as_matrix(self):
        m = np.eye(4)
        m[:3, :3] = self.rotation
        m[:3, 3] = self.translation
        return m

    def allclose(self, other: "Isometry", atol=1e-9) -> bool:
        return bool(np.allclose(self.rotation, other.rotation, atol=atol, rtol=0)
                    and np.allclose(self.translation, other.translation, atol=atol, rtol=0))


@dataclass(frozen=True)
class LineAxis:
    """Oriented line in Plücker coordinates (unit ``direction``, ``moment = p x direction``)."""

    direction: np.ndarray
    moment: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.direction, dtype=float).reshape(3)
        m = np.asarray(self.moment, dtype=float).reshape(3)
        n = np.linalg.norm(u)
        if n == 0:
            raise ValueError("direction must be nonzero")
        u, m = u / n, m / n
        if abs(np.dot(u, m)) > 1e-6 * max(1.0, np.linalg.norm(m)):
            raise ValueError("Plücker condition <direction, moment> = 0 violated")
        object.__setattr__(self, "direction", u)
        object.__setattr__(self, "moment", m)

    @classmethod
    def through(cls, point, direction):
        u = np.asarray(direction, dtype=float)
        u = u / np.linalg.norm(u)
        return cls(u, np.cross(np.asarray(point, dtype=float), u))

    @property
    def point(self):
        """Point of the line closest to the origin."""
        return np.cross(self.direction, self.moment)

    def distance_to(self, p) -> float:
        p = np.asarray(p, dtype=float)
        return float(np.linalg.norm(np.cross(p, self.direction) - self.moment))

    def reversed(self) -> "LineAxis":
        return LineAxis(-self.direction, -self.moment)

    def transformed(self, iso: Isometry) -> "LineAxis":
        return LineAxis.through(iso(self.point), iso.rotation @ self.direction)

    def same_line(self, other: "LineAxis", atol=1e-8) -> bool:
        """True if the lines coincide, ignoring orientation."""
        s = 1.0 if np.dot(self.direction, other.direction) >= 0 else -1.0
        return bool(np.allclose(self.direction, s * other.direction, atol=atol)
                    and np.allclose(self.moment, s * other.moment, atol=atol))


@dataclass(frozen=True)
class RevolutionOrTranslation:
    """Subgroup parametrized by a linear motion polynomial ``t + h``.

    ``kind`` is ``"revolution"`` (``axis`` set) or ``"translation"``
    (``direction`` set).  For a revolution, ``t`` equals
    ``scale * cot(phi / 2) - shift`` where ``phi`` is the rotation angle
    about the oriented axis.
    """

    kind: str
    axis: Optional[LineAxis] = None
    direction: Optional[np.ndarray] = None
    scale: float = 1.0
    shift: float = 0.0


def _quat_to_rotmat(q):
    w, x, y, z = q
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])


def _rotmat_to_quat(R):
    R = np.asarray(R, dtype=float)
    tr = np.trace(R)
    if tr > 0:
        s = 2.0 * np.sqrt(tr + 1.0)
        q = [0.25 * s, (R[2, 1] - R[1, 2]) / s, (R[0, 2] - R[2, 0]) / s, (R[1, 0] - R[0, 1]) / s]
    else:
        i = int(np.argmax(np.diag(R)))
        j, k = (i + 1) % 3, (i + 2) % 3
        s = 2.0 * np.sqrt(1.0 + R[i, i] - R[j, j] - R[k, k])
        q = [0.0] * 4
        q[0] = (R[k, j] - R[j, k]) / s
        q[i + 1] = 0.25 * s
        q[j + 1] = (R[j, i] + R[i, j]) / s
        q[k + 1] = (R[k, i] + R[i, k]) / s
    return np.array(q)


def _normalized_displacement(h: DualQuaternion, tol: float):
    c = np.asarray(h.c)
    if np.iscomplexobj(c):
        if np.max(np.abs(c.imag)) > tol * max(1.0, np.max(np.abs(c))):
            raise NotADisplacement("complex dual quaternion is not a real displacement")
        c = c.real
    n0, n1 = dqnorm(c)
    big = np.max(np.abs(c))
    if big == 0 or n0 <= (tol * big) ** 2:
        raise NotADisplacement("primal norm vanishes")
    c = c / np.sqrt(n0)
    if abs(2 * np.dot(c[:4], c[4:])) > tol:
        raise NotADisplacement("Study form S = %.3g is not zero" % (n1 / n0))
    return c


def dq_norm(h: DualQuaternion):
    """Coefficients ``(primal, dual)`` of ``N(h)``."""
    return h.norm()


def dq_mul(a: DualQuaternion, b: DualQuaternion) -> DualQuaternion:
    return a * b


def dq_to_isometry(h: DualQuaternion, tol: float = TOL) -> Isometry:
    """Isometry represented by the Study-quadric point ``[h]`` (left action).

    Raises
    ------
    NotADisplacement
        If the primal norm vanishes or the Study form is nonzero.
    """
    c = _normalized_displacement(h, tol)
    r, d = c[:4], c[4:]
    t = 2.0 * qmul(d, qconj(r))
    return Isometry(_quat_to_rotmat(r), t[1:])


def dq_to_isometry_right(h: DualQuaternion, tol: float = TOL) -> Isometry:
    """Right action of ``[h]``: ``dq_to_isometry(tau(conj(h)))``.

    Agrees with :func:`dq_to_isometry` on translations, inverts rotations
    about lines through the origin, and satisfies
    ``right(g * h) == right(h) @ right(g)``.
    """
    return dq_to_isometry(h.conj().tau(), tol)


def halfturn_line(h: DualQuaternion, tol: float = TOL) -> LineAxis:
    """Axis of the half turn represented by an order-2 element ``h``."""
    c = np.asarray(h.c, dtype=float)
    n0 = np.sum(c[:4] ** 2)
    if n0 == 0:
        raise NotOrderTwo("primal part vanishes")
    c = c / np.sqrt(n0)
    if abs(c[0]) > tol or abs(c[4]) > tol:
        raise NotOrderTwo("scalar part (%.3g, %.3g) is not zero" % (c[0], c[4]))
    if abs(2 * np.dot(c[:4], c[4:])) > tol:
        raise NotOrderTwo("not on the Study quadric")
    u, m = c[1:4], c[5:8]
    m = m - np.dot(m, u) * u
    return LineAxis(u, m)


def linear_factor_axis(h: DualQuaternion, tol: float = TOL) -> RevolutionOrTranslation:
    """Classify the subgroup parametrized by ``t + h`` (``t`` real).

    ``t + h`` stays on the Study quadric iff the dual scalar part of ``h``
    and the Study form of ``h`` vanish.  Writing ``s = t + scalar(h)``, the
    line becomes ``s + l`` with ``l = (h - conj(h)) / 2``; this is a
    revolution about the half-turn axis of ``l`` unless ``l`` has no primal
    part, in which case it is a translation along the dual vector of ``l``.
    """
    c = np.asarray(h.c, dtype=float)
    scale = max(1.0, np.max(np.abs(c)))
    if abs(c[4]) > tol * scale or abs(2 * np.dot(c[:4], c[4:])) > tol * scale * scale:
        raise NotOnStudyQuadric("t + h leaves the Study quadric")
    lv = np.concatenate([[0.0], c[1:4], [0.0], c[5:8]])
    nprim = np.linalg.norm(lv[1:4])
    if nprim <= tol * scale:
        v = lv[5:8]
        nv = np.linalg.norm(v)
        if nv <= tol * scale:
            raise NotOnStudyQuadric("t + h is constant up to scale")
        return RevolutionOrTranslation("translation", direction=v / nv, shift=float(c[0]))
    axis = halfturn_line(DualQuaternion.from_array(lv), tol=max(tol, 1e-12))
    return RevolutionOrTranslation("revolution", axis=axis, scale=float(nprim), shift=float(c[0]))


def point_action(h: DualQuaternion, points, tol: float = TOL):
    """Apply ``[h]`` to points through the dual-quaternion sandwich product."""
    c = _normalized_displacement(h, tol)
    p = np.atleast_2d(np.asarray(points, dtype=float))
    emb = np.zeros((len(p), 8))
    emb[:, 0] = 1.0
    emb[:, 5:] = p
    out = dqmul(dqmul(c, emb), dqtau(dqconj(c)))
    res = out[:, 5:]
    return res if np.ndim(points) > 1 else res[0]
