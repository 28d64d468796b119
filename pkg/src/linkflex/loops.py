"""Closed chains of revolute joints (nR loops).

Conventions
-----------
Axis ``L_r`` carries the frame ``F_r``: origin at the foot of the common
normal ``N_{r-1}`` on ``L_r``, x-axis along ``L_r`` and z-axis along
``N_{r-1}``.  Link ``r`` joins ``L_r`` and ``L_{r+1}``:

* ``d_r`` is the signed distance from ``L_r`` to ``L_{r+1}`` along ``N_r``,
* ``alpha_r`` is the angle from ``L_r`` to ``L_{r+1}`` about ``N_r``,
* ``s_r`` is the offset on ``L_r`` from ``N_{r-1}`` to ``N_r``.

The displacement from ``F_r`` to ``F_{r+1}`` is ``R_x(phi_r) g_r`` with
``g_r = T_x(s_r) T_z(d_r) R_z(alpha_r)`` and ``R_x(phi) ~ t + i`` for
``t = cot(phi / 2)``.  A configuration closes when
``x = (t_0 + i) g_0 ... (t_{n-1} + i) g_{n-1}`` is a real scalar.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .dquat import DualQuaternion, LineAxis, dqmul
from .errors import (Ambiguous, DegenerateAngle, NewtonDiverged, ParallelAxes,
                     RelationViolated)
from .synth import bennett_residuals, dh_between_lines

NEWTON_TOL = 1e-10
MAX_HALVINGS = 20
STEP = np.deg2rad(1.0)
REFINEMENTS = 4

_I = np.array([0.0, 1.0, 0, 0, 0, 0, 0, 0])


@dataclass(frozen=True)
class DHLoop:
    """Invariant DH parameters ``d, alpha, s`` of an nR loop (``n >= 4``)."""

    d: np.ndarray
    alpha: np.ndarray
    s: np.ndarray

    def __post_init__(self):
        d, a, s = (np.asarray(x, dtype=float).reshape(-1) for x in (self.d, self.alpha, self.s))
        if not (len(d) == len(a) == len(s)):
            raise ValueError("d, alpha and s must have equal length")
        if len(d) < 4:
            raise ValueError("a loop needs at least four joints")
        for name, v in (("d", d), ("alpha", a), ("s", s)):
            v.setflags(write=False)
            object.__setattr__(self, name, v)

    @property
    def n(self) -> int:
        return len(self.d)

    @property
    def c(self) -> np.ndarray:
        return np.cos(self.alpha)

    @property
    def b(self) -> np.ndarray:
        """``d / sin(alpha)``.

        Raises
        ------
        DegenerateAngle
            If some angle has zero sine.
        """
        sn = np.sin(self.alpha)
        if np.any(np.abs(sn) < 1e-12):
            raise DegenerateAngle("sin(alpha) vanishes")
        return self.d / sn

    @property
    def w(self) -> np.ndarray:
        """``cot(alpha / 2)``."""
        sn = np.sin(self.alpha)
        if np.any(np.abs(sn) < 1e-12):
            raise DegenerateAngle("cot(alpha/2) undefined for alpha = 0 or pi")
        return 1.0 / np.tan(self.alpha / 2)

    def to_json(self) -> dict:
        return {"d": self.d.tolist(), "alpha": self.alpha.tolist(), "s": self.s.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "DHLoop":
        return cls(obj["d"], obj["alpha"], obj["s"])

    def perturbed(self, which: str, r: int, delta: float) -> "DHLoop":
        vals = {k: np.array(getattr(self, k)) for k in ("d", "alpha", "s")}
        vals[which][r] += delta
        return DHLoop(**vals)


# ---------------------------------------------------------------------------
# elementary displacements
# ---------------------------------------------------------------------------

def _rot(axis: int, angle: float) -> np.ndarray:
    c = np.zeros(8)
    c[0] = np.cos(angle / 2)
    c[axis] = np.sin(angle / 2)
    return c


def _trans(v) -> np.ndarray:
    c = np.zeros(8)
    c[0] = 1.0
    c[5:] = 0.5 * np.asarray(v, dtype=float)
    return c


def _link_array(d, alpha, s) -> np.ndarray:
    return dqmul(dqmul(_trans((s, 0.0, 0.0)), _trans((0.0, 0.0, d))), _rot(3, alpha))


def dh_to_dq(loop: DHLoop, r: int, form: str = "angle") -> DualQuaternion:
    """Link displacement ``g_r = T_x(s_r) T_z(d_r) R_z(alpha_r)``.

    ``form="angle"`` gives the unit representative; ``form="cot"`` gives the
    projective form ``(1 + e s i / 2)(1 + e d k / 2)(w + k)`` with
    ``w = cot(alpha / 2)``.

    Raises
    ------
    DegenerateAngle
        For ``form="cot"`` when ``sin(alpha_r) = 0``.
    """
    d, a, s = loop.d[r], loop.alpha[r], loop.s[r]
    if form == "angle":
        return DualQuaternion.from_array(_link_array(d, a, s))
    if form == "cot":
        if abs(np.sin(a)) < 1e-12:
            raise DegenerateAngle("cot form needs sin(alpha) != 0")
        rz = np.zeros(8)
        rz[0] = 1.0 / np.tan(a / 2)
        rz[3] = 1.0
        return DualQuaternion.from_array(dqmul(dqmul(_trans((s, 0, 0)), _trans((0, 0, d))), rz))
    raise ValueError("form must be 'angle' or 'cot'")


def angles_to_t(phi) -> np.ndarray:
    """``cot(phi / 2)`` with ``phi = 0`` mapped to ``inf``."""
    phi = np.asarray(phi, dtype=float)
    h = np.mod(phi / 2 + np.pi / 2, np.pi) - np.pi / 2
    with np.errstate(divide="ignore"):
        return np.where(np.abs(np.sin(h)) < 1e-300, np.inf, np.cos(h) / np.sin(h))


def t_to_angles(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    return np.where(np.isinf(t), 0.0, 2 * np.arctan2(1.0, t))


@dataclass(frozen=True)
class LoopConfiguration:
    """Joint angles ``phi_r``; ``t`` gives the cotangents of the half angles."""

    angles: np.ndarray

    @property
    def t(self) -> np.ndarray:
        return angles_to_t(self.angles)

    @classmethod
    def from_t(cls, t) -> "LoopConfiguration":
        return cls(t_to_angles(t))


# ---------------------------------------------------------------------------
# closure
# ---------------------------------------------------------------------------

def closure_product(loop: DHLoop, t) -> DualQuaternion:
    """``(t_0 + i) g_0 ... (t_{n-1} + i) g_{n-1}``; an infinite ``t_r`` drops its factor.

    Complex ``t`` values are allowed.
    """
    t = np.asarray(t)
    dtype = complex if np.iscomplexobj(t) else float
    acc = np.zeros(8, dtype=dtype)
    acc[0] = 1.0
    for r in range(loop.n):
        if not (np.isreal(t[r]) and np.isinf(np.real(t[r]))):
            f = np.zeros(8, dtype=dtype)
            f[0] = t[r]
            f[1] = 1.0
            acc = dqmul(acc, f)
        acc = dqmul(acc, _link_array(loop.d[r], loop.alpha[r], loop.s[r]))
    return DualQuaternion.from_array(acc)


def closure_residual(loop: DHLoop, t) -> float:
    """Largest non-scalar coefficient of the closure product after normalization.

    ``t`` may be a :class:`LoopConfiguration` or cotangent values.
    """
    if isinstance(t, LoopConfiguration):
        return closure_residual_angles(loop, t.angles)
    c = np.asarray(closure_product(loop, t).c)
    c = c / np.sqrt(np.sum(np.abs(c[:4]) ** 2))
    return float(np.max(np.abs(c[1:])))


def _unit_product(loop: DHLoop, phi) -> np.ndarray:
    acc = np.zeros(8)
    acc[0] = 1.0
    for r in range(loop.n):
        acc = dqmul(dqmul(acc, _rot(1, phi[r])), _link_array(loop.d[r], loop.alpha[r], loop.s[r]))
    return acc


def closure_residual_angles(loop: DHLoop, phi) -> float:
    x = _unit_product(loop, phi)
    x = x * np.sign(x[0]) if x[0] != 0 else x
    return float(np.max(np.abs(x[1:])))


def _links(loop: DHLoop) -> List[np.ndarray]:
    return [_link_array(loop.d[r], loop.alpha[r], loop.s[r]) for r in range(loop.n)]


def _residual_and_jacobian(loop: DHLoop, phi, free, links=None) -> Tuple[np.ndarray, np.ndarray]:
    n = loop.n
    if links is None:
        links = _links(loop)
    rots = [_rot(1, phi[r]) for r in range(n)]
    pre = [None] * (n + 1)
    pre[0] = np.eye(8)[0]
    for r in range(n):
        pre[r + 1] = dqmul(dqmul(pre[r], rots[r]), links[r])
    post = [None] * (n + 1)
    post[n] = np.eye(8)[0]
    for r in range(n - 1, -1, -1):
        post[r] = dqmul(dqmul(rots[r], links[r]), post[r + 1])
    X = pre[n]
    sgn = 1.0 if X[0] >= 0 else -1.0
    F = sgn * np.concatenate([X[1:4], X[5:8]])
    J = np.zeros((6, len(free)))
    half_i = 0.5 * _I
    for col, r in enumerate(free):
        dX = dqmul(dqmul(dqmul(dqmul(pre[r], rots[r]), half_i), links[r]), post[r + 1])
        J[:, col] = sgn * np.concatenate([dX[1:4], dX[5:8]])
    return F, J


def solve_closure(loop: DHLoop, phi, free: Sequence[int], tol: float = NEWTON_TOL,
                  max_iter: int = 60) -> Tuple[np.ndarray, float]:
    """Damped Gauss-Newton on the 6-dimensional closure residual over ``free`` angles.

    Returns the corrected angles and the final residual norm (max norm).
    Steps are halved up to ``MAX_HALVINGS`` times to decrease the residual.
    """
    phi = np.array(phi, dtype=float)
    free = list(free)
    links = _links(loop)
    F, J = _residual_and_jacobian(loop, phi, free, links)
    err = float(np.max(np.abs(F)))
    for _ in range(max_iter):
        if err < tol:
            break
        step, *_ = np.linalg.lstsq(J, -F, rcond=None)
        lam = 1.0
        improved = False
        for _h in range(MAX_HALVINGS + 1):
            trial = phi.copy()
            trial[free] += lam * step
            Ft, Jt = _residual_and_jacobian(loop, trial, free, links)
            et = float(np.max(np.abs(Ft)))
            if et < err:
                phi, F, J, err = trial, Ft, Jt, et
                improved = True
                break
            lam *= 0.5
        if not improved:
            break
    return phi, err


def find_configuration(loop: DHLoop, seed: int = 0, starts: int = 200, fixed: Optional[Dict[int, float]] = None,
                       tol: float = NEWTON_TOL) -> np.ndarray:
    """Closing configuration found by Newton from random starts.

    Raises
    ------
    NewtonDiverged
        If no start converges.
    """
    rng = np.random.default_rng(seed)
    fixed = fixed or {}
    free = [r for r in range(loop.n) if r not in fixed]
    best = (np.inf, None)
    for _ in range(starts):
        phi = rng.uniform(-np.pi, np.pi, loop.n)
        for r, v in fixed.items():
            phi[r] = v
        phi, err = solve_closure(loop, phi, free, tol)
        if err < tol:
            return _wrap(phi)
        if err < best[0]:
            best = (err, phi)
    raise NewtonDiverged("no closing configuration from %d starts (best residual %.3g)" % (starts, best[0]),
                         last_good=None, steps=0)


def _wrap(phi):
    return np.mod(np.asarray(phi) + np.pi, 2 * np.pi) - np.pi


@dataclass
class TraceResult:
    """Configurations along a sweep of the driven joint."""

    drive: int
    driven: List[float] = field(default_factory=list)
    configurations: List[np.ndarray] = field(default_factory=list)
    residuals: List[float] = field(default_factory=list)

    @property
    def max_residual(self) -> float:
        return max(self.residuals, default=0.0)


def _advance(loop, phi, drive, start, delta, free, tol, refinements: int = REFINEMENTS):
    """Move the driven angle from ``start`` by ``delta``; halve the step on failure.

    Returns the new configuration and its residual, or the last good
    configuration and the failing residual.
    """
    trial = phi.copy()
    trial[drive] = start + delta
    new, err = solve_closure(loop, trial, free, tol)
    if err <= tol or refinements == 0:
        return (new, err) if err <= tol else (phi, err)
    half, err = _advance(loop, phi, drive, start, delta / 2, free, tol, refinements - 1)
    if err > tol:
        return half, err
    return _advance(loop, half, drive, start + delta / 2, delta / 2, free, tol, refinements - 1)


def trace_mobility(loop: DHLoop, start, drive: int, sweep: Sequence[float],
                   step: float = STEP, tol: float = NEWTON_TOL, start_tol: float = 1e-8) -> TraceResult:
    """Follow the closure set while the ``drive`` angle runs through ``sweep``.

    The start configuration is first polished with the driven angle fixed.
    Between sweep values the driven angle advances in increments of at most
    ``step``; each increment is solved by damped Gauss-Newton from the
    previous solution.  A failing increment is halved up to ``REFINEMENTS``
    times before giving up.  A generic loop is rigid, so it fails on the
    first increment; a mobile loop fails only at a fold of the driven
    angle, where the joint reaches the end of its range.

    Raises
    ------
    NewtonDiverged
        When a step fails to converge; carries the last good configuration
        and the number of completed continuation steps (0 if the start
        itself cannot be made to close).
    """
    angles = start.angles if isinstance(start, LoopConfiguration) else np.asarray(start, dtype=float)
    free = [r for r in range(loop.n) if r != drive]
    phi, err = solve_closure(loop, angles, free, tol)
    if err > tol and err > start_tol:
        raise NewtonDiverged("start configuration does not close (residual %.3g)" % err,
                             last_good=None, steps=0)
    res = TraceResult(drive)
    steps = 0
    current = phi[drive]
    for target in sweep:
        delta = float(target) - current
        k = max(1, int(np.ceil(abs(delta) / step - 1e-12)))
        for j in range(1, k + 1):
            phi, err = _advance(loop, phi, drive, current + delta * (j - 1) / k, delta / k, free, tol)
            if err > tol:
                raise NewtonDiverged("continuation failed near drive angle %.6g (residual %.3g)"
                                     % (current + delta * j / k, err), last_good=phi.copy(), steps=steps)
            steps += 1
        current = float(target)
        res.driven.append(current)
        res.configurations.append(phi.copy())
        res.residuals.append(closure_residual_angles(loop, phi))
    return res


def best_drive(loop: DHLoop, phi) -> int:
    """Joint whose removal leaves the best conditioned closure Jacobian at ``phi``."""
    scores = []
    for r in range(loop.n):
        _, J = _residual_and_jacobian(loop, np.asarray(phi, dtype=float), [k for k in range(loop.n) if k != r])
        scores.append(np.linalg.svd(J, compute_uv=False)[-1])
    return int(np.argmax(scores))


# ---------------------------------------------------------------------------
# loops from axes
# ---------------------------------------------------------------------------

def loop_from_axes(axes: Sequence[LineAxis]) -> Tuple[DHLoop, np.ndarray]:
    """DH data and joint angles of the configuration with the given axes.

    Raises
    ------
    ParallelAxes
        If consecutive axes are parallel.
    """
    n = len(axes)
    pairs = [dh_between_lines(axes[r], axes[(r + 1) % n]) for r in range(n)]
    if any(p.degenerate for p in pairs):
        raise ParallelAxes("consecutive axes coincide")
    d = np.array([p.d for p in pairs])
    alpha = np.array([p.alpha for p in pairs])
    s = np.array([float(np.dot(pairs[r].foot - pairs[r - 1].foot2, axes[r].direction)) for r in range(n)])
    phi = np.empty(n)
    for r in range(n):
        a, b, u = pairs[r - 1].normal, pairs[r].normal, axes[r].direction
        phi[r] = np.arctan2(np.dot(np.cross(a, b), u), np.dot(a, b))
    return DHLoop(d, alpha, s), phi


def random_axes(n: int, rng, spread: float = 1.0) -> List[LineAxis]:
    out = []
    for _ in range(n):
        u = rng.standard_normal(3)
        out.append(LineAxis.through(spread * rng.standard_normal(3), u / np.linalg.norm(u)))
    return out


def random_6r(seed: int = 0) -> Tuple[DHLoop, np.ndarray]:
    """Generic 6R loop together with one closing configuration."""
    return loop_from_axes(random_axes(6, np.random.default_rng(seed)))


# ---------------------------------------------------------------------------
# 4R classification and three-axis test
# ---------------------------------------------------------------------------

def classify_4r(loop: DHLoop, tol: float = 1e-8) -> str:
    """One of ``planar``, ``spherical``, ``skew_isogram`` or ``rigid``.

    Raises
    ------
    Ambiguous
        When more than one class fits within ``tol``.
    """
    if loop.n != 4:
        raise ValueError("classify_4r needs a 4R loop")
    sn = np.sin(loop.alpha)
    hits = []
    if np.max(np.abs(sn)) <= tol:
        hits.append("planar")
    if max(np.max(np.abs(loop.d)), np.max(np.abs(loop.s))) <= tol:
        hits.append("spherical")
    if np.min(np.abs(sn)) > tol:
        if np.max(np.abs(bennett_residuals(loop.d, loop.alpha, loop.s))) <= tol:
            hits.append("skew_isogram")
    if len(hits) > 1:
        raise Ambiguous("several 4R classes fit: %s" % ", ".join(hits), candidates=hits)
    return hits[0] if hits else "rigid"


def bennett3_check(loop: DHLoop, r: int, tol: float = 1e-9) -> str:
    """Solvability case of the three-axis bond equation for axes ``r, r+1, r+2``.

    Returns ``parallel``, ``concurrent``, ``bennett`` or ``none``.  The
    test is invariant under reversing the first or third axis.
    """
    n = loop.n
    r1 = (r + 1) % n
    a0, a1 = loop.alpha[r], loop.alpha[r1]
    d0, d1 = loop.d[r], loop.d[r1]
    s_mid = loop.s[r1]
    if abs(np.sin(a0)) <= tol and abs(np.sin(a1)) <= tol:
        return "parallel"
    if abs(d0) <= tol and abs(d1) <= tol and abs(s_mid) <= tol:
        return "concurrent"
    if abs(np.sin(a0)) > tol and abs(np.sin(a1)) > tol and abs(s_mid) <= tol:
        if abs(abs(d0 / np.sin(a0)) - abs(d1 / np.sin(a1))) <= tol * max(1.0, abs(d0), abs(d1)):
            return "bennett"
    return "none"


@dataclass(frozen=True)
class Bond:
    """Complex joint parameters of a bond; ``inf`` marks a dropped factor."""

    t: Tuple[complex, ...]
    entangled: Optional[Tuple[int, int]] = None

    def imaginary_unit_indices(self, tol: float = 1e-8) -> List[int]:
        return [r for r, z in enumerate(self.t) if np.isfinite(z) and abs(z * z + 1) <= tol]

    def check(self, loop: DHLoop, tol: float = 1e-8) -> None:
        """Verify the bond: non-real, at least two entries ``+-i`` and a vanishing closure product.

        Raises
        ------
        ValueError
            If any of these fails.
        """
        if all(np.isreal(z) for z in self.t):
            raise ValueError("a bond is never real")
        if len(self.imaginary_unit_indices(tol)) < 2:
            raise ValueError("fewer than two parameters equal +-i")
        x = np.asarray(closure_product(loop, np.array(self.t, dtype=complex)).c)
        if np.max(np.abs(x)) > tol * max(1.0, float(np.max(np.abs(self.t)))) ** loop.n:
            raise ValueError("closure product does not vanish")


def bond3_solutions(loop: DHLoop, r: int, tol: float = 1e-9):
    """Complex ``t`` solving ``(s1 I + i) g_r (t + i) g_{r+1} (s3 I + i) = 0``.

    ``I`` is the imaginary unit and ``s1, s3`` range over the signs.  Returns
    a list of ``(s1, s3, t)``; ``t = inf`` stands for a dropped middle factor.
    Used as an independent check of :func:`bennett3_check`.
    """
    n = loop.n
    g0 = _link_array(loop.d[r], loop.alpha[r], loop.s[r]).astype(complex)
    g1 = _link_array(loop.d[(r + 1) % n], loop.alpha[(r + 1) % n], loop.s[(r + 1) % n]).astype(complex)
    out = []
    for s1, s3 in itertools.product((1, -1), repeat=2):
        L = np.zeros(8, dtype=complex)
        L[0], L[1] = s1 * 1j, 1.0
        R = np.zeros(8, dtype=complex)
        R[0], R[1] = s3 * 1j, 1.0
        left = dqmul(L, g0)
        right = dqmul(g1, R)
        A = dqmul(left, right)              # coefficient of t
        B = dqmul(dqmul(left, _I.astype(complex)), right)
        scale = max(1.0, np.max(np.abs(A)), np.max(np.abs(B)))
        if np.max(np.abs(A)) <= tol * scale:
            if np.max(np.abs(B)) <= tol * scale:
                out.append((s1, s3, np.inf))
            continue
        k = int(np.argmax(np.abs(A)))
        t = -B[k] / A[k]
        if np.max(np.abs(A * t + B)) <= 1e-7 * scale * max(1.0, abs(t)):
            out.append((s1, s3, t))
    return out


# ---------------------------------------------------------------------------
# bonds of 6R loops entangling opposite joints
# ---------------------------------------------------------------------------

def _q_plus(b1, b2, b3, c1, c2, c3, s1, s2, s3) -> np.ndarray:
    """Coefficients (lowest first) of the displayed quadratic in the indices 1, 2, 3."""
    shift = (b3 * c3 - b1 * c1) / 2 - 0.5j * s1
    const = (0.5j * (b1 * s2 + b3 * s3 + s2 * b3 * c2 + s3 * b1 * c2)
             - (b1 * b3 * c2 - s2 * s3 * c2) / 2
             + (s2 ** 2 + s3 ** 2 - b1 ** 2 + b2 ** 2 - b3 ** 2 - b2 ** 2 * c2 ** 2) / 4)
    return np.array([shift ** 2 + const, 2 * shift, 1.0 + 0j])


def bond_quadratics(loop: DHLoop, pair: int = 1, signs: Tuple[int, int] = (1, 1)):
    """Quadratics ``Q_1``, ``Q_4`` whose common zeros detect bonds entangling opposite joints.

    ``pair`` selects the opposite joints ``(pair, pair + 3)``; the data are
    relabelled cyclically so that these become joints 1 and 4.  ``signs``
    are the signs of the imaginary values of ``(t_1, t_4)``.  The ``(+, +)``
    case is the displayed formula; ``(-, -)`` is its complex conjugate;
    a negative sign on one joint is obtained by reversing that axis, which
    maps ``alpha -> pi - alpha`` and ``d -> -d`` on both adjacent links and
    ``s -> -s`` on the axis itself.

    Returns
    -------
    (ndarray, ndarray)
        Complex coefficient vectors, lowest degree first (monic).

    Raises
    ------
    DegenerateAngle
        If some ``sin(alpha_i)`` vanishes.
    """
    if loop.n != 6:
        raise ValueError("bond quadratics need a 6R loop")
    sg1, sg4 = signs
    if (sg1, sg4) == (-1, -1):
        q1, q4 = bond_quadratics(loop, pair, (1, 1))
        return np.conj(q1), np.conj(q4)
    idx = [(k + pair - 1) % 6 for k in range(6)]
    d = np.array([loop.d[k] for k in idx])
    a = np.array([loop.alpha[k] for k in idx])
    s = np.array([loop.s[k] for k in idx])
    for joint, sg in ((1, sg1), (4, sg4)):
        if sg == -1:
            for link in (joint - 1, joint):
                a[link] = np.pi - a[link]
                d[link] = -d[link]
            s[joint] = -s[joint]
    rel = DHLoop(d, a, s)
    b, c = rel.b, rel.c
    q1 = _q_plus(b[1], b[2], b[3], c[1], c[2], c[3], s[1], s[2], s[3])
    q4 = _q_plus(b[4], b[5], b[0], c[4], c[5], c[0], s[4], s[5], s[0])
    return q1, q4


def common_root(q1, q2, tol: float = 1e-8):
    """Shared roots of two polynomials (coefficients lowest first).

    Returns ``(found, roots)`` where ``roots`` are the roots of ``q1`` at
    which ``q2`` vanishes relative to its coefficient scale.
    """
    q1 = np.trim_zeros(np.asarray(q1, dtype=complex), "b")
    q2 = np.trim_zeros(np.asarray(q2, dtype=complex), "b")
    if len(q1) == 0 or len(q2) == 0:
        raise ValueError("polynomials must be nonzero")
    roots = np.roots(q1[::-1]) if len(q1) > 1 else np.array([], dtype=complex)
    shared = []
    for z in roots:
        val = np.polyval(q2[::-1], z)
        scale = np.sum(np.abs(q2) * max(1.0, abs(z)) ** np.arange(len(q2)))
        if abs(val) <= tol * scale:
            shared.append(complex(z))
    return bool(shared), shared


def alternating_square_sum(b) -> float:
    b = np.asarray(b, dtype=float)
    return float(b[0] ** 2 - b[1] ** 2 + b[2] ** 2 - b[3] ** 2 + b[4] ** 2 - b[5] ** 2)


# ---------------------------------------------------------------------------
# Bricard families
# ---------------------------------------------------------------------------

def bricard_orthogonal(b, tol: float = 1e-12) -> DHLoop:
    """Right angles, zero offsets and ``d_i = b_i``.

    Raises
    ------
    RelationViolated
        Unless ``b_0^2 - b_1^2 + b_2^2 - b_3^2 + b_4^2 - b_5^2 = 0``.
    """
    b = np.asarray(b, dtype=float)
    if len(b) != 6:
        raise ValueError("need six values")
    if abs(alternating_square_sum(b)) > tol * max(1.0, float(np.sum(b ** 2))):
        raise RelationViolated("alternating square sum is %.3g" % alternating_square_sum(b))
    return DHLoop(b, np.full(6, np.pi / 2), np.zeros(6))


def bricard_orthogonal_b5(b04) -> float:
    """Last entry making the alternating square sum vanish.

    Raises
    ------
    RelationViolated
        If the required square is negative.
    """
    b0, b1, b2, b3, b4 = (float(x) for x in b04)
    sq = b0 ** 2 - b1 ** 2 + b2 ** 2 - b3 ** 2 + b4 ** 2
    if sq < 0:
        raise RelationViolated("b5^2 = %.3g is negative" % sq)
    return float(np.sqrt(sq))


def bricard_line_symmetric(d, alpha, s) -> DHLoop:
    """6R loop repeating the three given links twice."""
    d, alpha, s = (np.asarray(x, dtype=float) for x in (d, alpha, s))
    if len(d) != 3 or len(alpha) != 3 or len(s) != 3:
        raise ValueError("need three values for each parameter")
    return DHLoop(np.tile(d, 2), np.tile(alpha, 2), np.tile(s, 2))


def _half_product(loop: DHLoop, phi3) -> np.ndarray:
    acc = np.eye(8)[0]
    for r in range(3):
        acc = dqmul(dqmul(acc, _rot(1, phi3[r])), _link_array(loop.d[r], loop.alpha[r], loop.s[r]))
    return acc


def _halfturn_residual(loop, phi3):
    Y = _half_product(loop, phi3)
    return np.array([Y[0], Y[4]])


def line_symmetric_solve(loop: DHLoop, phi0: float, guess=(0.5, 0.5), tol: float = NEWTON_TOL,
                         max_iter: int = 60) -> np.ndarray:
    """``(phi_0, phi_1, phi_2)`` making ``T_0 T_1 T_2`` a half turn, for fixed ``phi_0``.

    The two scalar parts of the half-product are driven to zero by Newton
    with a finite-difference Jacobian; solutions with a trivial
    half-product cannot occur since its scalar part is then nonzero.

    Raises
    ------
    NewtonDiverged
    """
    x = np.array([phi0, *guess], dtype=float)
    for _ in range(max_iter):
        F = _halfturn_residual(loop, x)
        if np.max(np.abs(F)) < tol:
            return x
        J = np.zeros((2, 2))
        h = 1e-7
        for k in (1, 2):
            e = np.zeros(3)
            e[k] = h
            J[:, k - 1] = (_halfturn_residual(loop, x + e) - _halfturn_residual(loop, x - e)) / (2 * h)
        try:
            step = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            step, *_ = np.linalg.lstsq(J, -F, rcond=None)
        lam = 1.0
        err = np.max(np.abs(F))
        for _h in range(MAX_HALVINGS + 1):
            trial = x.copy()
            trial[1:] += lam * step
            if np.max(np.abs(_halfturn_residual(loop, trial))) < err:
                x = trial
                break
            lam *= 0.5
        else:
            break
    if np.max(np.abs(_halfturn_residual(loop, x))) < tol:
        return x
    raise NewtonDiverged("no half-turn configuration found", last_good=None, steps=0)


def line_symmetric_configuration(loop: DHLoop, seed: int = 0, starts: int = 200) -> np.ndarray:
    """A doubled half-turn configuration ``(phi_0, phi_1, phi_2, phi_0, phi_1, phi_2)``."""
    rng = np.random.default_rng(seed)
    for _ in range(starts):
        try:
            x = line_symmetric_solve(loop, rng.uniform(-np.pi, np.pi), rng.uniform(-np.pi, np.pi, 2))
        except NewtonDiverged:
            continue
        return np.tile(x, 2)
    raise NewtonDiverged("no line-symmetric configuration from %d starts" % starts, last_good=None, steps=0)


def trace_line_symmetric(loop: DHLoop, start, sweep: Sequence[float], step: float = STEP) -> TraceResult:
    """Follow half-turn configurations ``(phi_0, phi_1, phi_2)`` while ``phi_0`` runs through ``sweep``.

    Each stored configuration is the doubled 6-tuple.

    Raises
    ------
    NewtonDiverged
    """
    x = np.asarray(start, dtype=float)[:3]
    x = line_symmetric_solve(loop, x[0], x[1:])
    res = TraceResult(0)
    steps = 0
    current = x[0]
    for target in sweep:
        delta = float(target) - current
        k = max(1, int(np.ceil(abs(delta) / step - 1e-12)))
        for j in range(1, k + 1):
            try:
                x = line_symmetric_solve(loop, current + delta * j / k, x[1:])
            except NewtonDiverged as exc:
                raise NewtonDiverged(str(exc), last_good=np.tile(x, 2), steps=steps) from exc
            steps += 1
        current = float(target)
        full = np.tile(x, 2)
        res.driven.append(current)
        res.configurations.append(full)
        res.residuals.append(closure_residual_angles(loop, full))
    return res


# plane-symmetric loops ---------------------------------------------------------

def plane_symmetric_relations(loop: DHLoop) -> np.ndarray:
    """Residuals of the plane-symmetric relations in this module's signed convention.

    With the mirror plane containing ``L_0`` and ``L_3`` and ``L_5, L_4`` the
    mirror images of ``L_1, L_2`` (directions mirrored, not reversed):
    ``d_0 = -d_5, d_1 = -d_4, d_2 = -d_3`` (signed distances change sign
    under a reflection), ``alpha_0 = alpha_5, alpha_1 = alpha_4,
    alpha_2 = alpha_3``, ``s_0 = s_3 = 0``, ``s_1 = -s_5`` and ``s_2 = -s_4``.
    """
    d, a, s = loop.d, loop.alpha, loop.s
    return np.array([d[0] + d[5], d[1] + d[4], d[2] + d[3],
                     a[0] - a[5], a[1] - a[4], a[2] - a[3],
                     s[0], s[3], s[1] + s[5], s[2] + s[4]])


def plane_symmetric_relations_verbatim(loop: DHLoop) -> np.ndarray:
    """The relations as usually displayed, with unsigned distances.

    ``|d_0| = |d_5|, |d_1| = |d_4|, |d_2| = |d_3|``, equal angles as above,
    ``s_1 = -s_0, s_2 = -s_5, s_0 = s_3 = 0``.  Together these force
    ``s_1 = 0`` which generic plane-symmetric loops violate; kept for
    comparison only.
    """
    d, a, s = np.abs(loop.d), loop.alpha, loop.s
    return np.array([d[0] - d[5], d[1] - d[4], d[2] - d[3],
                     a[0] - a[5], a[1] - a[4], a[2] - a[3],
                     s[1] + s[0], s[2] + s[5], s[0], s[3]])


def bricard_plane_symmetric(d, alpha, s, tol: float = 1e-9) -> DHLoop:
    """Validated plane-symmetric 6R loop.

    Raises
    ------
    RelationViolated
        If :func:`plane_symmetric_relations` is not satisfied.
    """
    loop = DHLoop(d, alpha, s)
    if loop.n != 6:
        raise ValueError("need a 6R loop")
    if np.max(np.abs(plane_symmetric_relations(loop))) > tol:
        raise RelationViolated("plane-symmetric relations violated")
    return loop


def reflect_line_xy(L: LineAxis) -> LineAxis:
    """Mirror image in the xy-plane."""
    R = np.diag([1.0, 1.0, -1.0])
    return LineAxis.through(R @ L.point, R @ L.direction)


def random_plane_symmetric(seed: int = 0) -> Tuple[DHLoop, np.ndarray]:
    """Plane-symmetric loop built from axes: ``L_0, L_3`` in the xy-plane, ``L_5, L_4`` mirrors of ``L_1, L_2``."""
    rng = np.random.default_rng(seed)

    def in_plane():
        p = rng.standard_normal(3)
        p[2] = 0.0
        u = rng.standard_normal(3)
        u[2] = 0.0
        return LineAxis.through(p, u)

    L0, L3 = in_plane(), in_plane()
    L1, L2 = random_axes(2, rng)
    axes = [L0, L1, L2, L3, reflect_line_xy(L2), reflect_line_xy(L1)]
    return loop_from_axes(axes)


def _quarter(loop: DHLoop, psi0, phi1, phi2, psi3) -> np.ndarray:
    """``R_x(psi_0) g_0 R_x(phi_1) g_1 R_x(phi_2) g_2 R_x(psi_3)``."""
    acc = _rot(1, psi0)
    for r, ph in ((0, None), (1, phi1), (2, phi2)):
        if ph is not None:
            acc = dqmul(acc, _rot(1, ph))
        acc = dqmul(acc, _link_array(loop.d[r], loop.alpha[r], loop.s[r]))
    return dqmul(acc, _rot(1, psi3))


def _mirror_residual(loop, x):
    """Components of ``X`` that must vanish for ``X`` to commute with the mirror.

    ``X`` commutes with the reflection in the xz-plane iff it is a rotation
    about an axis parallel to y or a translation in the xz-plane: primal
    ``i, k`` and dual scalar and ``j`` components vanish.
    """
    X = _quarter(loop, *x)
    return np.array([X[1], X[3], X[4], X[6]])


def plane_symmetric_solve(loop: DHLoop, psi0: float, guess=(0.3, 0.3, 0.3), tol: float = NEWTON_TOL,
                          max_iter: int = 80) -> np.ndarray:
    """Half-angle solution ``(psi_0, phi_1, phi_2, psi_3)`` with ``M X M = X``.

    ``psi_0`` is held fixed; Gauss-Newton acts on the other three.

    Raises
    ------
    NewtonDiverged
    """
    x = np.array([psi0, *guess], dtype=float)
    for _ in range(max_iter):
        F = _mirror_residual(loop, x)
        err = np.max(np.abs(F))
        if err < tol:
            return x
        J = np.zeros((4, 3))
        h = 1e-7
        for k in (1, 2, 3):
            e = np.zeros(4)
            e[k] = h
            J[:, k - 1] = (_mirror_residual(loop, x + e) - _mirror_residual(loop, x - e)) / (2 * h)
        step, *_ = np.linalg.lstsq(J, -F, rcond=None)
        lam = 1.0
        for _h in range(MAX_HALVINGS + 1):
            trial = x.copy()
            trial[1:] += lam * step
            if np.max(np.abs(_mirror_residual(loop, trial))) < err:
                x = trial
                break
            lam *= 0.5
        else:
            break
    if np.max(np.abs(_mirror_residual(loop, x))) < tol:
        return x
    raise NewtonDiverged("no plane-symmetric configuration found", last_good=None, steps=0)


def plane_symmetric_configuration(loop: DHLoop, seed: int = 0, starts: int = 200) -> np.ndarray:
    """Half-angle solution ``(psi_0, phi_1, phi_2, psi_3)`` from random starts."""
    rng = np.random.default_rng(seed)
    for _ in range(starts):
        try:
            return plane_symmetric_solve(loop, rng.uniform(-np.pi, np.pi), rng.uniform(-np.pi, np.pi, 3))
        except NewtonDiverged:
            continue
    raise NewtonDiverged("no plane-symmetric configuration from %d starts" % starts, last_good=None, steps=0)


def plane_symmetric_displacement(loop: DHLoop, x) -> DualQuaternion:
    """``X = R_x(psi_0) g_0 R_x(phi_1) g_1 R_x(phi_2) g_2 R_x(psi_3)``.

    At a solution ``X`` is a rotation about an axis parallel to the frame
    y-axis, which is the normal of the mirror plane.
    """
    return DualQuaternion.from_array(_quarter(loop, *x))


def plane_symmetric_extend(x) -> np.ndarray:
    """Full configuration ``(2 psi_0, phi_1, phi_2, 2 psi_3, phi_2, phi_1)``."""
    psi0, phi1, phi2, psi3 = x
    return np.array([2 * psi0, phi1, phi2, 2 * psi3, phi2, phi1])
