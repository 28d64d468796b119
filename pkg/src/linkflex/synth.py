"""Linkage synthesis from motion polynomials.

Two constructions live here: the skew isogram (Bennett 4R loop) obtained
from the two factorizations of a quadratic motion polynomial, and the
eight-link curve drawer assembled from factorization flips.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import Polynomial

from .dquat import (TOL, DualQuaternion, LineAxis, dq_to_isometry,
                    dq_to_isometry_right, linear_factor_axis)
from .errors import (DegenerateRemainder, InconsistentCase, NotARevolution,
                     NotGeneric, NotMotionPolynomial, NotRealizable,
                     ParallelAxes, PoleAtSample)
from .ncpoly import (MotionPoly, factorize, flip, norm_factors, norm_poly,
                     poly_distance, product)

K = DualQuaternion((0.0, 0.0, 0.0, 1.0))
I = DualQuaternion((0.0, 1.0, 0.0, 0.0))


# ---------------------------------------------------------------------------
# lines and Denavit-Hartenberg data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DHPair:
    """Invariant DH data of an ordered pair of oriented lines.

    ``foot`` lies on the first line and ``foot2`` on the second; the common
    normal runs along ``normal`` and ``d = <foot2 - foot, normal>``.
    """

    d: float
    alpha: float
    foot: np.ndarray
    foot2: np.ndarray
    normal: np.ndarray
    degenerate: bool = False


def dh_between_lines(L: LineAxis, L2: LineAxis, tol: float = 1e-12) -> DHPair:
    """Distance, angle and common normal of two lines.

    ``normal = u x u2 / |u x u2|`` so the angle from ``u`` to ``u2`` about
    ``normal`` lies in ``(0, pi)``.  Identical lines give ``d = alpha = 0``
    with ``degenerate=True``.

    Raises
    ------
    ParallelAxes
        For distinct parallel (or antiparallel) lines.
    """
    u, u2 = L.direction, L2.direction
    cr = np.cross(u, u2)
    sn = np.linalg.norm(cr)
    if sn <= 1e-12:
        if L.same_line(L2, atol=1e-9):
            p = L.point
            return DHPair(0.0, 0.0, p, p, np.zeros(3), degenerate=True)
        raise ParallelAxes("lines are parallel")
    n = cr / sn
    p, p2 = L.point, L2.point
    # closest points: solve p + a u + d n = p2 + b u2
    A = np.column_stack([u, -u2, n])
    a, b, d = np.linalg.solve(A, p2 - p)
    foot = p + a * u
    foot2 = p2 + b * u2
    alpha = float(np.arctan2(sn, np.dot(u, u2)))
    return DHPair(float(d), alpha, foot, foot2, n)


def loop_dh_from_axes(axes: Sequence[LineAxis]):
    """Cyclic DH data ``(d, alpha, s)`` of a closed chain of axes.

    ``d[r], alpha[r]`` describe the pair ``(L_r, L_{r+1})`` and ``s[r]`` is
    the signed offset along ``L_r`` from the foot of the normal to
    ``L_{r-1}`` to the foot of the normal to ``L_{r+1}``.
    """
    n = len(axes)
    pairs = [dh_between_lines(axes[r], axes[(r + 1) % n]) for r in range(n)]
    d = np.array([p.d for p in pairs])
    alpha = np.array([p.alpha for p in pairs])
    s = np.array([float(np.dot(pairs[r].foot - pairs[r - 1].foot2, axes[r].direction))
                  for r in range(n)])
    return d, alpha, s


# ---------------------------------------------------------------------------
# Bennett linkages
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SkewIsogram:
    """Bennett 4R loop with axes ``L1, K1, K2, L2`` in cyclic order.

    Axes are given in the reference pose ``t = infinity`` where all four
    links coincide.  ``factorizations`` holds the two pairs ``(r, w)`` with
    ``P = (t - r)(t - w)``.
    """

    axes: Tuple[LineAxis, LineAxis, LineAxis, LineAxis]
    d: np.ndarray
    alpha: np.ndarray
    s: np.ndarray
    factorizations: Tuple[Tuple[DualQuaternion, DualQuaternion], ...] = ()

    @property
    def L1(self):
        return self.axes[0]

    @property
    def K1(self):
        return self.axes[1]

    @property
    def K2(self):
        return self.axes[2]

    @property
    def L2(self):
        return self.axes[3]

    def bennett_residuals(self) -> np.ndarray:
        return bennett_residuals(self.d, self.alpha, self.s)


def bennett_residuals(d, alpha, s) -> np.ndarray:
    """Residuals of the Bennett conditions for cyclic 4R data."""
    d, alpha, s = (np.asarray(x, dtype=float) for x in (d, alpha, s))
    return np.array([
        d[1] - d[3], d[0] - d[2], alpha[1] - alpha[3], alpha[0] - alpha[2],
        d[1] / np.sin(alpha[1]) - d[0] / np.sin(alpha[0]),
        *s,
    ])


def _axis_of(h: DualQuaternion, tol=TOL) -> LineAxis:
    rt = linear_factor_axis(-h, tol)
    if rt.kind != "revolution":
        raise NotARevolution("factor t - h is a translation")
    return rt.axis


def bennett_from_conic(P: MotionPoly, tol: float = TOL) -> SkewIsogram:
    """Bennett linkage whose coupler follows the conic ``[P(t)]``.

    Raises
    ------
    NotGeneric
        If the norm of ``P`` is not a product of two distinct irreducible
        quadratics.
    """
    if P.degree != 2:
        raise ValueError("expected a quadratic motion polynomial")
    norm_poly(P, tol)  # raises NotMotionPolynomial
    factors = norm_factors(P, tol)
    M1, M2 = factors
    if np.allclose(M1.coef, M2.coef, atol=1e-7):
        raise NotGeneric("norm polynomial has a repeated factor")
    for M in (M1, M2):
        c0, c1, _ = M.coef
        if c1 * c1 - 4 * c0 >= -1e-10:
            raise NotGeneric("norm polynomial has a real root")
    try:
        r1, w1 = [DualQuaternion.from_array(-f.coeffs[0]) for f in factorize(P, [M2, M1], tol=tol)]
        r2, w2 = [DualQuaternion.from_array(-f.coeffs[0]) for f in factorize(P, [M1, M2], tol=tol)]
    except (DegenerateRemainder, InconsistentCase) as exc:
        raise NotGeneric("quadratic has no generic factorization: %s" % exc) from exc
    axes = (_axis_of(r1), _axis_of(w1), _axis_of(w2), _axis_of(r2))
    d, alpha, s = loop_dh_from_axes(axes)
    return SkewIsogram(axes, d, alpha, s, ((r1, w1), (r2, w2)))


def random_bennett_poly(rng, spread: float = 1.0) -> MotionPoly:
    """Product ``(t - r)(t - w)`` of two random revolution factors.

    The norm factors are distinct irreducible quadratics with probability one.
    """
    def rand_h():
        u = rng.standard_normal(3)
        u /= np.linalg.norm(u)
        p = spread * rng.standard_normal(3)
        scale = rng.uniform(0.5, 2.0)
        shift = rng.uniform(-1.0, 1.0)
        m = np.cross(p, u)
        return DualQuaternion((shift, *(scale * u)), (0.0, *(scale * m)))
    return MotionPoly.linear(rand_h()) * MotionPoly.linear(rand_h())


# ---------------------------------------------------------------------------
# curve drawers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RationalPlaneCurve:
    """Planar curve ``(x_num / den, y_num / den, 0)``."""

    x_num: Polynomial
    y_num: Polynomial
    den: Polynomial

    def __post_init__(self):
        for name in ("x_num", "y_num", "den"):
            v = getattr(self, name)
            if not isinstance(v, Polynomial):
                object.__setattr__(self, name, Polynomial(np.asarray(v, dtype=float)))
        if not np.any(self.den.coef):
            raise ValueError("denominator is identically zero")

    @classmethod
    def ellipse(cls, a: float, b: float) -> "RationalPlaneCurve":
        """Ellipse ``(x+a)^2/a^2 + y^2/b^2 = 1`` through the origin."""
        return cls(Polynomial([-2.0 * a]), Polynomial([0.0, 2.0 * b]), Polynomial([1.0, 0.0, 1.0]))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        den = self.den(t)
        return np.stack([self.x_num(t) / den, self.y_num(t) / den, np.zeros_like(t)], axis=-1)

    def to_json(self) -> dict:
        return {"x_num": self.x_num.coef.tolist(), "y_num": self.y_num.coef.tolist(),
                "den": self.den.coef.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "RationalPlaneCurve":
        return cls(Polynomial(obj["x_num"]), Polynomial(obj["y_num"]), Polynomial(obj["den"]))


def translation_poly(C: RationalPlaneCurve) -> MotionPoly:
    """``den + (e/2)(x_num i + y_num j)``; its class translates the origin to ``C(t)``."""
    n = max(len(C.den.coef), len(C.x_num.coef), len(C.y_num.coef))
    arr = np.zeros((n, 8))
    arr[:len(C.den.coef), 0] = C.den.coef
    arr[:len(C.x_num.coef), 5] = 0.5 * C.x_num.coef
    arr[:len(C.y_num.coef), 6] = 0.5 * C.y_num.coef
    lead = arr[n - 1, 0]
    if lead == 0:
        raise NotRealizable("denominator degree must dominate the numerators")
    return MotionPoly(arr / lead)


_PREMULTIPLIERS = {"k": K, "i": I}


@dataclass(frozen=True)
class CurveMotion:
    """Motion polynomial for a curve, with the rotational premultiplier used (if any)."""

    poly: MotionPoly
    premultiplier: Optional[str]
    factors: Tuple[MotionPoly, ...]


def curve_motion(C: RationalPlaneCurve, premultiplier: str = "k",
                 choices=None, tol: float = TOL) -> CurveMotion:
    """Factorizable motion polynomial whose class maps the origin to ``C(t)``.

    The translation polynomial is tried first.  If its factorization is
    obstructed, it is multiplied on the left by ``t - k`` (or ``t - i``),
    which fixes the origin.  ``choices`` is forwarded to
    :func:`~linkflex.ncpoly.factorize` for the premultiplied polynomial.

    Raises
    ------
    NotRealizable
        If the premultiplied polynomial is still obstructed.
    """
    P = translation_poly(C)
    try:
        return CurveMotion(P, None, tuple(factorize(P, tol=tol)))
    except (DegenerateRemainder, InconsistentCase):
        pass
    Q = MotionPoly.linear(_PREMULTIPLIERS[premultiplier]) * P
    try:
        return CurveMotion(Q, premultiplier, tuple(factorize(Q, choices=choices, tol=tol)))
    except (DegenerateRemainder, InconsistentCase) as exc:
        raise NotRealizable("obstruction persists after premultiplication: %s" % exc) from exc


def curve_to_motion_poly(C: RationalPlaneCurve, premultiplier: str = "k",
                         tol: float = TOL) -> MotionPoly:
    return curve_motion(C, premultiplier, tol=tol).poly


@dataclass
class FactorizationGraph:
    """Directed graph whose edges carry linear factors ``t - h``.

    An edge ``u -> v`` labelled ``t - h`` gives the pose of link ``u``
    relative to link ``v``; products along directed paths multiply in
    traversal order.
    """

    vertices: List[int]
    edges: Dict[Tuple[int, int], MotionPoly] = field(default_factory=dict)
    h: Dict[int, DualQuaternion] = field(default_factory=dict)

    def successors(self, v):
        return [b for (a, b) in self.edges if a == v]

    def paths(self, src, dst):
        if src == dst:
            return [[src]]
        out = []
        for nxt in self.successors(src):
            for p in self.paths(nxt, dst):
                out.append([src] + p)
        return out

    def path_product(self, path) -> MotionPoly:
        return product([self.edges[(a, b)] for a, b in zip(path, path[1:])])

    def path_independence_residual(self) -> float:
        worst = 0.0
        for u, v in itertools.permutations(self.vertices, 2):
            ps = self.paths(u, v)
            if len(ps) < 2:
                continue
            ref = self.path_product(ps[0])
            for p in ps[1:]:
                worst = max(worst, poly_distance(ref, self.path_product(p)))
        return worst


def default_spare(d: float = 1.0) -> DualQuaternion:
    """``2k + d e j``: a revolution with norm factor ``t^2 + 4``."""
    return DualQuaternion((0.0, 0.0, 0.0, 2.0), (0.0, 0.0, d, 0.0))


def build_drawer(factors: Sequence[MotionPoly], spare: Optional[DualQuaternion] = None,
                 tol: float = TOL) -> FactorizationGraph:
    """Eight-link drawer from ``Q = (t - h1)(t - h2)(t - h3)`` and a spare ``h0``.

    Vertices 1-4 carry the given factorization; vertices 5-8 come from the
    flips ``(h0, h1) -> (h4, h5)``, ``(h5, h2) -> (h6, h7)`` and
    ``(h7, h3) -> (h8, h9)``.

    Raises
    ------
    NotGeneric
        If the spare shares a norm factor with ``Q``.
    NotARevolution
        If some edge label is a translation.
    """
    if len(factors) != 3:
        raise ValueError("need three linear factors")
    if spare is None:
        spare = default_spare()
    h = {0: spare}
    for r, f in enumerate(factors, start=1):
        h[r] = DualQuaternion.from_array(-f.coeffs[0])
    h[4], h[5] = flip(h[0], h[1], tol)
    h[6], h[7] = flip(h[5], h[2], tol)
    h[8], h[9] = flip(h[7], h[3], tol)
    edge_h = {(1, 2): 1, (2, 3): 2, (3, 4): 3, (5, 1): 0, (5, 6): 4, (6, 2): 5,
              (6, 7): 6, (7, 3): 7, (7, 8): 8, (8, 4): 9}
    edges = {}
    for e, r in edge_h.items():
        if linear_factor_axis(-h[r], tol=1e-7).kind != "revolution":
            raise NotARevolution("edge %s with h%d is a translation (prismatic joint)" % (e, r))
        edges[e] = MotionPoly.linear(h[r])
    return FactorizationGraph(list(range(1, 9)), edges, h)


def ellipse_drawer(a: float, b: float, c: float = 1.0, d: float = 1.0,
                   tol: float = TOL) -> Tuple[FactorizationGraph, CurveMotion]:
    """Drawer for the ellipse with semi-axes ``a, b`` and free constants ``c, d``."""
    cm = curve_motion(RationalPlaneCurve.ellipse(a, b), choices=[None, None, (0.0, -c, 0.0)], tol=tol)
    if cm.premultiplier is None:
        raise NotGeneric("circle: the translation polynomial factors directly")
    return build_drawer(cm.factors, default_spare(d), tol), cm


def _eval_projective(poly: MotionPoly, t: float) -> DualQuaternion:
    """Value at ``t`` in the chart ``t`` for ``|t| <= 1`` and ``1/t`` beyond."""
    if np.isinf(t):
        return poly.leading
    if abs(t) <= 1.0:
        return poly(t)
    s = 1.0 / t
    rev = poly.coeffs[::-1]
    return DualQuaternion.from_array((s ** np.arange(len(rev))) @ rev)


def link_pose(linkage: FactorizationGraph, vertex: int, fixed: int, t: float, tol: float = TOL):
    """Pose of ``vertex`` relative to ``fixed`` at parameter ``t``.

    The path product acts on the right, so the factor next to ``vertex``
    is applied last; at ``t = infinity`` every pose is the identity.
    """
    if vertex == fixed:
        return dq_to_isometry(DualQuaternion.identity())
    paths = linkage.paths(vertex, fixed)
    if not paths:
        raise ValueError("no directed path from %r to %r" % (vertex, fixed))
    path = paths[0]
    acc = DualQuaternion.identity()
    for a, b in zip(path, path[1:]):
        val = _eval_projective(linkage.edges[(a, b)], t)
        if np.sum(np.asarray(val.c[:4]) ** 2) <= tol * tol:
            raise PoleAtSample("edge %s degenerates at t=%g" % ((a, b), t))
        acc = acc * val
    return dq_to_isometry_right(acc, tol=1e-7)


def trace(linkage: FactorizationGraph, fixed: int, marked: int, samples,
          point=(0.0, 0.0, 0.0), tol: float = TOL) -> np.ndarray:
    """Positions of ``point`` (in the marked link's frame) relative to the fixed link."""
    pt = np.asarray(point, dtype=float)
    return np.array([link_pose(linkage, marked, fixed, float(t), tol)(pt) for t in samples])


def trace_path_spread(linkage: FactorizationGraph, fixed: int, marked: int, samples,
                      point=(0.0, 0.0, 0.0)) -> float:
    """Max disagreement of the traced point across all directed paths."""
    pt = np.asarray(point, dtype=float)
    worst = 0.0
    for t in samples:
        vals = []
        for path in linkage.paths(marked, fixed):
            acc = DualQuaternion.identity()
            for a, b in zip(path, path[1:]):
                acc = acc * _eval_projective(linkage.edges[(a, b)], float(t))
            vals.append(dq_to_isometry_right(acc, tol=1e-7)(pt))
        vals = np.array(vals)
        worst = max(worst, float(np.max(np.abs(vals - vals[0]))))
    return worst


def sample_grid(n: int, margin: float = 1e-3) -> np.ndarray:
    """``n`` parameters covering the projective line, away from the chart seam ``|t| = 1``.

    Angles ``theta`` in ``(-pi/2, pi/2)`` map to ``t = tan(theta)``; samples
    within ``margin`` of ``|t| = 1`` are nudged off it.
    """
    theta = np.linspace(-np.pi / 2, np.pi / 2, n + 1)[:-1] + np.pi / (2 * n)
    t = np.tan(theta)
    near = np.abs(np.abs(t) - 1.0) < margin
    t[near] = np.sign(t[near]) * (1.0 + margin)
    return t
