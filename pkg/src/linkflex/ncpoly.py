"""Polynomials with (dual) quaternion coefficients in a central variable ``t``.

Coefficients are stored lowest degree first as an ``(n, 8)`` array; a
:class:`QuatPoly` is a :class:`MotionPoly` whose dual parts vanish.  Real
polynomials are :class:`numpy.polynomial.Polynomial` instances.
"""
from __future__ import annotations

import itertools
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import Polynomial

from .dquat import DualQuaternion, Quaternion, dqconj, dqinv, dqmul, qconj, qmul
from .errors import (DegenerateRemainder, InconsistentCase, InfinitelyMany,
                     NotGeneric, NotMotionPolynomial, ZeroDivisor)

TOL = 1e-9
DEDUP_TOL = 1e-7

RealPoly = Polynomial


def _coeff_array(c) -> np.ndarray:
    if isinstance(c, DualQuaternion):
        return np.asarray(c.c)
    if isinstance(c, Quaternion):
        return np.concatenate([c.c, np.zeros(4)])
    a = np.asarray(c)
    if a.ndim == 0:
        out = np.zeros(8, dtype=np.result_type(a, float))
        out[0] = a
        return out
    if a.shape == (4,):
        return np.concatenate([a, np.zeros(4, dtype=a.dtype)])
    return a


class MotionPoly:
    """Polynomial ``sum_k c_k t^k`` with dual quaternion coefficients ``c_k``.

    Trailing coefficients that are exactly zero are dropped, so the
    leading coefficient is nonzero unless the polynomial is zero.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        if isinstance(coeffs, np.ndarray) and coeffs.ndim == 2:
            arr = coeffs
            if arr.shape[1] == 4:
                arr = np.concatenate([arr, np.zeros_like(arr)], axis=1)
        else:
            rows = [_coeff_array(c) for c in coeffs]
            arr = np.array(rows) if rows else np.zeros((0, 8))
        arr = np.array(arr, dtype=np.result_type(arr, float))
        n = len(arr)
        while n > 0 and not np.any(arr[n - 1]):
            n -= 1
        arr = arr[:n]
        arr.setflags(write=False)
        self.coeffs = arr

    # construction -------------------------------------------------------
    @classmethod
    def linear(cls, h) -> "MotionPoly":
        """``t - h``."""
        return cls([-_coeff_array(h), _coeff_array(1.0)])

    @classmethod
    def from_real(cls, p) -> "MotionPoly":
        p = Polynomial(p) if not isinstance(p, Polynomial) else p
        arr = np.zeros((len(p.coef), 8))
        arr[:, 0] = p.coef
        return cls(arr)

    @classmethod
    def from_quaternions(cls, coeffs) -> "MotionPoly":
        return cls(np.array([_coeff_array(c) for c in coeffs]))

    # basic properties ---------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> DualQuaternion:
        return DualQuaternion.from_array(self.coeffs[-1])

    def coefficient(self, k) -> DualQuaternion:
        return DualQuaternion.from_array(self.coeffs[k])

    @property
    def is_quaternion(self) -> bool:
        return not np.any(self.coeffs[:, 4:])

    @property
    def scale(self) -> float:
        return float(np.max(np.abs(self.coeffs))) if len(self.coeffs) else 0.0

    def is_zero(self, tol=0.0) -> bool:
        return len(self.coeffs) == 0 or bool(np.max(np.abs(self.coeffs)) <= tol)

    def trimmed(self, tol) -> "MotionPoly":
        """Drop leading coefficients whose entries are all below ``tol``."""
        arr = np.array(self.coeffs)
        n = len(arr)
        while n > 0 and np.max(np.abs(arr[n - 1])) <= tol:
            n -= 1
        return type(self)(arr[:n])

    # algebra ----------------------------------------------------------------------
    def _new(self, arr):
        return MotionPoly(arr)

    def __mul__(self, other):
        if isinstance(other, MotionPoly):
            a, b = self.coeffs, other.coeffs
            if len(a) == 0 or len(b) == 0:
                return MotionPoly(np.zeros((0, 8)))
            out = np.zeros((len(a) + len(b) - 1, 8), dtype=np.result_type(a, b))
            for k, bk in enumerate(b):
                out[k:k + len(a)] += dqmul(a, bk)
            return MotionPoly(out)
        if isinstance(other, (DualQuaternion, Quaternion)):
            return MotionPoly(dqmul(self.coeffs, _coeff_array(other)))
        return MotionPoly(self.coeffs * other)

    def __rmul__(self, other):
        if isinstance(other, (DualQuaternion, Quaternion)):
            return MotionPoly(dqmul(_coeff_array(other), self.coeffs))
        return MotionPoly(self.coeffs * other)

    def __add__(self, other):
        if not isinstance(other, MotionPoly):
            other = MotionPoly([_coeff_array(other)])
        n = max(len(self.coeffs), len(other.coeffs))
        out = np.zeros((n, 8), dtype=np.result_type(self.coeffs, other.coeffs))
        out[:len(self.coeffs)] += self.coeffs
        out[:len(other.coeffs)] += other.coeffs
        return MotionPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return MotionPoly(-self.coeffs)

    def __sub__(self, other):
        if not isinstance(other, MotionPoly):
            other = MotionPoly([_coeff_array(other)])
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def conj(self) -> "MotionPoly":
        return MotionPoly(dqconj(self.coeffs))

    def __call__(self, t) -> DualQuaternion:
        """Evaluate at a (real or complex) scalar ``t``."""
        powers = np.asarray(t) ** np.arange(len(self.coeffs))
        return DualQuaternion.from_array(powers @ self.coeffs)

    def right_eval(self, h) -> DualQuaternion:
        """``sum_k c_k h^k``; zero iff ``t - h`` is a right factor."""
        h = _coeff_array(h)
        acc = np.zeros(8)
        acc[0] = 1.0
        out = np.zeros(8)
        for c in self.coeffs:
            out = out + dqmul(c, acc)
            acc = dqmul(acc, h)
        return DualQuaternion.from_array(out)

    def allclose(self, other, atol=TOL) -> bool:
        return poly_distance(self, other) <= atol

    def __repr__(self):
        return "%s(degree=%d)" % (type(self).__name__, self.degree)


class QuatPoly(MotionPoly):
    """Polynomial over the quaternions (dual parts identically zero)."""

    __slots__ = ()

    def __init__(self, coeffs):
        super().__init__(coeffs)
        if np.any(self.coeffs[:, 4:]):
            raise ValueError("QuatPoly coefficients must have zero dual part")


def poly_distance(a: MotionPoly, b: MotionPoly) -> float:
    """Max coefficientwise difference (zero padded)."""
    n = max(len(a.coeffs), len(b.coeffs))
    x = np.zeros((n, 8), dtype=complex)
    y = np.zeros((n, 8), dtype=complex)
    x[:len(a.coeffs)] = a.coeffs
    y[:len(b.coeffs)] = b.coeffs
    return float(np.max(np.abs(x - y))) if n else 0.0


def product(factors: Sequence[MotionPoly]) -> MotionPoly:
    out = MotionPoly([1.0])
    for f in factors:
        out = out * f
    return out


def random_normed_quaternion_poly(degree: int, rng) -> MotionPoly:
    """Monic polynomial with standard normal quaternion coefficients."""
    c = np.zeros((degree + 1, 8))
    c[:degree, :4] = rng.standard_normal((degree, 4))
    c[degree, 0] = 1.0
    return MotionPoly(c)


# ---------------------------------------------------------------------------
# division
# ---------------------------------------------------------------------------

def _check_divisor(B: MotionPoly):
    if B.is_zero():
        raise ZeroDivisor("division by the zero polynomial")
    lead = B.coeffs[-1]
    if np.sum(np.abs(lead[:4]) ** 2) == 0:
        raise ZeroDivisor("leading coefficient of the divisor is not invertible")
    return dqinv(lead)


def poly_div_right(A: MotionPoly, B: MotionPoly) -> Tuple[MotionPoly, MotionPoly]:
    """Return ``Q, R`` with ``A = Q B + R`` and ``deg R < deg B``."""
    binv = _check_divisor(B)
    m, n = A.degree, B.degree
    rem = np.array(A.coeffs, dtype=np.result_type(A.coeffs, B.coeffs))
    if m < n:
        return MotionPoly(np.zeros((0, 8))), MotionPoly(rem)
    quot = np.zeros((m - n + 1, 8), dtype=rem.dtype)
    for k in range(m - n, -1, -1):
        h = dqmul(rem[k + n], binv)
        quot[k] = h
        rem[k:k + n + 1] -= dqmul(h, B.coeffs)
        rem[k + n] = 0.0
    return MotionPoly(quot), MotionPoly(rem[:n])


def poly_div_right_recursive(A: MotionPoly, B: MotionPoly) -> Tuple[MotionPoly, MotionPoly]:
    """Same as :func:`poly_div_right`, by induction on ``deg A``."""
    binv = _check_divisor(B)
    if A.degree < B.degree:
        return MotionPoly(np.zeros((0, 8))), A
    shift = A.degree - B.degree
    h = dqmul(A.coeffs[-1], binv)
    mono = np.zeros((shift + 1, 8))
    mono[shift] = h
    term = MotionPoly(mono)
    rest = A - term * B
    arr = np.array(rest.coeffs[:A.degree])
    Q1, R = poly_div_right_recursive(MotionPoly(arr), B)
    return Q1 + term, R


def norm_poly(A: MotionPoly, tol: float = TOL) -> Polynomial:
    """Norm polynomial ``N(A) = conj(A) A`` as a real polynomial.

    Raises
    ------
    NotMotionPolynomial
        If the dual part of the norm does not vanish (relative to the
        squared coefficient scale).
    """
    n = A.conj() * A
    c = n.coeffs
    scale = max(A.scale ** 2, 1e-300)
    if len(c) and np.max(np.abs(c[:, 4:])) > tol * scale:
        raise NotMotionPolynomial("dual part of the norm polynomial does not vanish")
    return Polynomial(np.real(c[:, 0]) if len(c) else [0.0])


# ---------------------------------------------------------------------------
# real polynomial factorization
# ---------------------------------------------------------------------------

def _companion_roots(coef) -> np.ndarray:
    coef = np.trim_zeros(np.asarray(coef, dtype=float), "b")
    n = len(coef) - 1
    if n < 1:
        return np.zeros(0, dtype=complex)
    monic = coef / coef[-1]
    C = np.zeros((n, n))
    C[1:, :-1] = np.eye(n - 1)
    C[:, -1] = -monic[:-1]
    # geev balances the matrix before the QR iteration
    return np.linalg.eigvals(C)


def real_poly_roots(P: Polynomial, polish: int = 3) -> np.ndarray:
    roots = _companion_roots(P.coef).astype(complex)
    dP = P.deriv()
    for _ in range(polish):
        f = P(roots)
        df = dP(roots)
        ok = np.abs(df) > 1e-8 * np.maximum(1.0, np.abs(f))
        step = np.zeros_like(roots)
        step[ok] = f[ok] / df[ok]
        roots = roots - step
    return roots


def real_poly_factor(P: Polynomial, cluster_tol: float = 1e-4, imag_tol: float = 1e-9):
    """Monic real irreducible factors of ``P`` with multiplicities.

    Returns a list of ``(factor, multiplicity)`` with linear factors
    ``t - r`` and irreducible quadratics ``t^2 - 2 Re(z) t + |z|^2``; the
    product times ``P.coef[-1]`` reconstructs ``P``.  Clustered numeric
    roots are averaged, which restores multiple roots.
    """
    P = Polynomial(np.trim_zeros(np.asarray(P.coef, dtype=float), "b"))
    if len(P.coef) == 0:
        raise ValueError("zero polynomial")
    roots = list(real_poly_roots(P))
    clusters: List[List[complex]] = []
    for r in sorted(roots, key=lambda z: (z.real, z.imag)):
        for cl in clusters:
            c = np.mean(cl)
            if abs(r - c) <= cluster_tol * max(1.0, abs(c)):
                cl.append(r)
                break
        else:
            clusters.append([r])
    centers = [(complex(np.mean(cl)), len(cl)) for cl in clusters]
    out = []
    used = [False] * len(centers)
    for i, (z, m) in enumerate(centers):
        if used[i]:
            continue
        used[i] = True
        if abs(z.imag) <= max(imag_tol, cluster_tol) * max(1.0, abs(z)):
            out.append((Polynomial([-z.real, 1.0]), m))
            continue
        # match the conjugate cluster
        best, bj = None, None
        for j, (w, mw) in enumerate(centers):
            if not used[j] and (best is None or abs(w - z.conjugate()) < best):
                best, bj = abs(w - z.conjugate()), j
        if bj is not None:
            used[bj] = True
            w = 0.5 * (z + centers[bj][0].conjugate())
        else:
            w = z
        w = complex(w.real, abs(w.imag))
        out.append((Polynomial([abs(w) ** 2, -2 * w.real, 1.0]), m))
    out.sort(key=lambda fm: tuple(np.round(fm[0].coef[::-1], 12)))
    return out


def norm_factors(A: MotionPoly, tol: float = TOL) -> List[Polynomial]:
    """Monic quadratic factors of ``N(A)``, repeated by multiplicity.

    Complex-conjugate root pairs give irreducible quadratics; a real root of
    even multiplicity ``2k`` gives ``(t - r)^2`` repeated ``k`` times.
    """
    N = norm_poly(A, tol)
    out: List[Polynomial] = []
    for f, m in real_poly_factor(N):
        if f.degree() == 2:
            out.extend([f] * m)
        else:
            if m % 2:
                raise NotMotionPolynomial("real root of odd multiplicity in the norm")
            r = -f.coef[0]
            out.extend([Polynomial([r * r, -2 * r, 1.0])] * (m // 2))
    return out


def _is_real_double(M: Polynomial, tol) -> bool:
    c0, c1, _ = M.coef
    return c1 * c1 - 4 * c0 >= -tol * max(1.0, abs(c0))


# ---------------------------------------------------------------------------
# right zeros and factorization
# ---------------------------------------------------------------------------

def _pure_orthogonal(v, q):
    v = np.asarray(v, dtype=float)
    q = np.asarray(q, dtype=float)
    nq = np.dot(q, q)
    return v - (np.dot(v, q) / nq) * q if nq > 0 else v


def right_zero_mod(A: MotionPoly, M: Polynomial, choice=None, tol: float = TOL) -> DualQuaternion:
    """A right zero ``h`` of ``A`` with ``N(t - h) = M``.

    ``M`` must be a monic quadratic irreducible over the reals.  With
    ``A = Q M + R``:

    * ``R = 0``: the root ``a + b i`` of ``M`` (``b > 0``) lifts to
      ``a - b i``.
    * ``R = u t + v`` with ``u`` invertible: ``h = -u^-1 v``.
    * ``u`` not invertible (only over the dual quaternions): ``h`` must be
      a common zero of ``M`` and ``R``; such zeros form a family
      ``h0 + e w`` with ``w`` pure and orthogonal to ``h0 - a``.  ``choice``
      (a 3-vector, projected onto that plane) selects ``w``; default 0.

    Raises
    ------
    DegenerateRemainder
        When ``M`` and ``R`` have no common zero.
    InconsistentCase
        When ``R`` is a nonzero constant.
    """
    c0, c1, c2 = np.asarray(M.coef, dtype=float)
    if abs(c2 - 1.0) > 1e-12:
        raise ValueError("M must be monic quadratic")
    disc = c1 * c1 - 4 * c0
    if disc >= 0:
        raise ValueError("M must be irreducible over the reals")
    a_re, b_im = -c1 / 2.0, np.sqrt(-disc) / 2.0
    scale = max(1.0, A.scale)
    _, R = poly_div_right(A, MotionPoly.from_real(M))
    Rc = np.zeros((2, 8))
    Rc[:len(R.coeffs)] = np.real(R.coeffs)
    u, v = Rc[1], Rc[0]
    if np.max(np.abs(Rc)) <= tol * scale:
        return DualQuaternion((a_re, -b_im, 0.0, 0.0))
    if np.max(np.abs(u)) <= tol * scale:
        raise InconsistentCase("remainder modulo M is a nonzero constant")
    if np.linalg.norm(u[:4]) > np.sqrt(tol) * scale:
        return DualQuaternion.from_array(-dqmul(dqinv(u), v))
    # u = e*u1 is a zero divisor
    if np.linalg.norm(v[:4]) > np.sqrt(tol) * scale:
        raise DegenerateRemainder("remainder has no right zero")
    u1, v1 = u[4:], v[4:]
    if np.linalg.norm(u1) <= tol * scale:
        raise InconsistentCase("remainder modulo M is degenerate")
    h0 = -qmul(qconj(u1) / np.dot(u1, u1), v1)
    vec = h0[1:]
    if abs(h0[0] - a_re) > 1e-7 * scale or abs(np.linalg.norm(vec) - b_im) > 1e-7 * scale:
        raise DegenerateRemainder("remainder and norm factor have no common zero")
    w = np.zeros(3) if choice is None else _pure_orthogonal(choice, vec)
    return DualQuaternion(h0, (0.0, *w))


def factorize(A: MotionPoly, factor_order: Optional[Sequence[Polynomial]] = None,
              choices=None, tol: float = TOL) -> List[MotionPoly]:
    """Factor a monic motion polynomial into linear factors.

    Parameters
    ----------
    factor_order
        Quadratic norm factors ``M_1, ..., M_d``; the result satisfies
        ``N(t - h_r) = M_r``.  Defaults to :func:`norm_factors` order.
    choices
        Optional sequence (indexed like ``factor_order``) of 3-vectors used
        when a right zero is only determined up to a family.

    Returns
    -------
    list of MotionPoly
        Linear factors ``t - h_1, ..., t - h_d`` whose product is ``A``.
    """
    d = A.degree
    lead = A.coeffs[-1]
    if np.max(np.abs(lead - np.eye(8)[0])) > tol:
        raise ValueError("factorize expects a monic (normed) polynomial")
    if factor_order is None:
        factor_order = norm_factors(A, tol)
    factor_order = [Polynomial(M) if not isinstance(M, Polynomial) else M for M in factor_order]
    if len(factor_order) != d:
        raise ValueError("need %d norm factors, got %d" % (d, len(factor_order)))
    N = norm_poly(A, tol)
    prodM = Polynomial([1.0])
    for M in factor_order:
        prodM = prodM * M
    if np.max(np.abs(np.pad(prodM.coef, (0, max(0, len(N.coef) - len(prodM.coef))))
                     - np.pad(N.coef, (0, max(0, len(prodM.coef) - len(N.coef)))))) \
            > 1e-6 * max(1.0, np.max(np.abs(N.coef))):
        raise ValueError("factor_order does not multiply to the norm polynomial")
    choices = list(choices) if choices is not None else [None] * d
    rest = A
    out: List[MotionPoly] = []
    for r in range(d - 1, -1, -1):
        lin, rest = _peel(rest, factor_order[r], choices[r], tol, A.scale)
        out.append(lin)
    out.reverse()
    return out


def _peel(rest: MotionPoly, M: Polynomial, choice, tol: float, scale: float) -> Tuple[MotionPoly, MotionPoly]:
    """Split off a right factor ``t - h`` with ``N(t - h) = M``; returns it and the quotient.

    Raises
    ------
    DegenerateRemainder
        If no such right factor exists.
    """
    if _is_real_double(M, 1e-7):
        root = -M.coef[1] / 2.0
        val = rest.right_eval(root)
        if np.max(np.abs(val.c)) > np.sqrt(tol) * max(1.0, rest.scale):
            raise DegenerateRemainder("real norm root %.6g is not a zero of the polynomial" % root)
        h = DualQuaternion((root, 0.0, 0.0, 0.0))
    else:
        h = right_zero_mod(rest, M, choice, tol)
    lin = MotionPoly.linear(h)
    quot, R = poly_div_right(rest, lin)
    if not R.is_zero(np.sqrt(tol) * max(1.0, scale)):
        raise DegenerateRemainder("t - h is not a right factor (residual %.3g)"
                                  % np.max(np.abs(R.coeffs)))
    return lin, quot


def _same_factorization(f, g, tol) -> bool:
    for a, b in zip(f, g):
        ca, cb = a.coeffs, b.coeffs
        s = max(1.0, np.max(np.abs(ca)), np.max(np.abs(cb)))
        if np.max(np.abs(ca - cb)) > tol * s:
            return False
    return True


def all_factorizations(A: MotionPoly, tol: float = TOL, dedup_tol: float = DEDUP_TOL):
    """Every distinct factorization of ``A`` into monic linear factors.

    The search peels right factors depth first, one branch per distinct
    remaining norm factor; factorizations equal within ``dedup_tol`` are
    merged.

    Raises
    ------
    InfinitelyMany
        If an irreducible real quadratic divides ``A``.
    """
    factors = norm_factors(A, tol)
    distinct: List[Polynomial] = []
    for M in factors:
        if not any(np.allclose(M.coef, D.coef, atol=1e-7) for D in distinct):
            distinct.append(M)
    for M in distinct:
        if not _is_real_double(M, 1e-7):
            _, R = poly_div_right(A, MotionPoly.from_real(M))
            if R.is_zero(np.sqrt(tol) * max(1.0, A.scale)):
                raise InfinitelyMany("A is divisible by an irreducible real quadratic")
    found: List[List[MotionPoly]] = []

    def extend(rest, remaining, suffix):
        # depth-first over the norm factor of the next right factor, so
        # orders sharing a suffix share the work
        if not remaining:
            f = suffix[::-1]
            if not any(_same_factorization(f, g, dedup_tol) for g in found):
                found.append(f)
            return
        tried = []
        for i, M in enumerate(remaining):
            key = tuple(np.round(M.coef, 7))
            if key in tried:
                continue
            tried.append(key)
            try:
                lin, quot = _peel(rest, M, None, tol, A.scale)
            except DegenerateRemainder:
                continue
            extend(quot, remaining[:i] + remaining[i + 1:], suffix + [lin])

    extend(A, list(factors), [])
    return found


def count_factorizations(A: MotionPoly, tol: float = TOL) -> int:
    return len(all_factorizations(A, tol))


def flip(p, q, tol: float = TOL):
    """Second factorization of ``(t - p)(t - q)``.

    Returns ``(q2, p2)`` with ``(t - q2)(t - p2) == (t - p)(t - q)``,
    ``N(t - p2) = N(t - p)`` and ``N(t - q2) = N(t - q)``.

    Raises
    ------
    NotGeneric
        If the two norm factors coincide.
    """
    p = p if isinstance(p, DualQuaternion) else DualQuaternion.from_array(_coeff_array(p))
    q = q if isinstance(q, DualQuaternion) else DualQuaternion.from_array(_coeff_array(q))
    Mp = norm_poly(MotionPoly.linear(p), tol)
    Mq = norm_poly(MotionPoly.linear(q), tol)
    if np.max(np.abs(Mp.coef - Mq.coef)) <= 1e-7 * max(1.0, np.max(np.abs(Mp.coef))):
        raise NotGeneric("flip needs two distinct norm factors")
    T = MotionPoly.linear(p) * MotionPoly.linear(q)
    p2 = right_zero_mod(T, Mp, tol=tol)
    Q, R = poly_div_right(T, MotionPoly.linear(p2))
    if not R.is_zero(np.sqrt(tol) * max(1.0, T.scale)):
        raise DegenerateRemainder("flip failed: residual %.3g" % np.max(np.abs(R.coeffs)))
    q2 = DualQuaternion.from_array(-Q.coeffs[0])
    return q2, p2
