"""Homogeneous configurations in P^(n-2) x P^(n-2) and boundary colorings.

A placement ``p`` gives ``z_k = x_k + i y_k`` and ``w_k = x_k - i y_k`` with
the first vertex at the origin.  For edges ``e = (i, j)`` and ``f = (k, l)``
with lengths ``l_e, l_f`` the defining forms are
``l_e^2 (z_k - z_l)(w_k - w_l) - l_f^2 (z_i - z_j)(w_i - w_j)``; edge lengths
enter squared because ``(z_i - z_j)(w_i - w_j)`` is a squared distance.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from ..errors import NotBoundary
from .graph import Graph
from .nac import Coloring, blue_components, nac_check, red_components


@dataclass(frozen=True)
class HomogeneousConfigPoint:
    """Coordinates ``z`` and ``w`` indexed like ``vertices`` (first vertex at 0)."""

    vertices: tuple
    z: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.z, dtype=complex)
        w = np.asarray(self.w, dtype=complex)
        z, w = z - z[0], w - w[0]
        object.__setattr__(self, "z", _normalize(z))
        object.__setattr__(self, "w", _normalize(w))

    @classmethod
    def from_placement(cls, G: Graph, placement: Mapping) -> "HomogeneousConfigPoint":
        pts = np.array([np.asarray(placement[v], dtype=float)[:2] for v in G.vertices])
        z = pts[:, 0] + 1j * pts[:, 1]
        return cls(G.vertices, z, np.conj(z))

    def is_real(self, tol: float = 1e-9) -> bool:
        """``w`` equals ``conj(z)`` up to the projective scalings of both factors."""
        k = int(np.argmax(np.abs(self.z)))
        if abs(self.w[k]) == 0:
            return False
        lam = np.conj(self.z[k]) / self.w[k]
        return bool(np.max(np.abs(lam * self.w - np.conj(self.z))) <= tol)

    def index(self, v) -> int:
        return self.vertices.index(v)


def _normalize(x):
    m = np.max(np.abs(x))
    if m == 0:
        raise ValueError("projective coordinates must not all vanish")
    return x / x[int(np.argmax(np.abs(x)))]


def edge_forms(G: Graph, point: HomogeneousConfigPoint) -> np.ndarray:
    """``(z_i - z_j)(w_i - w_j)`` for every edge, in edge order."""
    idx = {v: k for k, v in enumerate(point.vertices)}
    return np.array([(point.z[idx[u]] - point.z[idx[v]]) * (point.w[idx[u]] - point.w[idx[v]])
                     for u, v in G.edges])


def homogeneous_residual(G: Graph, lengths: Mapping, point: HomogeneousConfigPoint) -> float:
    """Max over edge pairs of ``|l_e^2 F_f - l_f^2 F_e|`` in normalized coordinates."""
    F = edge_forms(G, point)
    lam = np.array([float(lengths[e]) ** 2 for e in G.edges])
    worst = 0.0
    for a, b in itertools.combinations(range(G.m), 2):
        worst = max(worst, abs(lam[a] * F[b] - lam[b] * F[a]))
    return float(worst)


def boundary_coloring(point: HomogeneousConfigPoint, G: Graph, lengths: Mapping = None,
                      tol: float = 1e-9) -> Coloring:
    """Red where ``z_i = z_j``, blue otherwise, for a boundary point.

    Raises
    ------
    NotBoundary
        If some edge form is nonzero, the point is off the variety, or the
        coloring would not be a NAC coloring.
    """
    if lengths is not None and homogeneous_residual(G, lengths, point) > tol:
        raise NotBoundary("point is not on the configuration variety")
    F = edge_forms(G, point)
    if np.max(np.abs(F)) > tol:
        raise NotBoundary("edge forms do not vanish: interior point")
    idx = {v: k for k, v in enumerate(point.vertices)}
    red = [e for e in G.edges if abs(point.z[idx[e[0]]] - point.z[idx[e[1]]]) <= tol]
    c = Coloring.from_red(G, red)
    if not c.red or not c.blue or not nac_check(G, c):
        raise NotBoundary("the induced coloring is not a NAC coloring")
    return c


def nac_limit_point(G: Graph, c: Coloring, seed: int = 0) -> HomogeneousConfigPoint:
    """Boundary point reached by a NAC motion as ``exp(i t)`` degenerates.

    ``z_v`` takes the red-component value and ``w_v`` the conjugated
    blue-component value, which is the limit after rescaling ``w``.
    """
    rng = np.random.default_rng(seed)
    rc, bc = red_components(G, c), blue_components(G, c)
    zr = rng.standard_normal(max(rc.values()) + 1) + 1j * rng.standard_normal(max(rc.values()) + 1)
    wb = rng.standard_normal(max(bc.values()) + 1) + 1j * rng.standard_normal(max(bc.values()) + 1)
    z = np.array([zr[rc[v]] for v in G.vertices])
    w = np.array([np.conj(wb[bc[v]]) for v in G.vertices])
    return HomogeneousConfigPoint(G.vertices, z, w)
