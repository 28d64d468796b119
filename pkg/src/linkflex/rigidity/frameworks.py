"""Frameworks: rigidity matrices, Dixon constructions and symmetric embeddings."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Tuple

import networkx as nx
import numpy as np

from ..errors import BadInvolution, NotDixonCompatible, OutOfDomain
from .graph import Edge, Graph, edge_key, edge_lengths

RANK_RTOL = 1e-8


@dataclass(frozen=True)
class RigidityMatrixResult:
    matrix: np.ndarray
    rank: int
    trivial: int
    flex_count: int
    singular_values: np.ndarray


def _trivial_motions(P: np.ndarray) -> np.ndarray:
    """Infinitesimal isometries evaluated at the points (rows are flattened motions)."""
    n, dim = P.shape
    rows = []
    for k in range(dim):
        v = np.zeros((n, dim))
        v[:, k] = 1.0
        rows.append(v.ravel())
    if dim == 2:
        rows.append(np.column_stack([-P[:, 1], P[:, 0]]).ravel())
    else:
        for axis in np.eye(3):
            rows.append(np.cross(axis, P).ravel())
    return np.array(rows)


def rigidity_matrix(G: Graph, placement: Mapping, dimension: Optional[int] = None,
                    rtol: float = RANK_RTOL) -> RigidityMatrixResult:
    """Jacobian of the squared edge lengths and the infinitesimal flex count.

    ``flex_count = dim |V| - rank - trivial`` where ``trivial`` is the
    dimension of infinitesimal isometries at the placement (3 in the plane
    and 6 in space for affinely spanning placements).  Ranks use singular
    values above ``rtol`` times the largest one.
    """
    verts = list(G.vertices)
    P = np.array([np.asarray(placement[v], dtype=float) for v in verts])
    dim = dimension or P.shape[1]
    P = P[:, :dim]
    idx = {v: k for k, v in enumerate(verts)}
    R = np.zeros((G.m, dim * len(verts)))
    for r, (u, v) in enumerate(G.edges):
        d = P[idx[u]] - P[idx[v]]
        R[r, dim * idx[u]:dim * idx[u] + dim] = 2 * d
        R[r, dim * idx[v]:dim * idx[v] + dim] = -2 * d
    sv = np.linalg.svd(R, compute_uv=False) if R.size else np.zeros(0)
    rank = int(np.sum(sv > rtol * sv[0])) if sv.size and sv[0] > 0 else 0
    T = _trivial_motions(P)
    tsv = np.linalg.svd(T, compute_uv=False)
    trivial = int(np.sum(tsv > rtol * tsv[0]))
    return RigidityMatrixResult(R, rank, trivial, dim * len(verts) - rank - trivial, sv)


def generic_placement(G: Graph, dimension: int, seed: int = 0) -> Dict[int, np.ndarray]:
    rng = np.random.default_rng(seed)
    return {v: rng.standard_normal(dimension) for v in G.vertices}


# ---------------------------------------------------------------------------
# Dixon constructions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DixonData:
    """Constants with ``length(u, v)^2 = c[u] + d[v]`` for ``u`` in ``left``."""

    left: Tuple[int, ...]
    right: Tuple[int, ...]
    c: Dict[int, float]
    d: Dict[int, float]

    @property
    def domain(self) -> Tuple[float, float]:
        """Interval of admissible ``tau`` (``c_u + tau >= 0`` and ``d_v - tau >= 0``)."""
        lo = max((-x for x in self.c.values()), default=-np.inf)
        hi = min(self.d.values(), default=np.inf)
        return lo, hi


def bipartition(G: Graph) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Two sides of a bipartite graph; each component puts its smallest vertex on the left."""
    g = G.to_networkx()
    if not nx.is_bipartite(g):
        raise NotDixonCompatible("graph is not bipartite")
    left, right = [], []
    for cc in sorted(nx.connected_components(g), key=min):
        col = nx.bipartite.color(g.subgraph(cc))
        side = col[min(cc)]
        for v in cc:
            (left if col[v] == side else right).append(v)
    return tuple(sorted(left)), tuple(sorted(right))


def dixon1_data(G: Graph, lengths: Mapping, tol: float = 1e-9) -> DixonData:
    """Solve ``l_uv^2 = c_u + d_v`` in the least-norm sense.

    Raises
    ------
    NotDixonCompatible
        If the graph is not bipartite or the system is inconsistent.
    """
    left, right = bipartition(G)
    li = {v: k for k, v in enumerate(left)}
    ri = {v: len(left) + k for k, v in enumerate(right)}
    A = np.zeros((G.m, len(left) + len(right)))
    b = np.zeros(G.m)
    for r, (u, v) in enumerate(G.edges):
        if u not in li:
            u, v = v, u
        A[r, li[u]] = 1.0
        A[r, ri[v]] = 1.0
        b[r] = float(lengths[edge_key(u, v)]) ** 2
    x, *_ = np.linalg.lstsq(A, b, rcond=None)
    if np.max(np.abs(A @ x - b), initial=0.0) > tol * max(1.0, np.max(np.abs(b))):
        raise NotDixonCompatible("lengths are not of the form c_u + d_v")
    return DixonData(left, right, {u: float(x[li[u]]) for u in left}, {v: float(x[ri[v]]) for v in right})


def dixon1_motion(G: Graph, lengths: Mapping, tau: float, signs: Optional[Mapping[int, int]] = None,
                  data: Optional[DixonData] = None) -> Dict[int, np.ndarray]:
    """Left side on the x-axis at ``sqrt(c_u + tau)``, right side on the y-axis at ``sqrt(d_v - tau)``.

    Raises
    ------
    OutOfDomain
        If ``tau`` leaves the admissible interval.
    """
    data = data or dixon1_data(G, lengths)
    lo, hi = data.domain
    eps = 1e-12 * max(1.0, abs(lo), abs(hi))
    if tau < lo - eps or tau > hi + eps:
        raise OutOfDomain("tau=%g outside [%g, %g]" % (tau, lo, hi))
    # default signs alternate along each side so equal constants do not coincide
    signs = signs or {}
    out = {}
    for k, u in enumerate(data.left):
        out[u] = np.array([signs.get(u, (-1) ** k) * np.sqrt(max(data.c[u] + tau, 0.0)), 0.0])
    for k, v in enumerate(data.right):
        out[v] = np.array([0.0, signs.get(v, (-1) ** k) * np.sqrt(max(data.d[v] - tau, 0.0))])
    return out


@dataclass(frozen=True)
class Dixon2Config:
    graph: Graph
    placement: Dict[int, np.ndarray]
    lengths: Dict[Edge, float]
    coincident: Tuple[Tuple[int, int], ...] = ()


def dixon2_config(rect1: Tuple[float, float], rect2: Tuple[float, float]) -> Dixon2Config:
    """K_{4,4} on the corners of two rectangles with common symmetry axes.

    Vertices 1-4 are ``(+-p, +-q)`` and 5-8 are ``(+-r, +-s)``; pairs of
    coincident points are reported in ``coincident``.
    """
    p, q = rect1
    r, s = rect2
    if min(p, q, r, s) <= 0:
        raise ValueError("half-dimensions must be positive")
    signs = [(1, 1), (1, -1), (-1, 1), (-1, -1)]
    pts = {k + 1: np.array([a * p, b * q]) for k, (a, b) in enumerate(signs)}
    pts.update({k + 5: np.array([a * r, b * s]) for k, (a, b) in enumerate(signs)})
    G = Graph.from_edges([(i, j) for i in range(1, 5) for j in range(5, 9)])
    coincident = tuple((u, v) for u in pts for v in pts if u < v and np.allclose(pts[u], pts[v]))
    return Dixon2Config(G, pts, edge_lengths(G, pts), coincident)


# ---------------------------------------------------------------------------
# symmetric embeddings
# ---------------------------------------------------------------------------

def _check_involution(G: Graph, tau: Mapping) -> None:
    if set(tau) != set(G.vertices) or any(tau[tau[v]] != v for v in G.vertices):
        raise BadInvolution("map is not an involution of the vertex set")
    if not G.is_automorphism(tau):
        raise BadInvolution("map is not a graph automorphism")
    if all(tau[v] == v for v in G.vertices):
        raise BadInvolution("identity map")


def fixed_structure(G: Graph, tau: Mapping) -> Tuple[int, int]:
    """Numbers of fixed vertices and fixed (setwise) edges."""
    fv = sum(tau[v] == v for v in G.vertices)
    fe = sum(edge_key(tau[u], tau[v]) == (u, v) for u, v in G.edges)
    return fv, fe


@dataclass(frozen=True)
class SymmetricEmbedding:
    placement: Dict[int, np.ndarray]
    lengths: Dict[Edge, float]
    variables: int
    equations: int


def halfturn_z(p) -> np.ndarray:
    x, y, z = p
    return np.array([-x, -y, z])


def symmetric_embedding_line(G: Graph, tau: Mapping, seed: int = 0) -> SymmetricEmbedding:
    """Random configuration invariant under the half turn about the z-axis.

    Raises
    ------
    BadInvolution
        Unless ``tau`` is an order-2 automorphism without fixed vertices or edges.
    """
    _check_involution(G, tau)
    fv, fe = fixed_structure(G, tau)
    if fv or fe:
        raise BadInvolution("involution fixes %d vertices and %d edges" % (fv, fe))
    rng = np.random.default_rng(seed)
    placement = {}
    for v in G.vertices:
        if v in placement:
            continue
        p = rng.standard_normal(3)
        placement[v] = p
        placement[tau[v]] = halfturn_z(p)
    n = G.n // 2
    return SymmetricEmbedding(placement, edge_lengths(G, placement), 3 * n - 2, 3 * n - 3)


def symmetric_count_plane(G: Graph, tau: Mapping) -> Tuple[int, int]:
    """Unknowns and equations for configurations symmetric under a plane reflection.

    Raises
    ------
    BadInvolution
        Unless ``tau`` fixes ``2m`` vertices and ``2m - 2`` edges with ``m >= 1``.
    """
    _check_involution(G, tau)
    fv, fe = fixed_structure(G, tau)
    if fv == 0 or fv % 2 or fe != fv - 2:
        raise BadInvolution("need 2m fixed vertices and 2m-2 fixed edges, got %d and %d" % (fv, fe))
    m = fv // 2
    return 3 * G.n // 2 + m - 3, 3 * G.n // 2 + m - 4


def reflect_xy(p) -> np.ndarray:
    x, y, z = p
    return np.array([x, y, -z])


def symmetric_embedding_plane(G: Graph, tau: Mapping, seed: int = 0) -> SymmetricEmbedding:
    """Random configuration with ``R(p_v) = p_tau(v)`` for the reflection in the xy-plane."""
    variables, equations = symmetric_count_plane(G, tau)
    rng = np.random.default_rng(seed)
    placement = {}
    for v in G.vertices:
        if v in placement:
            continue
        p = rng.standard_normal(3)
        if tau[v] == v:
            p[2] = 0.0
        placement[v] = p
        placement[tau[v]] = reflect_xy(p)
    return SymmetricEmbedding(placement, edge_lengths(G, placement), variables, equations)
