"""NAC colorings and the planar motions they induce."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Mapping, Optional, Tuple

import networkx as nx
import numpy as np

from ..errors import EmptyColorClass, TooLarge
from .graph import Edge, Graph, edge_key, edge_lengths


@dataclass(frozen=True)
class Coloring:
    """Ordered partition of the edge set into red and blue."""

    red: FrozenSet[Edge]
    blue: FrozenSet[Edge]

    @classmethod
    def from_red(cls, G: Graph, red) -> "Coloring":
        red = frozenset(edge_key(*e) for e in red)
        return cls(red, frozenset(G.edges) - red)

    def swapped(self) -> "Coloring":
        return Coloring(self.blue, self.red)

    def sort_key(self):
        return tuple(sorted(self.red))

    def to_json(self) -> dict:
        return {"red": sorted(list(e) for e in self.red), "blue": sorted(list(e) for e in self.blue)}


def _components(vertices, edges) -> Dict[int, int]:
    """Map each vertex to the index of its component in the given edge subgraph."""
    g = nx.Graph()
    g.add_nodes_from(vertices)
    g.add_edges_from(edges)
    comp = {}
    for i, cc in enumerate(sorted(nx.connected_components(g), key=min)):
        for v in cc:
            comp[v] = i
    return comp


def red_components(G: Graph, c: Coloring) -> Dict[int, int]:
    return _components(G.vertices, c.red)


def blue_components(G: Graph, c: Coloring) -> Dict[int, int]:
    return _components(G.vertices, c.blue)


def nac_check(G: Graph, c: Coloring) -> bool:
    """True iff every cycle has either no red edge or at least two (and the same for blue).

    Checked through components: no red edge inside one blue component and
    no blue edge inside one red component.

    Raises
    ------
    EmptyColorClass
        If one of the classes is empty.
    """
    if not c.red or not c.blue:
        raise EmptyColorClass("both color classes must be nonempty")
    rc, bc = red_components(G, c), blue_components(G, c)
    if any(bc[u] == bc[v] for u, v in c.red):
        return False
    return not any(rc[u] == rc[v] for u, v in c.blue)


def nac_check_cycles(G: Graph, c: Coloring) -> bool:
    """Reference check enumerating all simple cycles."""
    if not c.red or not c.blue:
        raise EmptyColorClass("both color classes must be nonempty")
    for cyc in nx.simple_cycles(G.to_networkx()):
        if len(cyc) < 3:
            continue
        es = [edge_key(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc))]
        nred = sum(e in c.red for e in es)
        if nred == 1 or nred == len(es) - 1:
            return False
    return True


def triangle_classes(G: Graph) -> List[List[Edge]]:
    """Classes of edges linked by triangles; a NAC coloring is constant on each."""
    parent = {e: e for e in G.edges}

    def find(e):
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    es = set(G.edges)
    for u, v in G.edges:
        for w in G.neighbors(u):
            if w != v and edge_key(v, w) in es:
                for f in (edge_key(u, w), edge_key(v, w)):
                    a, b = find((u, v)), find(f)
                    if a != b:
                        parent[a] = b
    classes: Dict[Edge, List[Edge]] = {}
    for e in G.edges:
        classes.setdefault(find(e), []).append(e)
    return sorted(classes.values())


def nac_enumerate(G: Graph, max_edges: int = 30, collapse_swaps: bool = False) -> List[Coloring]:
    """All NAC colorings, sorted by their red edge sets.

    Colorings are constant on triangle classes, so only those are enumerated.
    With ``collapse_swaps`` only one of each red/blue swapped pair is kept.

    Raises
    ------
    TooLarge
        If the graph has more than ``max_edges`` edges.
    """
    if G.m > max_edges:
        raise TooLarge("graph has %d edges (limit %d)" % (G.m, max_edges))
    classes = triangle_classes(G)
    out = []
    for bits in itertools.product((0, 1), repeat=len(classes)):
        if all(bits) or not any(bits):
            continue
        if collapse_swaps and bits[0] == 1:
            continue
        red = [e for b, cl in zip(bits, classes) if b for e in cl]
        c = Coloring.from_red(G, red)
        if nac_check(G, c):
            out.append(c)
    return sorted(out, key=Coloring.sort_key)


def nac_motion(G: Graph, c: Coloring, t: float, z: Optional[Mapping[int, complex]] = None,
               w: Optional[Mapping[int, complex]] = None, seed: int = 0) -> Dict[int, np.ndarray]:
    """Planar placement ``z_i + exp(i t) w_j`` for ``v`` in red component ``i`` and blue component ``j``.

    ``z`` and ``w`` are keyed by component index; missing values are drawn
    from a seeded standard complex normal distribution.
    """
    rc, bc = red_components(G, c), blue_components(G, c)
    rng = np.random.default_rng(seed)
    nr, nb = max(rc.values()) + 1, max(bc.values()) + 1
    zz = rng.standard_normal(nr) + 1j * rng.standard_normal(nr)
    ww = rng.standard_normal(nb) + 1j * rng.standard_normal(nb)
    if z is not None:
        for k, val in z.items():
            zz[k] = val
    if w is not None:
        for k, val in w.items():
            ww[k] = val
    rot = np.exp(1j * t)
    out = {}
    for v in G.vertices:
        p = zz[rc[v]] + rot * ww[bc[v]]
        out[v] = np.array([p.real, p.imag])
    return out


@dataclass(frozen=True)
class FlexibleLabeling:
    exists: bool
    coloring: Optional[Coloring] = None
    lengths: Optional[Dict[Edge, float]] = None
    placement: Optional[Dict[int, np.ndarray]] = None


def flexible_labeling_exists(G: Graph, seed: int = 0, max_edges: int = 30) -> FlexibleLabeling:
    """Decide flexibility via NAC colorings and produce a flexible labeling when possible."""
    cols = nac_enumerate(G, max_edges=max_edges)
    if not cols:
        return FlexibleLabeling(False)
    c = cols[0]
    placement = nac_motion(G, c, 0.0, seed=seed)
    return FlexibleLabeling(True, c, edge_lengths(G, placement), placement)
