"""Simple undirected graphs used as bar-joint linkages."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Hashable, Iterable, List, Mapping, Tuple

import networkx as nx
import numpy as np

Edge = Tuple[int, int]


def edge_key(u, v) -> Edge:
    """Canonical (sorted) form of an unordered edge."""
    if u == v:
        raise ValueError("loops are not allowed: %r" % (u,))
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Finite simple graph with sortable vertex labels.

    Edges are stored as sorted pairs in sorted order; duplicates and loops
    raise ``ValueError``.
    """

    vertices: Tuple[int, ...]
    edges: Tuple[Edge, ...]

    def __init__(self, vertices: Iterable, edges: Iterable):
        es = [edge_key(u, v) for u, v in edges]
        if len(set(es)) != len(es):
            raise ValueError("duplicate edges")
        vs = set(vertices)
        for u, v in es:
            vs.add(u)
            vs.add(v)
        object.__setattr__(self, "vertices", tuple(sorted(vs)))
        object.__setattr__(self, "edges", tuple(sorted(es)))

    @classmethod
    def from_edges(cls, edges: Iterable) -> "Graph":
        return cls((), edges)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.edges)
        return g

    def neighbors(self, v) -> List[int]:
        return sorted([b for a, b in self.edges if a == v] + [a for a, b in self.edges if b == v])

    def degree(self, v) -> int:
        return len(self.neighbors(v))

    def leaves(self) -> List[int]:
        """Degree-one vertices; they dangle freely in any linkage."""
        return [v for v in self.vertices if self.degree(v) == 1]

    def has_edge(self, u, v) -> bool:
        return u != v and edge_key(u, v) in set(self.edges)

    def subgraph(self, vertices) -> "Graph":
        vs = set(vertices)
        return Graph(vs, [e for e in self.edges if e[0] in vs and e[1] in vs])

    def is_automorphism(self, tau: Mapping) -> bool:
        if sorted(tau[v] for v in self.vertices) != list(self.vertices):
            return False
        es = set(self.edges)
        return all(edge_key(tau[u], tau[v]) in es for u, v in self.edges)

    def to_json(self, lengths: Mapping[Edge, float] = None) -> dict:
        out = {"vertices": list(self.vertices), "edges": [list(e) for e in self.edges]}
        if lengths is not None:
            out["lengths"] = {"%s,%s" % e: float(lengths[e]) for e in self.edges}
        return out

    @classmethod
    def from_json(cls, obj: dict):
        """Parse ``{"vertices", "edges", "lengths"}``; returns ``(graph, lengths or None)``."""
        g = cls(obj.get("vertices", ()), [tuple(e) for e in obj["edges"]])
        lengths = None
        if "lengths" in obj and obj["lengths"] is not None:
            lengths = {}
            for key, val in obj["lengths"].items():
                u, v = (int(x) for x in str(key).split(","))
                lengths[edge_key(u, v)] = float(val)
            missing = [e for e in g.edges if e not in lengths]
            if missing:
                raise ValueError("missing lengths for edges %s" % missing)
            check_labeling(g, lengths)
        return g, lengths


def check_labeling(G: Graph, lengths: Mapping[Edge, float]) -> None:
    for e in G.edges:
        if not lengths[e] > 0:
            raise ValueError("edge length of %s must be positive" % (e,))


def cgk_estimate(G: Graph, dimension: int = 2) -> int:
    """Chebyshev-Grübler-Kutzbach mobility count (may be negative)."""
    if dimension == 2:
        return 2 * G.n - 3 - G.m
    if dimension == 3:
        return 3 * G.n - 6 - G.m
    raise ValueError("dimension must be 2 or 3")


def graph_square(G: Graph) -> Graph:
    """Add an edge between every two vertices at graph distance two."""
    es = set(G.edges)
    for v in G.vertices:
        nb = G.neighbors(v)
        for i, a in enumerate(nb):
            for b in nb[i + 1:]:
                es.add(edge_key(a, b))
    return Graph(G.vertices, es)


def edge_lengths(G: Graph, placement: Mapping) -> Dict[Edge, float]:
    return {e: float(np.linalg.norm(np.asarray(placement[e[0]], dtype=float)
                                    - np.asarray(placement[e[1]], dtype=float))) for e in G.edges}


def max_length_residual(G: Graph, placement: Mapping, lengths: Mapping) -> float:
    cur = edge_lengths(G, placement)
    return max((abs(cur[e] - lengths[e]) for e in G.edges), default=0.0)
