"""Small named graphs used throughout the examples and tests."""
from __future__ import annotations

import itertools
from typing import Dict

from .graph import Graph, edge_key


def triangle() -> Graph:
    return Graph.from_edges([(1, 2), (2, 3), (1, 3)])


def cycle(n: int) -> Graph:
    return Graph.from_edges([(i, i % n + 1) for i in range(1, n + 1)])


def path(n: int) -> Graph:
    return Graph.from_edges([(i, i + 1) for i in range(1, n)])


def star(k: int) -> Graph:
    return Graph.from_edges([(1, i) for i in range(2, k + 2)])


def complete(n: int) -> Graph:
    return Graph.from_edges(itertools.combinations(range(1, n + 1), 2))


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges([(i, a + j) for i in range(1, a + 1) for j in range(1, b + 1)])


def three_prism() -> Graph:
    """Two triangles 1-2-3 and 4-5-6 joined by 1-4, 2-5, 3-6."""
    return Graph.from_edges([(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6), (1, 4), (2, 5), (3, 6)])


def rigid_seven() -> Graph:
    """Seven-vertex, twelve-edge graph without a NAC coloring.

    Vertices ``a..g`` are numbered ``1..7``.
    """
    names = "abcdefg"
    raw = ["ad", "ae", "bc", "be", "cd", "ce", "cf", "df", "ef", "ga", "gb", "gd"]
    return Graph.from_edges([(names.index(x) + 1, names.index(y) + 1) for x, y in raw])


def double_banana() -> Graph:
    """Two five-vertex bananas glued at the hinge vertices 1 and 2."""
    edges = []
    for part in ((3, 4, 5), (6, 7, 8)):
        for v in part:
            edges += [(1, v), (2, v)]
        edges += list(itertools.combinations(part, 2))
    return Graph.from_edges(edges)


def octahedron() -> Graph:
    """Antipodal pairs are (1,2), (3,4), (5,6)."""
    anti = {1: 2, 2: 1, 3: 4, 4: 3, 5: 6, 6: 5}
    return Graph.from_edges([(u, v) for u, v in itertools.combinations(range(1, 7), 2) if anti[u] != v])


def octahedron_antipodal() -> Dict[int, int]:
    return {1: 2, 2: 1, 3: 4, 4: 3, 5: 6, 6: 5}


def octahedron_halfturn() -> Dict[int, int]:
    """Involution fixing the opposite vertices 1 and 2."""
    return {1: 1, 2: 2, 3: 4, 4: 3, 5: 6, 6: 5}


def icosahedron() -> Graph:
    """Vertex ``v`` and ``v + 6`` are antipodal (vertices 1..12)."""
    # top 1, upper ring 2..6, lower ring 8..12, bottom 7; antipode(v) = v + 6 mod 12
    upper = [2, 3, 4, 5, 6]
    anti = {v: (v + 5) % 12 + 1 for v in range(1, 13)}
    lower = [anti[v] for v in upper]
    edges = [(1, v) for v in upper] + [(7, v) for v in lower]
    edges += [(upper[i], upper[(i + 1) % 5]) for i in range(5)]
    edges += [(lower[i], lower[(i + 1) % 5]) for i in range(5)]
    # each upper vertex meets the two lower vertices that are not antipodal-adjacent
    for i, v in enumerate(upper):
        for w in (lower[(i + 2) % 5], lower[(i + 3) % 5]):
            edges.append((v, w))
    return Graph.from_edges(edges)


def icosahedron_antipodal() -> Dict[int, int]:
    return {v: (v + 5) % 12 + 1 for v in range(1, 13)}


def loop_axis_graph(n: int = 6) -> Graph:
    """Graph of an nR loop: two vertices on every axis, each link a tetrahedron.

    Axis ``a`` (0-based) carries vertices ``2a+1`` and ``2a+2``.
    """
    edges = set()
    for a in range(n):
        b = (a + 1) % n
        va = (2 * a + 1, 2 * a + 2)
        vb = (2 * b + 1, 2 * b + 2)
        for x, y in itertools.combinations(va + vb, 2):
            edges.add(edge_key(x, y))
    return Graph.from_edges(edges)


def loop_axis_reflection(n: int = 6) -> Dict[int, int]:
    """Involution ``axis a -> axis -a`` of :func:`loop_axis_graph`."""
    out = {}
    for a in range(n):
        b = (-a) % n
        out[2 * a + 1] = 2 * b + 1
        out[2 * a + 2] = 2 * b + 2
    return out


NAMED = {
    "triangle": triangle,
    "three_prism": three_prism,
    "rigid_seven": rigid_seven,
    "double_banana": double_banana,
    "octahedron": octahedron,
    "icosahedron": icosahedron,
    "k33": lambda: complete_bipartite(3, 3),
    "k44": lambda: complete_bipartite(4, 4),
    "loop6": loop_axis_graph,
}
