"""Exhaustive small-graph generators for the test suites."""
import networkx as nx

from linkflex.rigidity import Graph


def _canonical_bucket(g):
    return nx.weisfeiler_lehman_graph_hash(g, iterations=3)


def graphs_by_edge_count(max_edges):
    """All graphs without isolated vertices, up to isomorphism, grouped by edge count.

    Built by adding one edge at a time (between old vertices, to one new
    vertex, or between two new vertices) and discarding isomorphic copies.
    """
    levels = {1: [nx.Graph([(0, 1)])]}
    for m in range(2, max_edges + 1):
        buckets = {}
        out = []
        for g in levels[m - 1]:
            n = g.number_of_nodes()
            candidates = [(u, v) for u in range(n) for v in range(u + 1, n) if not g.has_edge(u, v)]
            candidates += [(u, n) for u in range(n)]
            candidates.append((n, n + 1))
            for e in candidates:
                h = g.copy()
                h.add_edge(*e)
                key = (h.number_of_nodes(), _canonical_bucket(h))
                same = buckets.setdefault(key, [])
                if any(nx.is_isomorphic(h, k) for k in same):
                    continue
                same.append(h)
                out.append(h)
        levels[m] = out
    return levels


def to_graph(g) -> Graph:
    return Graph.from_edges([(u + 1, v + 1) for u, v in g.edges()])


def atlas_graphs(max_vertices):
    """Graphs of the networkx atlas (all graphs up to seven vertices) with at least one edge."""
    return [g for g in nx.graph_atlas_g() if 2 <= g.number_of_nodes() <= max_vertices
            and g.number_of_edges() > 0]
