"""Laman counts via the (2,3)-pebble game, plus a brute-force reference."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .graph import Edge, Graph


@dataclass(frozen=True)
class LamanResult:
    """Outcome of a Laman test.

    When the test fails, ``witness_vertices``/``witness_edges`` describe a
    subgraph with more than ``2|V'| - 3`` edges, or ``reason`` explains a
    global count mismatch.
    """

    is_laman: bool
    reason: str = ""
    witness_vertices: Tuple[int, ...] = ()
    witness_edges: Tuple[Edge, ...] = ()

    def __bool__(self):
        return self.is_laman


class PebbleGame:
    """(k, l)-pebble game on a growing multigraph-free edge set.

    Each vertex starts with ``k`` pebbles; an edge ``uv`` is accepted when
    ``l + 1`` pebbles can be gathered on ``u`` and ``v`` together.
    """

    def __init__(self, vertices, k: int = 2, l: int = 3):
        self.k, self.l = k, l
        self.pebbles: Dict[int, int] = {v: k for v in vertices}
        self.out: Dict[int, List[int]] = {v: [] for v in vertices}
        self.accepted: List[Edge] = []

    def _find_pebble(self, root, blocked):
        """Move a free pebble to ``root`` along a reversed path; return success."""
        parent = {root: None}
        stack = [root]
        while stack:
            x = stack.pop()
            for y in self.out[x]:
                if y in parent or y in blocked:
                    continue
                parent[y] = x
                if self.pebbles[y] > 0:
                    # reverse the path root -> ... -> y
                    self.pebbles[y] -= 1
                    self.pebbles[root] += 1
                    while parent[y] is not None:
                        p = parent[y]
                        self.out[p].remove(y)
                        self.out[y].append(p)
                        y = p
                    return True
                stack.append(y)
        return False

    def reach(self, roots) -> set:
        seen = set(roots)
        stack = list(roots)
        while stack:
            x = stack.pop()
            for y in self.out[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen

    def try_add(self, u, v) -> bool:
        while self.pebbles[u] < self.k:
            if not self._find_pebble(u, {v}):
                break
        while self.pebbles[v] < self.k:
            if not self._find_pebble(v, {u}):
                break
        if self.pebbles[u] + self.pebbles[v] >= self.l + 1:
            if self.pebbles[u] > 0:
                self.pebbles[u] -= 1
                self.out[u].append(v)
            else:
                self.pebbles[v] -= 1
                self.out[v].append(u)
            self.accepted.append((u, v))
            return True
        return False


def laman_check(G: Graph) -> LamanResult:
    """Test ``|E| = 2|V| - 3`` and ``|E'| <= 2|V'| - 3`` for all subgraphs."""
    target = 2 * G.n - 3
    game = PebbleGame(G.vertices)
    for u, v in G.edges:
        if not game.try_add(u, v):
            verts = game.reach({u, v})
            sub = G.subgraph(verts)
            accepted = set(game.accepted) | {(u, v)}
            edges = tuple(e for e in sub.edges if e in accepted or (e[1], e[0]) in accepted)
            return LamanResult(False, "subgraph with |E'| > 2|V'| - 3", tuple(sorted(verts)), edges)
    if G.m != target:
        return LamanResult(False, "edge count %d differs from 2|V| - 3 = %d" % (G.m, target))
    return LamanResult(True)


def laman_bruteforce(G: Graph) -> bool:
    """Reference implementation by enumerating all vertex subsets."""
    if G.m != 2 * G.n - 3:
        return False
    for k in range(2, G.n + 1):
        for vs in itertools.combinations(G.vertices, k):
            if G.subgraph(vs).m > 2 * k - 3:
                return False
    return True
