"""Stop predicates for the target families.

Every predicate is monotone under edge addition.  The incremental ones keep a
little state between ``reset`` and successive ``update`` calls; ``done`` is
always a full recheck and is what the property tests compare against.
"""

from __future__ import annotations

from itertools import permutations
from typing import Iterable, Optional

from . import graphs
from .process import MultiGraph, StopPredicate


class Always(StopPredicate):
    def done(self, graph):
        return True


class Never(StopPredicate):
    def done(self, graph):
        return False


class MinDegree(StopPredicate):
    """Simple minimum degree at least ``d``."""

    def __init__(self, d: int):
        self.d = d
        self._deficit = 0

    def done(self, graph):
        return graph.n > 0 and graphs.min_degree(graph) >= self.d

    def reset(self, graph):
        self._deficit = sum(1 for u in graph.vertices() if len(graph.adj[u]) < self.d)
        return graph.n > 0 and self._deficit == 0

    def update(self, graph, u, v, fresh):
        if fresh:
            d = self.d
            if len(graph.adj[u]) == d:
                self._deficit -= 1
            if len(graph.adj[v]) == d:
                self._deficit -= 1
        return self._deficit == 0


class ContainsEdges(StopPredicate):
    """Labeled containment of a fixed edge set."""

    def __init__(self, target: Iterable[tuple[int, int]]):
        self.target = sorted({(min(u, v), max(u, v)) for u, v in target})
        self._missing: set = set()

    def done(self, graph):
        return graphs.contains_labeled(graph, self.target)

    def reset(self, graph):
        self._missing = {e for e in self.target if not graph.has_edge(*e)}
        return not self._missing

    def update(self, graph, u, v, fresh):
        if fresh:
            self._missing.discard((u, v) if u < v else (v, u))
        return not self._missing


class EvenComponents(StopPredicate):
    """Every connected component has an even number of vertices."""

    def __init__(self):
        self._parent: list[int] = []
        self._size: list[int] = []
        self.odd = 0

    def done(self, graph):
        return graphs.all_components_even(graph)

    def _find(self, x):
        parent = self._parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def reset(self, graph):
        n = graph.n
        self._parent = list(range(n + 1))
        self._size = [1] * (n + 1)
        self.odd = n
        for u, v in graph.simple_edges():
            self._union(u, v)
        return self.odd == 0

    def _union(self, u, v):
        a, b = self._find(u), self._find(v)
        if a == b:
            return
        sa, sb = self._size[a], self._size[b]
        if sa < sb:
            a, b = b, a
        self._parent[b] = a
        self._size[a] = sa + sb
        self.odd -= (sa & 1) + (sb & 1) - ((sa + sb) & 1)

    def update(self, graph, u, v, fresh):
        if fresh:
            self._union(u, v)
        return self.odd == 0


class PerfectMatching(StopPredicate):
    """Contains a perfect matching; even components are checked first."""

    def __init__(self):
        self._even = EvenComponents()
        self._hit = False

    def done(self, graph):
        return graphs.has_perfect_matching(graph)

    def reset(self, graph):
        self._hit = self._even.reset(graph) and graphs.has_perfect_matching(graph)
        return self._hit

    def update(self, graph, u, v, fresh):
        if self._hit:
            return True
        if fresh and self._even.update(graph, u, v, fresh):
            self._hit = graphs.has_perfect_matching(graph)
        return self._hit


class EdgeConnected(StopPredicate):
    """``k``-edge-connected; the exact min cut runs only once ``delta >= k``."""

    def __init__(self, k: int):
        self.k = k
        self._deg = MinDegree(k)
        self._hit = False

    def done(self, graph):
        return graph.n >= 2 and graphs.edge_connectivity(graph) >= self.k

    def reset(self, graph):
        self._hit = self._deg.reset(graph) and self.done(graph)
        return self._hit

    def update(self, graph, u, v, fresh):
        if self._hit:
            return True
        if fresh and self._deg.update(graph, u, v, fresh):
            self._hit = graphs.edge_connectivity(graph) >= self.k
        return self._hit


class SpanningStar(StopPredicate):
    """Some vertex (or the given ``center``) is adjacent to all others."""

    def __init__(self, center: Optional[int] = None):
        self.center = center
        self._hit = False

    def done(self, graph):
        full = graph.n - 1
        if self.center is not None:
            return len(graph.adj[self.center]) == full
        return any(len(graph.adj[u]) == full for u in graph.vertices())

    def reset(self, graph):
        self._hit = self.done(graph)
        return self._hit

    def update(self, graph, u, v, fresh):
        if self._hit or not fresh:
            return self._hit
        full = graph.n - 1
        if self.center is not None:
            self._hit = len(graph.adj[self.center]) == full
        else:
            self._hit = len(graph.adj[u]) == full or len(graph.adj[v]) == full
        return self._hit


class HamiltonPath(StopPredicate):
    """Contains a spanning path (any labeling).

    Exact for every ``n`` when the simple graph has exactly ``n - 1`` edges
    (then it must itself be a path); otherwise a subset DP is used, which is
    limited to ``n <= 20``.
    """

    DP_LIMIT = 20

    def done(self, graph):
        n = graph.n
        if n <= 1:
            return True
        m = graph.num_simple_edges()
        if m < n - 1:
            return False
        if m == n - 1:
            return (max(graph.degree(u) for u in graph.vertices()) <= 2
                    and len(graphs.components(graph)) == 1)
        if n > self.DP_LIMIT:
            raise OverflowError(f"Hamilton path search limited to n <= {self.DP_LIMIT}")
        return _has_hamilton_path(graph)

    def reset(self, graph):
        self._m = graph.num_simple_edges()
        return self.done(graph)

    def update(self, graph, u, v, fresh):
        if fresh:
            self._m += 1
        if self._m < graph.n - 1:
            return False
        return self.done(graph)


def _has_hamilton_path(graph: MultiGraph) -> bool:
    n = graph.n
    nbr = [0] * n
    for u in range(1, n + 1):
        for v in graph.adj[u]:
            nbr[u - 1] |= 1 << (v - 1)
    full = (1 << n) - 1
    # reach[mask] = set of end vertices of paths covering exactly mask
    reach = [0] * (1 << n)
    for v in range(n):
        reach[1 << v] = 1 << v
    for mask in range(1, full + 1):
        ends = reach[mask]
        if not ends:
            continue
        x = ends
        while x:
            low = x & -x
            v = low.bit_length() - 1
            x ^= low
            ext = nbr[v] & ~mask
            while ext:
                b = ext & -ext
                ext ^= b
                reach[mask | b] |= b
    return reach[full] != 0


class ContainsCopy(StopPredicate):
    """Contains a subgraph isomorphic to ``pattern`` (brute force, small n only)."""

    LIMIT = 8

    def __init__(self, n: int, pattern: Iterable[tuple[int, int]]):
        if n > self.LIMIT:
            raise OverflowError(f"copy search limited to n <= {self.LIMIT}")
        pattern = list(pattern)
        self.copies = {
            frozenset((min(p[u - 1], p[v - 1]), max(p[u - 1], p[v - 1])) for u, v in pattern)
            for p in permutations(range(1, n + 1))
        }
        self.size = len({(min(u, v), max(u, v)) for u, v in pattern})

    def done(self, graph):
        if graph.num_simple_edges() < self.size:
            return False
        present = set(graph.simple_edges())
        return any(c <= present for c in self.copies)
