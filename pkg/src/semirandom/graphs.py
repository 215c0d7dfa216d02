"""Exact graph predicates and constructions.

All functions read the simple support of a :class:`MultiGraph` (multiplicities
collapsed).  Orientations are lists of arcs ``(tail, head)``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order, maximum_flow

from .process import MultiGraph

Arc = tuple[int, int]
Orientation = list[Arc]

EXHAUSTIVE_DENSITY_LIMIT = 20
CUT_SCAN_LIMIT = 24


def as_graph(G, n: int | None = None) -> MultiGraph:
    if isinstance(G, MultiGraph):
        return G
    if isinstance(G, GtGraph):
        return G.graph()
    if n is None:
        raise TypeError("an edge list needs an explicit vertex count")
    return MultiGraph(n, G)


def min_degree(G: MultiGraph) -> int:
    if G.n == 0:
        return 0
    return min(len(G.adj[u]) for u in range(1, G.n + 1))


def contains_labeled(G: MultiGraph, target: Iterable[tuple[int, int]]) -> bool:
    adj = G.adj
    return all(v in adj[u] for u, v in target)


def components(G: MultiGraph) -> list[list[int]]:
    """Connected components (isolated vertices are singletons), each sorted."""
    seen = bytearray(G.n + 1)
    out = []
    for s in range(1, G.n + 1):
        if seen[s]:
            continue
        seen[s] = 1
        comp = [s]
        stack = [s]
        while stack:
            x = stack.pop()
            for y in G.adj[x]:
                if not seen[y]:
                    seen[y] = 1
                    comp.append(y)
                    stack.append(y)
        out.append(sorted(comp))
    return out


def all_components_even(G: MultiGraph) -> bool:
    return all(len(c) % 2 == 0 for c in components(G))


# --------------------------------------------------------------------------
# Matching (Edmonds' blossom algorithm)
# --------------------------------------------------------------------------

def maximum_matching(G: MultiGraph) -> list[tuple[int, int]]:
    """Maximum cardinality matching by augmenting paths with blossom contraction."""
    n = G.n
    adj = [list(G.adj[u]) for u in range(n + 1)]
    match = [0] * (n + 1)  # 0 = unmatched
    for v in range(1, n + 1):
        if not match[v]:
            for u in adj[v]:
                if not match[u]:
                    match[u], match[v] = v, u
                    break

    for root in range(1, n + 1):
        if match[root]:
            continue
        end, parent = _augmenting_path(root, adj, match, n)
        while end:
            pv = parent[end]
            nxt = match[pv]
            match[end], match[pv] = pv, end
            end = nxt
    return [(v, match[v]) for v in range(1, n + 1) if match[v] > v]


def _augmenting_path(root, adj, match, n):
    used = bytearray(n + 1)
    parent = [0] * (n + 1)
    base = list(range(n + 1))
    used[root] = 1
    queue = deque([root])

    def lca(a, b):
        seen = bytearray(n + 1)
        while True:
            a = base[a]
            seen[a] = 1
            if not match[a]:
                break
            a = parent[match[a]]
        while True:
            b = base[b]
            if seen[b]:
                return b
            b = parent[match[b]]

    def mark(v, b, child, blossom):
        while base[v] != b:
            blossom[base[v]] = blossom[base[match[v]]] = 1
            parent[v] = child
            child = match[v]
            v = parent[match[v]]

    while queue:
        v = queue.popleft()
        for to in adj[v]:
            if base[v] == base[to] or match[v] == to:
                continue
            if to == root or (match[to] and parent[match[to]]):
                b = lca(v, to)
                blossom = bytearray(n + 1)
                mark(v, b, to, blossom)
                mark(to, b, v, blossom)
                for i in range(1, n + 1):
                    if blossom[base[i]]:
                        base[i] = b
                        if not used[i]:
                            used[i] = 1
                            queue.append(i)
            elif not parent[to]:
                parent[to] = v
                if not match[to]:
                    return to, parent
                used[match[to]] = 1
                queue.append(match[to])
    return 0, parent


def has_perfect_matching(G: MultiGraph) -> bool:
    if G.n % 2:
        return False
    if G.n == 0:
        return True
    if min_degree(G) == 0:
        return False
    return 2 * len(maximum_matching(G)) == G.n


# --------------------------------------------------------------------------
# Edge connectivity
# --------------------------------------------------------------------------

def _unit_capacity_matrix(G: MultiGraph) -> csr_matrix:
    rows, cols = [], []
    for u in range(1, G.n + 1):
        for v in G.adj[u]:
            rows.append(u - 1)
            cols.append(v - 1)
    data = np.ones(len(rows), dtype=np.int32)
    return csr_matrix((data, (rows, cols)), shape=(G.n, G.n), dtype=np.int32)


def edge_connectivity(G: MultiGraph) -> int:
    """Exact global minimum edge cut of the simple support.

    Some consecutive pair ``(i, i+1)`` of vertices is separated by any
    minimum cut, so the answer is the minimum of ``n - 1`` max-flow values,
    capped by the minimum degree.
    """
    n = G.n
    if n < 2:
        raise ValueError("edge connectivity needs n >= 2")
    best = min_degree(G)
    if best == 0 or len(components(G)) > 1:
        return 0
    cap = _unit_capacity_matrix(G)
    for i in range(n - 1):
        f = maximum_flow(cap, i, i + 1).flow_value
        if f < best:
            best = f
    return int(best)


def cut_size(G: MultiGraph, side: Iterable[int]) -> int:
    A = set(side)
    return sum(1 for u in A for v in G.adj[u] if v not in A)


# --------------------------------------------------------------------------
# The G_t family
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class GtGraph:
    """``t`` disjoint ``m``-cycles plus a ``t``-clique across each column ``s``.

    Vertex ``u_s^i`` (group ``i``, position ``s``, both 1-based) is encoded as
    ``(i - 1) * m + s``.
    """

    n: int
    t: int
    m: int
    edges: tuple[tuple[int, int], ...]

    def vertex(self, i: int, s: int) -> int:
        return (i - 1) * self.m + s

    def graph(self) -> MultiGraph:
        return MultiGraph(self.n, self.edges)


def build_gt(n: int, t: int) -> GtGraph:
    if t < 2:
        raise ValueError("t must be at least 2")
    if n % t:
        raise ValueError(f"n={n} is not divisible by t={t}")
    m = n // t
    if m < 3:
        raise ValueError(f"m = n/t = {m} must be at least 3")
    idx = lambda i, s: (i - 1) * m + s  # noqa: E731
    edges = []
    for i in range(1, t + 1):
        for s in range(1, m + 1):
            a, b = idx(i, s), idx(i, s % m + 1)
            edges.append((min(a, b), max(a, b)))
    for s in range(1, m + 1):
        for i in range(1, t + 1):
            for j in range(i + 1, t + 1):
                edges.append((idx(i, s), idx(j, s)))
    return GtGraph(n, t, m, tuple(sorted(edges)))


def circulant(n: int, k: int) -> list[tuple[int, int]]:
    """Edges of ``C_n(1..k)``: ``u ~ u + i (mod n)`` for ``i = 1..k``."""
    if not 0 <= k <= (n - 1) // 2:
        raise ValueError(f"C_{n}(1..{k}) is not 2k-regular")
    edges = set()
    for u in range(n):
        for i in range(1, k + 1):
            a, b = u + 1, (u + i) % n + 1
            edges.add((min(a, b), max(a, b)))
    return sorted(edges)


def _bitmask_adjacency(G: MultiGraph) -> list[int]:
    return [sum(1 << (v - 1) for v in G.adj[u]) for u in range(1, G.n + 1)]


def _subset_cut_sizes(nbr: list[int], k: int) -> np.ndarray:
    """cut[mask] for every subset ``mask`` of the first ``k`` vertices."""
    cut = np.zeros(1, dtype=np.int32)
    for v in range(k):
        low = np.arange(1 << v, dtype=np.int64)
        common = np.bitwise_count(low & (nbr[v] & ((1 << v) - 1))).astype(np.int32)
        deg = bin(nbr[v]).count("1")
        cut = np.concatenate([cut, cut + deg - 2 * common])
    return cut


def min_cut_over_range(G: MultiGraph, lo: int, hi: int) -> int:
    """Minimum of ``e(A, V \\ A)`` over all ``A`` with ``lo <= |A| <= hi`` (exhaustive)."""
    n = G.n
    if n > CUT_SCAN_LIMIT:
        raise OverflowError(f"exhaustive cut scan limited to n <= {CUT_SCAN_LIMIT}")
    nbr = _bitmask_adjacency(G)
    # cut(A) = cut(V \ A): scan subsets B of V minus its last vertex, and
    # accept B when B or its complement has an admissible size.
    cut = _subset_cut_sizes(nbr, n - 1)
    size = np.bitwise_count(np.arange(1 << (n - 1), dtype=np.int64))
    ok = ((size >= lo) & (size <= hi)) | ((n - size >= lo) & (n - size <= hi))
    if not ok.any():
        raise ValueError("no subset has an admissible size")
    return int(cut[ok].min())


def check_cut_claim(G: Union[GtGraph, MultiGraph], t: int | None = None,
                    enforce_size: bool = True) -> bool:
    """Every ``A`` with ``2 <= |A| <= n/2`` has at least ``t + 2`` crossing edges."""
    if isinstance(G, GtGraph):
        t = G.t if t is None else t
        G = G.graph()
    if t is None:
        raise TypeError("t is required for a plain graph")
    if enforce_size and G.n < 12:
        raise ValueError("the cut claim is stated for n >= 12")
    return min_cut_over_range(G, 2, G.n // 2) >= t + 2


# --------------------------------------------------------------------------
# Density and orientations
# --------------------------------------------------------------------------

def max_subgraph_density(G: MultiGraph, method: str = "auto") -> Fraction:
    """L(G) = max e(H)/v(H) over nonempty subgraphs, as an exact fraction."""
    if G.num_simple_edges() == 0 and G.n == 0:
        raise ValueError("empty graph")
    if method == "auto":
        method = "exhaustive" if G.n <= EXHAUSTIVE_DENSITY_LIMIT else "flow"
    if method == "exhaustive":
        return _density_exhaustive(G)
    if method == "flow":
        return _density_flow(G)
    raise ValueError(f"unknown method {method!r}")


def _density_exhaustive(G: MultiGraph) -> Fraction:
    n = G.n
    if n > EXHAUSTIVE_DENSITY_LIMIT:
        raise OverflowError(f"exhaustive density limited to n <= {EXHAUSTIVE_DENSITY_LIMIT}")
    nbr = _bitmask_adjacency(G)
    e = np.zeros(1, dtype=np.int32)
    for v in range(n):
        low = np.arange(1 << v, dtype=np.int64)
        e = np.concatenate([e, e + np.bitwise_count(low & nbr[v]).astype(np.int32)])
    size = np.bitwise_count(np.arange(1 << n, dtype=np.int64))
    best = Fraction(0)
    for k in range(1, n + 1):
        best = max(best, Fraction(int(e[size == k].max()), k))
    return best


def _densest_for_ratio(G: MultiGraph, p: int, q: int) -> set[int]:
    """A vertex set maximising ``q*e(S) - p*|S|`` (closure problem as a min cut)."""
    edges = G.simple_edges()
    m, n = len(edges), G.n
    # nodes: 0 = source, 1..m edges, m+1..m+n vertices, m+n+1 = sink
    src, sink = 0, m + n + 1
    big = q * (m + 1) + 1
    rows, cols, caps = [], [], []
    for i, (u, v) in enumerate(edges, start=1):
        rows += [src, i, i]
        cols += [i, m + u, m + v]
        caps += [q, big, big]
    for u in range(1, n + 1):
        rows.append(m + u)
        cols.append(sink)
        caps.append(p)
    size = m + n + 2
    cap = csr_matrix((np.array(caps, dtype=np.int64), (rows, cols)), shape=(size, size))
    cap = csr_matrix(cap, dtype=np.int32) if cap.max() < 2**31 else cap
    res = maximum_flow(cap, src, sink)
    residual = cap - res.flow
    residual.data = np.where(residual.data > 0, 1, 0)
    residual.eliminate_zeros()
    reach = breadth_first_order(residual, src, directed=True, return_predecessors=False)
    return {int(x) - m for x in reach if m < x <= m + n}


def _density_flow(G: MultiGraph) -> Fraction:
    """Dinkelbach iteration on the closure problem; exact."""
    if G.num_simple_edges() == 0:
        return Fraction(0)
    S = set(range(1, G.n + 1))
    while True:
        ratio = Fraction(_induced_edges(G, S), len(S))
        T = _densest_for_ratio(G, ratio.numerator, ratio.denominator)
        if not T or Fraction(_induced_edges(G, T), len(T)) <= ratio:
            return ratio
        S = T


def _induced_edges(G: MultiGraph, S: set[int]) -> int:
    return sum(1 for u in S for v in G.adj[u] if v in S and u < v)


def out_degrees(n: int, arcs: Iterable[Arc]) -> list[int]:
    out = [0] * (n + 1)
    for a, _ in arcs:
        out[a] += 1
    return out


def min_outdegree_orientation(G: MultiGraph) -> tuple[int, Orientation]:
    """Orientation minimising the maximum out-degree, by path reversal.

    Stops when no vertex of maximum out-degree ``d`` reaches a vertex of
    out-degree at most ``d - 2``; at that point the reachable set has more
    than ``(d - 1)`` edges per vertex, so ``d = ceil(L(G))``.
    """
    n = G.n
    out: list[set[int]] = [set() for _ in range(n + 1)]
    for u, v in G.simple_edges():
        if len(out[u]) <= len(out[v]):
            out[u].add(v)
        else:
            out[v].add(u)
    while True:
        d = max((len(s) for s in out), default=0)
        if d == 0:
            return 0, []
        improved = False
        for u in range(1, n + 1):
            if len(out[u]) != d:
                continue
            parent = {u: 0}
            queue = deque([u])
            target = 0
            while queue and not target:
                x = queue.popleft()
                for y in out[x]:
                    if y not in parent:
                        parent[y] = x
                        if len(out[y]) <= d - 2:
                            target = y
                            break
                        queue.append(y)
            if target:
                y = target
                while parent[y]:
                    x = parent[y]
                    out[x].discard(y)
                    out[y].add(x)
                    y = x
                improved = True
        if not improved:
            arcs = [(u, v) for u in range(1, n + 1) for v in sorted(out[u])]
            return d, arcs


def balanced_orientation(G: MultiGraph) -> Orientation:
    """Orient along Euler circuits so that every out-degree is at most ``ceil(deg/2)``.

    Odd-degree vertices are paired through an auxiliary vertex 0 whose
    edges are dropped afterwards.
    """
    n = G.n
    edges = G.simple_edges()
    odd = [u for u in range(1, n + 1) if len(G.adj[u]) % 2]
    all_edges = edges + [(0, u) for u in odd]
    inc: list[list[int]] = [[] for _ in range(n + 1)]
    for i, (a, b) in enumerate(all_edges):
        inc[a].append(i)
        inc[b].append(i)
    used = bytearray(len(all_edges))
    ptr = [0] * (n + 1)
    arcs: Orientation = []
    for s in range(n + 1):
        # iterative Hierholzer; arcs are recorded as edges are traversed, which
        # keeps in = out at every vertex of the auxiliary Eulerian graph
        stack = [s]
        while stack:
            x = stack[-1]
            lst = inc[x]
            while ptr[x] < len(lst) and used[lst[ptr[x]]]:
                ptr[x] += 1
            if ptr[x] == len(lst):
                stack.pop()
                continue
            i = lst[ptr[x]]
            used[i] = 1
            a, b = all_edges[i]
            y = b if a == x else a
            if x and y:
                arcs.append((x, y))
            stack.append(y)
    return arcs


def gnp_sample(n: int, p: float, rng: np.random.Generator) -> MultiGraph:
    """Erdos-Renyi G(n, p); pairs are drawn in lexicographic order."""
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(len(iu)) < p
    return MultiGraph(n, zip((iu[keep] + 1).tolist(), (ju[keep] + 1).tolist()))


# --------------------------------------------------------------------------
# Text format: "n m" then m lines "u v"
# --------------------------------------------------------------------------

def parse_graph(text: str) -> MultiGraph:
    tokens = text.split()
    if len(tokens) < 2:
        raise ValueError("graph file must start with 'n m'")
    n, m = int(tokens[0]), int(tokens[1])
    nums = [int(x) for x in tokens[2:]]
    if len(nums) != 2 * m:
        raise ValueError(f"expected {m} edges, found {len(nums) / 2:g}")
    return MultiGraph(n, zip(nums[0::2], nums[1::2]))


def format_graph(G: MultiGraph) -> str:
    edges = G.edges()
    lines = [f"{G.n} {len(edges)}"] + [f"{u} {v}" for u, v in edges]
    return "\n".join(lines) + "\n"


def read_graph(path) -> MultiGraph:
    with open(path) as fh:
        return parse_graph(fh.read())


def write_graph(G: MultiGraph, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_graph(G))


def degree_sequence(G: MultiGraph) -> Sequence[int]:
    return [len(G.adj[u]) for u in range(1, G.n + 1)]
