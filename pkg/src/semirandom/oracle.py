"""Exact optimal-play values by backward induction over game positions.

A position is ``(edge mask, remaining offers in the block, rounds left)``.
Edges of ``K_n`` are numbered once per ``n``, so a simple graph is an int
bitmask; multiplicities never matter for monotone targets.

Values are carried as integers over a common denominator: from a position
whose block has ``r`` unoffered vertices and ``l`` rounds left, every offer
sequence has the same probability ``1 / D(r, l)``, so ``D * value`` is an
integer and the recursion needs no rational arithmetic until the end.
"""

from __future__ import annotations

import copy
import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from typing import Callable, Iterable

from .process import GameState, MultiGraph

ORACLE_N_LIMIT = 7
TREE_N_LIMIT = 8
DEFAULT_NODE_BUDGET = 10 ** 8


class OracleBudgetExceeded(RuntimeError):
    """The position count passed the configured node budget."""


def edge_index(n: int) -> dict[tuple[int, int], int]:
    idx = {}
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            idx[(u, v)] = len(idx)
    return idx


def edges_to_mask(n: int, edges: Iterable[tuple[int, int]]) -> int:
    idx = edge_index(n)
    m = 0
    for u, v in edges:
        m |= 1 << idx[(min(u, v), max(u, v))]
    return m


def mask_to_edges(n: int, mask: int) -> list[tuple[int, int]]:
    return [e for e, i in edge_index(n).items() if mask >> i & 1]


@dataclass(frozen=True)
class GamePosition:
    edges: int
    remaining: int
    rounds_left: int


@dataclass(eq=False)
class TargetSpec:
    """A monotone family of graphs on ``[n]``.

    ``holds`` takes an edge mask.  ``labeled`` is False when the family is
    closed under relabeling (either by construction or because ``holds``
    was built from all labeled copies).  ``min_edges`` is a lower bound on
    the edge count of any member, used for pruning.
    """

    name: str
    n: int
    holds: Callable[[int], bool]
    labeled: bool = True
    min_edges: int = 0
    memo: dict = field(default_factory=dict, repr=False)
    nodes: int = field(default=0, repr=False)


def _cached(fn: Callable[[int], bool]) -> Callable[[int], bool]:
    cache: dict[int, bool] = {}

    def holds(mask: int) -> bool:
        r = cache.get(mask)
        if r is None:
            r = cache[mask] = fn(mask)
        return r

    return holds


def _adjacency(n: int, mask: int) -> list[int]:
    """Neighbour bitmasks indexed by vertex (bit ``v`` for vertex ``v``)."""
    adj = [0] * (n + 1)
    for (u, v), i in edge_index(n).items():
        if mask >> i & 1:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
    return adj


def _component_sizes(n: int, mask: int) -> list[int]:
    adj = _adjacency(n, mask)
    seen = 0
    sizes = []
    for s in range(1, n + 1):
        if seen >> s & 1:
            continue
        comp = frontier = 1 << s
        while frontier:
            nxt = 0
            f = frontier
            while f:
                b = f & -f
                f ^= b
                nxt |= adj[b.bit_length() - 1]
            frontier = nxt & ~comp
            comp |= nxt
        seen |= comp
        sizes.append(bin(comp).count("1"))
    return sizes


def _has_pm(n: int, mask: int) -> bool:
    adj = _adjacency(n, mask)

    def solve(left: int) -> bool:
        if not left:
            return True
        low = left & -left
        v = low.bit_length() - 1
        cand = adj[v] & left
        while cand:
            b = cand & -cand
            cand ^= b
            if solve(left & ~low & ~b):
                return True
        return False

    return solve(((1 << (n + 1)) - 1) & ~1)


def _check_n(n: int) -> None:
    if n < 1:
        raise ValueError("n must be positive")
    if n > ORACLE_N_LIMIT:
        raise OverflowError(f"oracle limited to n <= {ORACLE_N_LIMIT}")


def mindeg_target(n: int, d: int = 1) -> TargetSpec:
    _check_n(n)
    idx = edge_index(n)
    inc = [0] * (n + 1)
    for (u, v), i in idx.items():
        inc[u] |= 1 << i
        inc[v] |= 1 << i

    def holds(mask):
        return all(bin(mask & inc[u]).count("1") >= d for u in range(1, n + 1))

    return TargetSpec(f"mindeg{d}", n, _cached(holds), False, -(-n * d // 2))


def even_components_target(n: int) -> TargetSpec:
    _check_n(n)
    return TargetSpec("even-components", n,
                      _cached(lambda m: all(s % 2 == 0 for s in _component_sizes(n, m))),
                      False, n // 2 if n % 2 == 0 else n)


def pm_target(n: int) -> TargetSpec:
    _check_n(n)
    return TargetSpec("pm", n, _cached(lambda m: n % 2 == 0 and _has_pm(n, m)), False,
                      n // 2 if n % 2 == 0 else n)


def labeled_target(name: str, n: int, edges: Iterable[tuple[int, int]]) -> TargetSpec:
    """Contain this exact labeled edge set."""
    _check_n(n)
    t = edges_to_mask(n, edges)
    return TargetSpec(name, n, lambda m: t & ~m == 0, True, bin(t).count("1"))


def iso_copies(n: int, edges: Iterable[tuple[int, int]]) -> list[int]:
    """Masks of every labeled copy of the graph on ``[n]``."""
    edges = list(edges)
    idx = edge_index(n)
    out = set()
    for p in permutations(range(1, n + 1)):
        m = 0
        for u, v in edges:
            a, b = p[u - 1], p[v - 1]
            m |= 1 << idx[(a, b) if a < b else (b, a)]
        out.add(m)
    return sorted(out)


def iso_target(name: str, n: int, edges: Iterable[tuple[int, int]]) -> TargetSpec:
    """Contain a copy of the graph under some relabeling."""
    _check_n(n)
    copies = iso_copies(n, edges)
    size = bin(copies[0]).count("1") if copies else 0
    return TargetSpec(name, n, _cached(lambda m: any(c & ~m == 0 for c in copies)), False, size)


def path_edges(n: int) -> list[tuple[int, int]]:
    return [(i, i + 1) for i in range(1, n)]


def star_edges(n: int, center: int = 1) -> list[tuple[int, int]]:
    return [(center, v) for v in range(1, n + 1) if v != center]


def m0_target(n: int) -> TargetSpec:
    return labeled_target("m0", n, [(2 * i - 1, 2 * i) for i in range(1, n // 2 + 1)])


TARGET_IDS = {
    "mindeg1": lambda n: mindeg_target(n, 1),
    "mindeg2": lambda n: mindeg_target(n, 2),
    "mindeg3": lambda n: mindeg_target(n, 3),
    "even-components": even_components_target,
    "pm": pm_target,
    "m0": m0_target,
    "star": lambda n: iso_target("star", n, star_edges(n)),
    "star-labeled": lambda n: labeled_target("star-labeled", n, star_edges(n)),
    "path": lambda n: iso_target("path", n, path_edges(n)),
    "path-labeled": lambda n: labeled_target("path-labeled", n, path_edges(n)),
}


def make_target(target_id: str, n: int) -> TargetSpec:
    try:
        build = TARGET_IDS[target_id]
    except KeyError:
        raise KeyError(f"unknown target id {target_id!r}") from None
    return build(n)


def _denominators(n: int, k: int) -> dict[tuple[int, int], int]:
    """D[(r, l)]: number of offer sequences of length ``l`` when ``r`` block slots remain."""
    D = {}
    for r in range(1, n + 1):
        D[(r, 0)] = 1
    for l in range(1, k + 1):
        for r in range(1, n + 1):
            D[(r, l)] = r * D[(r - 1 if r > 1 else n, l - 1)]
    return D


def optimal_success_prob(target: TargetSpec, n: int, k: int,
                         budget: int = DEFAULT_NODE_BUDGET) -> Fraction:
    """max over strategies of Pr(tau <= k) from the empty graph."""
    _check_n(n)
    if target.n != n:
        raise ValueError(f"target built for n={target.n}, asked for n={n}")
    if k < 0:
        raise ValueError("k must be >= 0")
    full = ((1 << (n + 1)) - 1) & ~1
    D = _denominators(n, k)
    idx = edge_index(n)
    bit = {}
    for (u, v), i in idx.items():
        bit[(u, v)] = bit[(v, u)] = 1 << i
    vertex_bits = [(v, 1 << v) for v in range(1, n + 1)]
    holds = target.holds
    need = target.min_edges
    memo = target.memo

    def value(mask: int, rem: int, left: int) -> int:
        key = (mask, rem, left)
        got = memo.get(key)
        if got is not None:
            return got
        target.nodes += 1
        if target.nodes > budget:
            raise OracleBudgetExceeded(f"oracle passed {budget} positions")
        r = bin(rem).count("1")
        if holds(mask):
            out = D[(r, left)]
        elif left == 0 or bin(mask).count("1") + left < need:
            out = 0
        else:
            out = 0
            ceiling = D[(r - 1 if r > 1 else n, left - 1)]
            for v, vb in vertex_bits:
                if not rem & vb:
                    continue
                rem2 = rem & ~vb or full
                best = -1
                tried = set()
                for u in range(1, n + 1):
                    if u == v:
                        continue
                    m2 = mask | bit[(u, v)]
                    if m2 in tried:
                        continue
                    tried.add(m2)
                    val = value(m2, rem2, left - 1)
                    if val > best:
                        best = val
                        if best == ceiling:
                            break
                out += best
        memo[key] = out
        return out

    return Fraction(value(0, full, k), D[(n, k)])


def strategy_tau_distribution(make: Callable[[], object], target: TargetSpec, n: int,
                              k_max: int) -> dict[int, Fraction]:
    """Exact law of ``tau`` truncated at ``k_max`` for a deterministic strategy.

    Expands every block-aware offer sequence; ``make`` builds a fresh
    strategy.  Returns ``{t: Pr(tau = t)}`` for ``t <= k_max``.
    """
    _check_n(n)
    if target.n != n:
        raise ValueError(f"target built for n={target.n}, asked for n={n}")
    D = _denominators(n, k_max)
    idx = edge_index(n)
    holds = target.holds
    weights: dict[int, int] = {}

    state = GameState.new(n)
    strat = make()
    if holds(0):
        return {0: Fraction(1)}
    strat.start(state)

    def expand(state, strat, mask, k):
        # k rounds played; block slots left = n - (k mod n)
        if k == k_max:
            return
        stream = state.stream
        rem = sorted(stream.remaining)
        last = len(rem)
        for j, v in enumerate(rem):
            if j == last - 1:
                st, sg = state, strat
            else:
                st, sg = copy.deepcopy((state, strat))
            st.round = k + 1
            st.stream.take(v)
            u = sg.respond(st, v, None)
            if u == v or not 0 < u <= n:
                raise RuntimeError(f"strategy answered {u!r} to {v}")
            st.graph.add_edge(v, u)
            st.offered_counts[v] += 1
            m2 = mask | 1 << idx[(min(u, v), max(u, v))]
            if holds(m2):
                # the prefix covers D[(n, k_max)] / D[(n, k + 1)] full-length sequences
                weights[k + 1] = weights.get(k + 1, 0) + D[(_slots(n, k + 1), k_max - k - 1)]
            else:
                expand(st, sg, m2, k + 1)

    expand(state, strat, 0, 0)
    total = D[(n, k_max)]
    return {t: Fraction(w, total) for t, w in sorted(weights.items())}


def _slots(n: int, k: int) -> int:
    """Unoffered vertices in the block after ``k`` rounds (a fresh block counts as ``n``)."""
    return n - k % n


def strategy_success_prob(make: Callable[[], object], target: TargetSpec, n: int, k: int) -> Fraction:
    """Pr(tau(strategy) <= k), exactly."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return sum(strategy_tau_distribution(make, target, n, k).values(), Fraction(0))


# --------------------------------------------------------------------------
# Trees
# --------------------------------------------------------------------------

def _prufer_decode(seq: tuple[int, ...], n: int) -> list[tuple[int, int]]:
    degree = [1] * (n + 1)
    for x in seq:
        degree[x] += 1
    leaves = [v for v in range(1, n + 1) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((min(leaf, x), max(leaf, x)))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    u, v = sorted(leaves)
    edges.append((u, v))
    return edges


def tree_canonical(n: int, edges: Iterable[tuple[int, int]]) -> str:
    """AHU canonical string, rooted at the center (min over two centers)."""
    adj: dict[int, list[int]] = {v: [] for v in range(1, n + 1)}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    if n <= 2:
        return "()" * n
    deg = {v: len(adj[v]) for v in adj}
    layer = [v for v in adj if deg[v] == 1]
    left = n
    while left > 2:
        left -= len(layer)
        nxt = []
        for leaf in layer:
            for w in adj[leaf]:
                deg[w] -= 1
                if deg[w] == 1:
                    nxt.append(w)
        layer = nxt
    centers = layer

    def enc(v, parent):
        return "(" + "".join(sorted(enc(w, v) for w in adj[v] if w != parent)) + ")"

    return min(enc(c, 0) for c in centers)


def all_trees(n: int) -> list[list[tuple[int, int]]]:
    """One labeled representative per isomorphism class of trees on ``[n]``."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > TREE_N_LIMIT:
        raise OverflowError(f"tree enumeration limited to n <= {TREE_N_LIMIT}")
    if n == 1:
        return [[]]
    if n == 2:
        return [[(1, 2)]]
    seen: dict[str, list[tuple[int, int]]] = {}
    for seq in product(range(1, n + 1), repeat=n - 2):
        edges = _prufer_decode(seq, n)
        key = tree_canonical(n, edges)
        if key not in seen:
            seen[key] = sorted(edges)
    return list(seen.values())


def is_path_tree(n: int, edges: Iterable[tuple[int, int]]) -> bool:
    deg = [0] * (n + 1)
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    return max(deg[1:], default=0) <= 2


def tau_certain(target: TargetSpec, n: int, budget: int = DEFAULT_NODE_BUDGET) -> bool:
    """True iff optimal play reaches the target within ``n - 1`` rounds surely."""
    return optimal_success_prob(target, n, n - 1, budget) == 1


def graph_mask(graph: MultiGraph) -> int:
    return edges_to_mask(graph.n, graph.simple_edges())
