"""Builder strategies.

Every free choice resolves to the smallest admissible label, so a strategy is
a deterministic function of the offer sequence.  Instances carry per-run
state: create one per game (``start`` re-initialises it anyway).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from . import graphs
from .graphs import GtGraph
from .process import GameState


class _Ascending:
    """A shrinking subset of ``1..n`` with "smallest member >= x" queries.

    Successor pointers with path compression; ``n + 1`` is a sentinel that is
    always present.
    """

    __slots__ = ("_next", "n")

    def __init__(self, n: int):
        self.n = n
        self._next = list(range(n + 2))

    def discard(self, x: int) -> None:
        self._next[x] = x + 1

    def first(self, x: int = 1) -> int:
        nxt = self._next
        root = x
        while nxt[root] != root:
            root = nxt[root]
        while nxt[x] != root:
            nxt[x], x = root, nxt[x]
        return root


def _smallest_other(v: int) -> int:
    return 1 if v != 1 else 2


class BaseStrategy:
    name = "strategy"

    def start(self, state: GameState) -> None:
        pass

    def respond(self, state: GameState, offered: int, rng=None) -> int:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"<{self.name}>"


# --------------------------------------------------------------------------
# Orientation strategy
# --------------------------------------------------------------------------

@dataclass
class OrientationPlan:
    """Out-neighbour lists; every edge of the target lies in exactly one list."""

    n: int
    out: list[list[int]] = field(default_factory=list)

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> "OrientationPlan":
        out: list[list[int]] = [[] for _ in range(n + 1)]
        for a, b in arcs:
            out[a].append(b)
        for lst in out:
            lst.sort()
        return cls(n, out)

    def edges(self) -> list[tuple[int, int]]:
        return sorted((min(a, b), max(a, b)) for a in range(1, self.n + 1) for b in self.out[a])

    @property
    def max_out_degree(self) -> int:
        return max((len(lst) for lst in self.out), default=0)


def natural_circulant_plan(n: int, k: int) -> OrientationPlan:
    """``u -> u + i (mod n)`` for ``i = 1..k``; out-degree exactly ``k``."""
    graphs.circulant(n, k)  # validates k
    return OrientationPlan.from_arcs(n, [(u, (u - 1 + i) % n + 1)
                                         for u in range(1, n + 1) for i in range(1, k + 1)])


class OrientationStrategy(BaseStrategy):
    """Offered ``u`` claims its first out-edge not yet present; else a fallback edge."""

    name = "orientation"

    def __init__(self, plan: OrientationPlan):
        self.plan = plan
        self._ptr: list[int] = []

    def start(self, state):
        plan = self.plan
        if plan.n != state.n or any(b < 1 or b > plan.n for lst in plan.out for b in lst):
            raise ValueError(f"orientation plan is not on the vertex set [1..{state.n}]")
        self._ptr = [0] * (plan.n + 1)

    def respond(self, state, offered, rng=None):
        lst = self.plan.out[offered]
        i = self._ptr[offered]
        adj = state.graph.adj[offered]
        while i < len(lst) and lst[i] in adj:
            i += 1
        self._ptr[offered] = i
        if i < len(lst):
            return lst[i]
        return _smallest_other(offered)


def orientation_strategy(edges: Iterable[tuple[int, int]] | None = None,
                         plan: OrientationPlan | None = None,
                         n: int | None = None) -> OrientationStrategy:
    """Strategy building a labeled graph from an orientation of its edges.

    Without an explicit ``plan`` the graph ``edges`` on ``n`` vertices is
    oriented with :func:`graphs.min_outdegree_orientation`.
    """
    if plan is None:
        if n is None or edges is None:
            raise TypeError("need either a plan or (edges, n)")
        _, arcs = graphs.min_outdegree_orientation(graphs.MultiGraph(n, edges))
        plan = OrientationPlan.from_arcs(n, arcs)
    return OrientationStrategy(plan)


# --------------------------------------------------------------------------
# Minimum degree
# --------------------------------------------------------------------------

class MinDegreeS0(BaseStrategy):
    """Connect the offered vertex to the smallest isolated vertex other than itself."""

    name = "mindeg-s0"

    def start(self, state):
        self._iso = _Ascending(state.n)

    def _isolated_from(self, adj, x):
        iso = self._iso
        w = iso.first(x)
        while w <= iso.n and adj[w]:
            iso.discard(w)
            w = iso.first(w + 1)
        return w

    def respond(self, state, offered, rng=None):
        adj = state.graph.adj
        w = self._isolated_from(adj, 1)
        if w == offered:
            w = self._isolated_from(adj, offered + 1)
        if w > state.n:
            return _smallest_other(offered)
        return w


def min_degree_s0() -> MinDegreeS0:
    return MinDegreeS0()


class EdgeDisjointS0(BaseStrategy):
    """S0 restricted to edges outside a forbidden graph ``G``.

    Isolation refers to the edges this strategy itself has claimed.  A round
    in which isolated vertices other than the offered one exist but all are
    ``G``-neighbours of it is a failure; it claims the smallest ``z`` with
    ``uz`` outside ``G``.
    """

    name = "edge-disjoint-s0"

    def __init__(self, forbidden: Iterable[tuple[int, int]] = ()):
        self.forbidden = list(forbidden)
        self.failure_rounds: list[int] = []
        self.claimed: list[tuple[int, int]] = []

    def start(self, state):
        n = state.n
        self._nbr: list[set[int]] = [set() for _ in range(n + 1)]
        for u, v in self.forbidden:
            if not (0 < u <= n and 0 < v <= n):
                raise ValueError(f"forbidden edge ({u}, {v}) outside [1..{n}]")
            self._nbr[u].add(v)
            self._nbr[v].add(u)
        self._touched = bytearray(n + 1)
        self._iso = _Ascending(n)
        self._n = n
        self.failure_rounds = []
        self.claimed = []

    def _claim(self, u, w):
        self._touched[u] = self._touched[w] = 1
        self.claimed.append((u, w))
        return w

    def respond(self, state, offered, rng=None):
        n, iso, touched = self._n, self._iso, self._touched
        bad = self._nbr[offered]
        other_isolated = False
        w = iso.first(1)
        while w <= n:
            if touched[w]:
                iso.discard(w)
            elif w != offered:
                if w not in bad:
                    return self._claim(offered, w)
                other_isolated = True
            w = iso.first(w + 1)
        if other_isolated:
            self.failure_rounds.append(state.round)
        for z in range(1, n + 1):
            if z != offered and z not in bad:
                return self._claim(offered, z)
        return self._claim(offered, _smallest_other(offered))


def edge_disjoint_s0(forbidden: Iterable[tuple[int, int]]) -> EdgeDisjointS0:
    return EdgeDisjointS0(forbidden)


class TwoStage(BaseStrategy):
    """Build a fixed graph by orientation for ``k * n`` rounds, then run S0 avoiding it."""

    def __init__(self, name: str, k: int, build: Callable[[int], tuple[list, OrientationPlan]]):
        self.name = name
        self.k = k
        self._build = build

    def start(self, state):
        edges, plan = self._build(state.n)
        self.first_stage_edges = edges
        self.stage1 = OrientationStrategy(plan)
        self.stage2 = EdgeDisjointS0(edges)
        self.stage1.start(state)
        self.stage2.start(state)
        self._switch = self.k * state.n

    def respond(self, state, offered, rng=None):
        if state.round <= self._switch:
            return self.stage1.respond(state, offered, rng)
        return self.stage2.respond(state, offered, rng)


def min_degree_odd(k: int) -> BaseStrategy:
    """Target minimum degree ``2k + 1``: circulant ``C_n(1..k)`` first, then S0 off it."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return MinDegreeS0()

    def build(n):
        if k > (n - 1) // 2:
            raise ValueError(f"k={k} too large for n={n}")
        return graphs.circulant(n, k), natural_circulant_plan(n, k)

    return TwoStage("mindeg-odd", k, build)


def edgecon_strategy(k: int) -> BaseStrategy:
    """Target ``(2k+1)``-edge-connectivity: ``G_{2k-1}`` by an Eulerian orientation, then S0 off it."""
    if k < 2:
        raise ValueError("k must be at least 2 so that t = 2k - 1 >= 3")
    t = 2 * k - 1

    def build(n):
        gt: GtGraph = graphs.build_gt(n, t)
        if t > n // 3:
            raise ValueError(f"t={t} exceeds n/3")
        arcs = graphs.balanced_orientation(gt.graph())
        return list(gt.edges), OrientationPlan.from_arcs(n, arcs)

    return TwoStage("edgecon", k, build)


# --------------------------------------------------------------------------
# Perfect matching
# --------------------------------------------------------------------------

class PMLabeled(BaseStrategy):
    """Offered ``i`` is joined to its partner ``i + (-1)^(i+1)`` in M0."""

    name = "pm-labeled"

    def start(self, state):
        if state.n % 2:
            raise ValueError("perfect matching needs even n")

    def respond(self, state, offered, rng=None):
        return offered + 1 if offered & 1 else offered - 1


def pm_labeled() -> PMLabeled:
    return PMLabeled()


class LinearForestS0(BaseStrategy):
    """Keep Builder's graph a linear forest and merge so that odd paths pair up.

    Each path is keyed by its active endpoint (the one never offered).  Its
    other endpoint is where other paths attach.  Within the first block every
    offer is an active endpoint and the target is met by round ``n``; any
    later offer gets the smallest other label.
    """

    name = "pm-forest"

    def start(self, state):
        n = state.n
        if n % 2:
            raise ValueError("perfect matching needs even n")
        self.other = list(range(n + 1))    # active endpoint -> other endpoint
        self.size = [1] * (n + 1)
        self.active = bytearray([0] + [1] * n)
        self.stamp = [0] * (n + 1)
        self._heaps = ([(x, x, 0) for x in range(1, n + 1)], [])  # (odd, even)

    def _valid(self, entry):
        x, a, st = entry
        return self.active[a] and self.stamp[a] == st

    def _top(self, heap, exclude):
        """Smallest valid entry of ``heap`` whose component is not ``exclude``."""
        while heap and not self._valid(heap[0]):
            heapq.heappop(heap)
        if not heap:
            return None
        if heap[0][1] != exclude:
            return heap[0]
        own = heapq.heappop(heap)
        while heap and not self._valid(heap[0]):
            heapq.heappop(heap)
        best = heap[0] if heap else None
        heapq.heappush(heap, own)
        return best

    def components(self) -> list[tuple[int, int, int]]:
        """(active endpoint, other endpoint, size) for every path."""
        return [(a, self.other[a], self.size[a]) for a in range(1, len(self.size)) if self.active[a]]

    def respond(self, state, offered, rng=None):
        v = offered
        if not self.active[v]:
            return _smallest_other(v)
        odd_heap, even_heap = self._heaps
        s = self.size[v]
        cand = self._top(odd_heap, v)
        if s % 2 == 0:
            alt = self._top(even_heap, v)
            if alt is not None and (cand is None or alt < cand):
                cand = alt
        if cand is None:
            return _smallest_other(v)
        x, a2, _ = cand
        far = self.other[v]
        self.active[v] = 0
        self.stamp[v] += 1
        self.stamp[a2] += 1
        self.other[a2] = far
        self.size[a2] += s
        heapq.heappush(odd_heap if self.size[a2] % 2 else even_heap, (far, a2, self.stamp[a2]))
        return x


def pm_linear_forest_s0() -> LinearForestS0:
    return LinearForestS0()


# --------------------------------------------------------------------------
# Trees
# --------------------------------------------------------------------------

class HamiltonPathStrategy(BaseStrategy):
    """Grow one path whose only never-offered vertex is one of its ends."""

    name = "ham-path"

    def start(self, state):
        self._iso = _Ascending(state.n)
        self.tail = 0   # end that has been offered
        self.head = 0   # end that has not

    def respond(self, state, offered, rng=None):
        adj = state.graph.adj
        n = state.n
        if state.round == 1:
            u = _smallest_other(offered)
            self.tail, self.head = offered, u
            return u
        if not adj[offered] and self.tail:
            u, self.tail = self.tail, offered
            return u
        if offered == self.head and state.offered_counts[offered] == 0:
            iso = self._iso
            w = iso.first(1)
            while w <= n and (adj[w] or w == offered):
                if adj[w]:
                    iso.discard(w)
                w = iso.first(w + 1)
            if w <= n:
                self.head = w
                return w
        return _smallest_other(offered)


def hamilton_path() -> HamiltonPathStrategy:
    return HamiltonPathStrategy()


class _StarBase(BaseStrategy):
    center = 0

    def start(self, state):
        self._fresh = _Ascending(state.n)

    def _center_move(self, state):
        """The center was offered: join it to the smallest never-offered vertex."""
        c, n = self.center, state.n
        counts = state.offered_counts
        fresh = self._fresh
        w = fresh.first(1)
        while w <= n and (counts[w] or w == c):
            if counts[w]:
                fresh.discard(w)
            w = fresh.first(w + 1)
        if w <= n:
            return w
        adj = state.graph.adj[c]
        for z in range(1, n + 1):
            if z != c and z not in adj:
                return z
        return _smallest_other(c)

    def respond(self, state, offered, rng=None):
        if offered == self.center:
            return self._center_move(state)
        return self.center


class StarUnlabeled(_StarBase):
    """Round one fixes the center as the chosen vertex; afterwards everything joins it."""

    name = "star"

    def start(self, state):
        super().start(state)
        self.center = 0

    def respond(self, state, offered, rng=None):
        if not self.center:
            self.center = _smallest_other(offered)
            return self.center
        return super().respond(state, offered, rng)


class StarLabeled(_StarBase):
    name = "star-labeled"

    def __init__(self, center: int):
        self.center = center

    def start(self, state):
        if not 0 < self.center <= state.n:
            raise ValueError(f"center {self.center} outside [1..{state.n}]")
        super().start(state)


def star_unlabeled() -> StarUnlabeled:
    return StarUnlabeled()


def star_labeled(center: int = 1) -> StarLabeled:
    return StarLabeled(center)


STRATEGY_IDS: dict[str, str] = {
    "orientation": "orientation on C_n(1..k)",
    "mindeg-s0": "S0 for minimum degree 1",
    "mindeg-odd": "minimum degree 2k+1 (two stages)",
    "pm-labeled": "labeled perfect matching M0",
    "pm-forest": "linear-forest S0 for even components",
    "ham-path": "Hamilton path in n-1 rounds",
    "star": "unlabeled spanning star",
    "star-labeled": "spanning star centred at vertex 1",
    "edgecon": "(2k+1)-edge-connectivity (two stages)",
}


def make_strategy(strategy_id: str, k: Optional[int] = None, n: Optional[int] = None) -> BaseStrategy:
    if strategy_id == "orientation":
        if n is None:
            raise ValueError("orientation strategy needs n")
        return OrientationStrategy(natural_circulant_plan(n, 1 if k is None else k))
    if strategy_id == "mindeg-s0":
        return min_degree_s0()
    if strategy_id == "mindeg-odd":
        return min_degree_odd(1 if k is None else k)
    if strategy_id == "pm-labeled":
        return pm_labeled()
    if strategy_id == "pm-forest":
        return pm_linear_forest_s0()
    if strategy_id == "ham-path":
        return hamilton_path()
    if strategy_id == "star":
        return star_unlabeled()
    if strategy_id == "star-labeled":
        return star_labeled(1)
    if strategy_id == "edgecon":
        return edgecon_strategy(2 if k is None else k)
    raise KeyError(f"unknown strategy id {strategy_id!r}")


def pm_partner(i: int) -> int:
    return i + (-1) ** (i + 1)


def m0_edges(n: int) -> Sequence[tuple[int, int]]:
    return [(2 * i - 1, 2 * i) for i in range(1, n // 2 + 1)]
