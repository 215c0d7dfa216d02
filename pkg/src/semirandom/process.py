"""Offer stream, Builder's multigraph and the round loop of the game.

Vertices are labeled ``1..n``.  In round ``k`` Builder is offered the vertex
``v_k`` taken from a block of a uniformly random permutation of ``[n]``; a
strategy picks the other endpoint ``u_k`` and the edge ``u_k v_k`` is added.
``tau`` is the first round after which the stop predicate holds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Protocol

import numpy as np

RandomSource = np.random.Generator


def make_rng(seed: int) -> RandomSource:
    """PCG64 generator for a 64-bit seed; the one RNG type used everywhere."""
    return np.random.Generator(np.random.PCG64(seed))


class ContractViolation(RuntimeError):
    """A strategy answered with an illegal vertex."""


class MultiGraph:
    """Labeled multigraph on ``1..n`` storing edge multiplicities.

    ``adj[u]`` maps each neighbour of ``u`` to the multiplicity of the edge,
    so ``len(adj[u])`` is the simple degree.  Index 0 is unused.
    """

    __slots__ = ("n", "adj", "num_edges")

    def __init__(self, n: int, edges=()):
        if n < 0:
            raise ValueError("n must be non-negative")
        self.n = n
        self.adj: list[dict[int, int]] = [{} for _ in range(n + 1)]
        self.num_edges = 0
        for u, v in edges:
            self.add_edge(u, v)

    def add_edge(self, u: int, v: int) -> bool:
        """Add one copy of ``uv``; return True if it is a new simple edge."""
        if u == v:
            raise ValueError(f"self-loop at {u}")
        n = self.n
        if not (0 < u <= n and 0 < v <= n):
            raise ValueError(f"edge ({u}, {v}) outside [1..{n}]")
        au = self.adj[u]
        m = au.get(v, 0) + 1
        au[v] = m
        self.adj[v][u] = m
        self.num_edges += 1
        return m == 1

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def multiplicity(self, u: int, v: int) -> int:
        return self.adj[u].get(v, 0)

    def degree(self, u: int) -> int:
        """Simple degree (multiplicities collapsed)."""
        return len(self.adj[u])

    def vertices(self) -> range:
        return range(1, self.n + 1)

    def simple_edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(1, self.n + 1) for v in sorted(self.adj[u]) if u < v]

    def edges(self) -> list[tuple[int, int]]:
        """Edge multiset as a sorted list of pairs ``u < v`` (repeated by multiplicity)."""
        out = []
        for u, v in self.simple_edges():
            out.extend([(u, v)] * self.adj[u][v])
        return out

    def num_simple_edges(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def copy(self) -> "MultiGraph":
        g = MultiGraph(self.n)
        g.adj = [dict(a) for a in self.adj]
        g.num_edges = self.num_edges
        return g

    def __eq__(self, other) -> bool:
        return isinstance(other, MultiGraph) and self.n == other.n and self.adj == other.adj

    def __repr__(self) -> str:
        return f"MultiGraph(n={self.n}, edges={self.num_edges})"


class PermutationStream:
    """Block-structured offer sequence.

    Each block is a uniform permutation of ``[n]`` drawn from the run's RNG
    when the previous block is exhausted.  ``remaining`` is the set of
    vertices not yet offered in the current block.
    """

    __slots__ = ("n", "block_index", "_order", "_pos")

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("need at least one vertex")
        self.n = n
        self.block_index = 0
        self._order: list[int] = []
        self._pos = 0

    @property
    def remaining(self) -> set[int]:
        if self._pos >= len(self._order):
            return set(range(1, self.n + 1))
        return set(self._order[self._pos:])

    def _refill(self, rng: Optional[RandomSource]) -> None:
        if self._order:
            self.block_index += 1
        if rng is None:
            self._order = list(range(1, self.n + 1))
        else:
            self._order = (rng.permutation(self.n) + 1).tolist()
        self._pos = 0

    def next(self, rng: RandomSource) -> int:
        if self._pos >= len(self._order):
            self._refill(rng)
        v = self._order[self._pos]
        self._pos += 1
        return v

    def take(self, v: int) -> int:
        """Offer the specific vertex ``v`` (used by exhaustive enumeration)."""
        if self._pos >= len(self._order):
            self._refill(None)
        i = self._order.index(v, self._pos)
        o = self._order
        o[i], o[self._pos] = o[self._pos], o[i]
        self._pos += 1
        return v


def offer_next(stream: PermutationStream, rng: RandomSource) -> int:
    return stream.next(rng)


@dataclass
class GameState:
    """What a strategy sees when it is offered a vertex.

    At decision time ``round == graph.num_edges + 1`` and ``offered_counts``
    sums to ``round - 1`` (the current offer is not yet counted).
    """

    graph: MultiGraph
    stream: PermutationStream
    offered_counts: list[int]
    round: int = 0

    @classmethod
    def new(cls, n: int) -> "GameState":
        return cls(MultiGraph(n), PermutationStream(n), [0] * (n + 1))

    @property
    def n(self) -> int:
        return self.graph.n


class Strategy(Protocol):
    def start(self, state: GameState) -> None: ...

    def respond(self, state: GameState, offered: int, rng: Optional[RandomSource]) -> int: ...


class StopPredicate:
    """Monotone graph property checked after every edge.

    Subclasses implement ``done``; incremental ones also override ``reset``
    and ``update`` so that the play loop avoids a full recheck per round.
    """

    def done(self, graph: MultiGraph) -> bool:
        raise NotImplementedError

    def reset(self, graph: MultiGraph) -> bool:
        return self.done(graph)

    def update(self, graph: MultiGraph, u: int, v: int, fresh: bool) -> bool:
        return self.done(graph)


@dataclass
class GameOutcome:
    tau: Optional[int]
    final_graph: MultiGraph

    @property
    def reached(self) -> bool:
        return self.tau is not None


@dataclass
class RoundRecord:
    round: int
    offered: int
    chosen: int
    done: bool


@dataclass
class Trajectory:
    tau: Optional[int]
    final_graph: MultiGraph
    rounds: list[RoundRecord] = field(default_factory=list)

    def edge_list(self) -> list[tuple[int, int]]:
        return [(r.offered, r.chosen) for r in self.rounds]


def step(state: GameState, strategy: Strategy, offered: int, rng) -> tuple[int, bool]:
    """Play one round with a known offer; return (chosen vertex, new simple edge)."""
    chosen = strategy.respond(state, offered, rng)
    if chosen == offered or not (isinstance(chosen, (int, np.integer)) and 0 < chosen <= state.graph.n):
        raise ContractViolation(
            f"round {state.round}: strategy answered {chosen!r} to offered vertex {offered}")
    chosen = int(chosen)
    fresh = state.graph.add_edge(offered, chosen)
    state.offered_counts[offered] += 1
    return chosen, fresh


def _rounds(strategy: Strategy, stop: StopPredicate, n: int, max_rounds: int,
            rng) -> Iterator[tuple[GameState, int, int, bool]]:
    if max_rounds < 0:
        raise ValueError("max_rounds must be >= 0")
    state = GameState.new(n)
    graph = state.graph
    if stop.reset(graph):
        yield state, 0, 0, True
        return
    strategy.start(state)
    stream = state.stream
    for k in range(1, max_rounds + 1):
        state.round = k
        v = stream.next(rng)
        u, fresh = step(state, strategy, v, rng)
        yield state, v, u, stop.update(graph, v, u, fresh)


def play(strategy: Strategy, stop: StopPredicate, n: int, max_rounds: int,
         rng: RandomSource) -> GameOutcome:
    """Run one game; ``tau`` is None when ``max_rounds`` pass without success."""
    if max_rounds < 0:
        raise ValueError("max_rounds must be >= 0")
    state = GameState.new(n)
    graph = state.graph
    if stop.reset(graph):
        return GameOutcome(0, graph)
    strategy.start(state)
    stream = state.stream
    respond = strategy.respond
    update = stop.update
    counts = state.offered_counts
    for k in range(1, max_rounds + 1):
        state.round = k
        v = stream.next(rng)
        u = respond(state, v, rng)
        if u == v or not (0 < u <= n):
            raise ContractViolation(f"round {k}: strategy answered {u!r} to offered vertex {v}")
        fresh = graph.add_edge(v, u)
        counts[v] += 1
        if update(graph, v, u, fresh):
            return GameOutcome(k, graph)
    return GameOutcome(None, graph)


def play_recorded(strategy: Strategy, stop: StopPredicate, n: int, max_rounds: int,
                  rng: RandomSource) -> Trajectory:
    """Like :func:`play` but keeps the per-round log."""
    log: list[RoundRecord] = []
    state = None
    tau = None
    for state, v, u, done in _rounds(strategy, stop, n, max_rounds, rng):
        if state.round == 0:
            return Trajectory(0, state.graph, [])
        log.append(RoundRecord(state.round, v, u, done))
        if done:
            tau = state.round
            break
    graph = state.graph if state is not None else MultiGraph(n)
    return Trajectory(tau, graph, log)
