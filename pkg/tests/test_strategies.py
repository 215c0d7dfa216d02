from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from semirandom import graphs, predicates, strategies
from semirandom.process import GameState, MultiGraph, make_rng, play, play_recorded
from semirandom.strategies import _Ascending


def test_ascending_set():
    s = _Ascending(6)
    assert s.first() == 1
    s.discard(1)
    s.discard(2)
    s.discard(4)
    assert s.first() == 3 and s.first(4) == 5
    s.discard(5)
    s.discard(6)
    assert s.first(4) == 7


ALL = [
    ("mindeg-s0", None, predicates.MinDegree(1)),
    ("mindeg-odd", 1, predicates.MinDegree(3)),
    ("pm-labeled", None, predicates.ContainsEdges(strategies.m0_edges(12))),
    ("pm-forest", None, predicates.PerfectMatching()),
    ("ham-path", None, predicates.HamiltonPath()),
    ("star", None, predicates.SpanningStar()),
    ("star-labeled", None, predicates.SpanningStar(1)),
    ("orientation", 2, predicates.ContainsEdges(graphs.circulant(12, 2))),
    ("edgecon", 2, predicates.EdgeConnected(5)),
]


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 2 ** 64 - 1))
@pytest.mark.parametrize("sid,k,stop", ALL, ids=[a[0] for a in ALL])
def test_every_strategy_reaches_target(sid, k, stop, seed):
    n = 12
    strat = strategies.make_strategy(sid, k=k, n=n)
    out = play(strat, stop, n, 12 * n, make_rng(seed))
    assert out.reached and stop.done(out.final_graph)


def test_unknown_strategy():
    with pytest.raises(KeyError):
        strategies.make_strategy("nope")


def test_orientation_exact_rounds():
    for seed in range(20):
        out = play(strategies.make_strategy("orientation", k=3, n=30),
                   predicates.ContainsEdges(graphs.circulant(30, 3)), 30, 200, make_rng(seed))
        assert out.tau == 90


def test_orientation_from_edges_uses_min_outdegree():
    edges = [(1, 2), (2, 3), (3, 1), (3, 4)]
    s = strategies.orientation_strategy(edges=edges, n=4)
    assert s.plan.max_out_degree == 1
    assert s.plan.edges() == sorted((min(e), max(e)) for e in edges)
    out = play(s, predicates.ContainsEdges(edges), 4, 20, make_rng(0))
    assert out.tau <= 4
    with pytest.raises(TypeError):
        strategies.orientation_strategy()


def test_mindeg_s0_connects_isolated_vertices():
    tr = play_recorded(strategies.min_degree_s0(), predicates.MinDegree(1), 9, 30, make_rng(5))
    g = MultiGraph(9)
    for r in tr.rounds:
        isolated = [w for w in g.vertices() if not g.adj[w] and w != r.offered]
        if isolated:
            assert r.chosen == isolated[0]
        g.add_edge(r.offered, r.chosen)


def test_edge_disjoint_s0_avoids_forbidden():
    n = 20
    forbidden = graphs.circulant(n, 2)
    strat = strategies.EdgeDisjointS0(forbidden)
    out = play(strat, predicates.Never(), n, 3 * n, make_rng(3))
    bad = {(min(a, b), max(a, b)) for a, b in forbidden}
    assert all((min(a, b), max(a, b)) not in bad for a, b in strat.claimed)
    assert len(strat.claimed) == out.final_graph.num_edges


def test_two_stage_switches_after_kn_rounds():
    n, k = 30, 1
    tr = play_recorded(strategies.min_degree_odd(k), predicates.Never(), n, 3 * n, make_rng(8))
    first = MultiGraph(n, tr.edge_list()[: k * n])
    assert sorted(first.simple_edges()) == sorted(graphs.circulant(n, k))
    circ = {tuple(e) for e in graphs.circulant(n, k)}
    later = tr.edge_list()[k * n:]
    assert all((min(a, b), max(a, b)) not in circ for a, b in later)


def test_edgecon_stage_one_is_gt():
    n, k = 501, 2
    strat = strategies.edgecon_strategy(k)
    tr = play_recorded(strat, predicates.Never(), n, k * n, make_rng(1))
    built = MultiGraph(n, tr.edge_list())
    assert sorted(built.simple_edges()) == sorted(graphs.build_gt(n, 2 * k - 1).edges)
    with pytest.raises(ValueError):
        strategies.edgecon_strategy(1)


def test_pm_labeled_rejects_odd():
    with pytest.raises(ValueError):
        play(strategies.pm_labeled(), predicates.Never(), 5, 3, make_rng(0))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2 ** 64 - 1), half=st.integers(1, 15))
def test_linear_forest_invariants(seed, half):
    n = 2 * half
    strat = strategies.pm_linear_forest_s0()
    stop = predicates.PerfectMatching()
    tr = play_recorded(strat, stop, n, n, make_rng(seed))
    assert tr.tau is not None and tr.tau <= n
    g = tr.final_graph
    assert g.num_simple_edges() == g.num_edges  # no repeated edges
    assert max(g.degree(u) for u in g.vertices()) <= 2
    assert g.num_edges == n - len(graphs.components(g))  # a forest
    for active, other, size in strat.components():
        assert g.degree(active) <= 1
    assert graphs.all_components_even(g)


def test_linear_forest_after_first_block():
    # offers of already-offered vertices only happen once the target is met
    state = GameState.new(4)
    strat = strategies.pm_linear_forest_s0()
    strat.start(state)
    state.round = 1
    u = strat.respond(state, 1, None)
    state.graph.add_edge(1, u)
    assert strat.respond(state, 1, None) == 2


def test_hamilton_path_builds_a_path():
    for seed in range(30):
        n = 40
        out = play(strategies.hamilton_path(), predicates.HamiltonPath(), n, 2 * n, make_rng(seed))
        assert out.tau == n - 1
        g = out.final_graph
        assert g.num_edges == n - 1 and max(g.degree(u) for u in g.vertices()) == 2


def test_star_strategies_in_one_block():
    for seed in range(30):
        out = play(strategies.star_unlabeled(), predicates.SpanningStar(), 15, 60, make_rng(seed))
        assert out.tau <= 15
        out = play(strategies.star_labeled(3), predicates.SpanningStar(3), 15, 60, make_rng(seed))
        assert out.tau <= 15
    with pytest.raises(ValueError):
        play(strategies.star_labeled(9), predicates.Never(), 5, 3, make_rng(0))


def test_m0_and_partner():
    assert strategies.m0_edges(6) == [(1, 2), (3, 4), (5, 6)]
    assert [strategies.pm_partner(i) for i in range(1, 7)] == [2, 1, 4, 3, 6, 5]


def test_strategies_are_deterministic():
    # every strategy is deterministic given the offers
    for sid, k, _ in ALL:
        a = play_recorded(strategies.make_strategy(sid, k=k, n=12), predicates.Never(), 12, 30, make_rng(4))
        b = play_recorded(strategies.make_strategy(sid, k=k, n=12), predicates.Never(), 12, 30, make_rng(4))
        assert a.edge_list() == b.edge_list()
