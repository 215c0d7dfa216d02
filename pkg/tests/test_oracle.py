from __future__ import annotations

from fractions import Fraction

import pytest

from semirandom import oracle, strategies
from semirandom.exact import path_p, pm_hit_probability, star_probs


def test_k_zero_is_zero():
    for tid in oracle.TARGET_IDS:
        t = oracle.make_target(tid, 4)
        assert oracle.optimal_success_prob(t, 4, 0) == 0
        assert oracle.strategy_success_prob(strategies.min_degree_s0, t, 4, 0) == 0


def test_labeled_star_n4():
    t = oracle.make_target("star-labeled", 4)
    assert oracle.optimal_success_prob(t, 4, 3) == Fraction(17, 24) == star_probs(4)[1]
    assert oracle.strategy_success_prob(lambda: strategies.star_labeled(1), t, 4, 3) == Fraction(17, 24)


def test_star_strategies_are_optimal():
    for n in range(3, 7):
        unl, lab, _ = star_probs(n)
        assert oracle.strategy_success_prob(strategies.star_unlabeled, oracle.make_target("star", n), n, n - 1) == unl
        assert oracle.strategy_success_prob(strategies.star_labeled, oracle.make_target("star-labeled", n),
                                            n, n - 1) == lab


def test_mindeg_s0_n4_k3():
    t = oracle.mindeg_target(4)
    assert oracle.optimal_success_prob(t, 4, 3) == oracle.strategy_success_prob(strategies.min_degree_s0, t, 4, 3)


def test_pm_labeled_value():
    t = oracle.m0_target(4)
    assert oracle.strategy_success_prob(strategies.pm_labeled, t, 4, 2) == Fraction(2, 3) == pm_hit_probability(4, 2)
    for n in (4, 6):
        law = oracle.strategy_tau_distribution(strategies.pm_labeled, oracle.m0_target(n), n, n)
        for r in range(n // 2 + 1):
            assert sum(p for k, p in law.items() if k <= n - r) == pm_hit_probability(n, r)


def test_hamilton_path_certain():
    for n in range(2, 7):
        t = oracle.make_target("path", n)
        assert oracle.strategy_success_prob(strategies.hamilton_path, t, n, n - 1) == 1


def test_labeled_path_formula():
    for n in range(2, 7):
        assert oracle.optimal_success_prob(oracle.make_target("path-labeled", n), n, n - 1) == path_p(n)


def test_iso_at_least_labeled_and_monotone():
    pairs = [("star", "star-labeled"), ("path", "path-labeled"), ("pm", "m0")]
    for n in (4, 5, 6):
        for iso_id, lab_id in pairs:
            if iso_id == "pm" and n % 2:
                continue
            iso, lab = oracle.make_target(iso_id, n), oracle.make_target(lab_id, n)
            prev_i = prev_l = Fraction(0)
            for k in range(0, n + 2):
                pi = oracle.optimal_success_prob(iso, n, k)
                pl = oracle.optimal_success_prob(lab, n, k)
                assert pi >= pl
                assert pi >= prev_i and pl >= prev_l
                prev_i, prev_l = pi, pl


def test_all_trees_counts():
    assert [len(oracle.all_trees(n)) for n in range(1, 8)] == [1, 1, 1, 2, 3, 6, 11]
    with pytest.raises(OverflowError):
        oracle.all_trees(9)
    assert oracle.tree_canonical(4, [(1, 2), (2, 3), (3, 4)]) == oracle.tree_canonical(4, [(2, 4), (4, 1), (1, 3)])


def test_tau_certain_examples():
    assert oracle.tau_certain(oracle.make_target("path", 5), 5)
    assert not oracle.tau_certain(oracle.make_target("star", 5), 5)


def test_guards():
    with pytest.raises(OverflowError):
        oracle.mindeg_target(8)
    t = oracle.mindeg_target(6)
    with pytest.raises(oracle.OracleBudgetExceeded):
        oracle.optimal_success_prob(t, 6, 6, budget=50)
    with pytest.raises(ValueError):
        oracle.optimal_success_prob(t, 5, 3)
    with pytest.raises(KeyError):
        oracle.make_target("nope", 4)


def test_mask_round_trip():
    edges = [(1, 3), (2, 4), (3, 4)]
    assert oracle.mask_to_edges(4, oracle.edges_to_mask(4, edges)) == sorted(edges)
