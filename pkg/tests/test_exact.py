from __future__ import annotations

import math
import random
from fractions import Fraction
from itertools import permutations

import pytest

from semirandom import exact
from semirandom.strategies import m0_edges


def test_harmonic_values():
    assert exact.harmonic(0) == 0
    assert exact.harmonic(1) == 1
    assert exact.harmonic(3) == Fraction(11, 6)
    assert exact.harmonic_range(2, 4) == Fraction(7, 12)
    assert exact.harmonic_range(5, 5) == 0
    with pytest.raises(ValueError):
        exact.harmonic_range(4, 2)
    with pytest.raises(ValueError):
        exact.harmonic(-1)


def test_harmonic_sandwich():
    r = random.Random(7)
    for _ in range(1000):
        m = r.randint(1, 400)
        l = r.randint(1, m)
        h = exact.harmonic_range(l, m)
        assert Fraction(m - l, m) <= h <= Fraction(m - l, l + 1)
        hf = float(h)
        assert math.log((m + 1) / (l + 1)) <= hf + 1e-12
        assert hf <= math.log(m / l) + 1e-12


def test_pm_hit_probability_values():
    assert exact.pm_hit_probability(10, 0) == 1
    assert exact.pm_hit_probability(10, 1) == 1
    assert exact.pm_hit_probability(4, 2) == Fraction(2, 3)
    for bad in ((5, 1), (4, 3), (4, -1), (0, 0)):
        with pytest.raises(ValueError):
            exact.pm_hit_probability(*bad)


def test_pm_hit_probability_by_permutations():
    # no pair {2i-1, 2i} entirely among the last r entries
    for n in (2, 4, 6):
        perms = list(permutations(range(1, n + 1)))
        for r in range(n // 2 + 1):
            good = sum(1 for p in perms
                       if not any({2 * i - 1, 2 * i} <= set(p[n - r:]) for i in range(1, n // 2 + 1)))
            assert Fraction(good, len(perms)) == exact.pm_hit_probability(n, r)


def test_star_probs():
    assert exact.star_probs(2) == (1, 1, 0)
    assert exact.star_probs(3) == (1, Fraction(5, 6), Fraction(1, 6))
    assert exact.star_probs(4) == (Fraction(5, 6), Fraction(17, 24), Fraction(1, 8))
    with pytest.raises(ValueError):
        exact.star_probs(1)


def test_path_sequence():
    a = exact.path_a_sequence(6)
    assert a[:3] == [1, 2, Fraction(5, 2)]
    assert exact.path_p(3) == Fraction(5, 6)
    assert exact.path_p(1) == 1
    with pytest.raises(ValueError):
        exact.path_a_sequence(0)
    with pytest.raises(OverflowError):
        exact.path_a_sequence(exact.PATH_EXACT_LIMIT + 1)


def test_path_float_matches_exact():
    ex = exact.path_a_sequence(250)
    fl = exact.path_a_sequence(250, exact=False)
    assert all(abs(float(x) - y) < 1e-12 for x, y in zip(ex, fl))
    assert all(y >= x for x, y in zip(ex, ex[1:]))
    assert all(1 <= x < 7 for x in ex)


def test_components_of():
    comps = exact.components_of(5, [(1, 2), (2, 1), (4, 5)])
    assert comps == [({1, 2}, 1), ({3}, 0), ({4, 5}, 1)]


def test_good_permutation_examples():
    m0 = m0_edges(4)
    assert not exact.good_permutation(m0, (1, 2, 3, 4), 2)
    assert exact.good_permutation(m0, (1, 3, 2, 4), 2)
    tree = [(1, 2), (2, 3)]  # e(C) = 2 <= v(C) = 3
    for p in permutations(range(1, 4)):
        assert exact.good_permutation(tree, p, 0)
    with pytest.raises(ValueError):
        exact.good_permutation(m0, (1, 2, 3, 4), 5)


def test_good_fraction_equals_pm_probability_n2():
    assert exact.good_permutation([(1, 2)], (2, 1), 1)
    assert exact.pm_hit_probability(2, 1) == 1
