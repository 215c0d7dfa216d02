"""Exact rational quantities: harmonic sums, matching and star hit
probabilities, the labeled-path sequence ``a_n`` and good permutations.

Everything returns :class:`fractions.Fraction` unless a float mode is asked
for explicitly.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

PATH_EXACT_LIMIT = 400


def harmonic(m: int) -> Fraction:
    """H_m = 1 + 1/2 + ... + 1/m, with H_0 = 0."""
    if m < 0:
        raise ValueError("harmonic number needs m >= 0")
    return harmonic_range(0, m)


def harmonic_range(l: int, m: int) -> Fraction:
    """H_{l,m} = H_m - H_l = sum of 1/i for l < i <= m."""
    if not 0 <= l <= m:
        raise ValueError("need 0 <= l <= m")
    s = Fraction(0)
    for i in range(l + 1, m + 1):
        s += Fraction(1, i)
    return s


def pm_hit_probability(n: int, r: int) -> Fraction:
    """Probability that the last ``r`` vertices of a uniform permutation of
    ``[n]`` contain no pair ``{2i-1, 2i}``; equivalently Pr(tau <= n - r)
    for the labeled matching strategy."""
    if n < 2 or n % 2:
        raise ValueError("n must be even and positive")
    if not 0 <= r <= n // 2:
        raise ValueError("need 0 <= r <= n/2")
    p = Fraction(1)
    for i in range(r):
        p *= 1 - Fraction(i, n - i)
    return p


def star_probs(n: int) -> tuple[Fraction, Fraction, Fraction]:
    """(unlabeled, labeled, gap) success probabilities of building a
    spanning star within ``n - 1`` rounds."""
    if n < 2:
        raise ValueError("star needs n >= 2")
    unlabeled = (1 + harmonic(n - 2)) / (n - 1)
    labeled = (1 + harmonic(n - 1)) / n
    gap = harmonic(n - 2) / (n * (n - 1))
    assert gap == unlabeled - labeled
    return unlabeled, labeled, gap


def path_a_sequence(n_max: int, exact: bool = True) -> list:
    """``[a_1, ..., a_{n_max}]`` with ``a_n = n * Pr(labeled path in n-1 rounds)``.

    Exact mode evaluates every ``max`` of the recursion literally over
    Fractions and is limited to ``n_max <= PATH_EXACT_LIMIT``.  Float mode
    uses prefix sums, which is valid only while the sequence is
    nondecreasing; that is checked term by term and an ArithmeticError is
    raised if it ever fails.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if exact:
        if n_max > PATH_EXACT_LIMIT:
            raise OverflowError(f"exact path recursion limited to n <= {PATH_EXACT_LIMIT}")
        a = [Fraction(0), Fraction(1)]
        for n in range(2, n_max + 1):
            s = 2 * a[n - 1]
            for i in range(2, n):
                s += max(a[i - 1], a[n - i])
            a.append(s / (n - 1))
        return a[1:]

    # with a nondecreasing, max(a_s, a_{n-1-s}) = a_{max(s, n-1-s)}; summing
    # over s = 1..n-2 gives a_c..a_{n-2} plus a_{n-c}..a_{n-2}, c = ceil((n-1)/2)
    a = [0.0, 1.0]
    pre = [0.0, 1.0]  # pre[j] = a_1 + ... + a_j
    for n in range(2, n_max + 1):
        c = n // 2
        hi = n - 2
        s = 0.0
        if hi >= 1:
            s += pre[hi] - pre[c - 1]
            s += pre[hi] - pre[n - c - 1]
        val = (2 * a[n - 1] + s) / (n - 1)
        if val < a[n - 1] * (1 - 1e-12):
            raise ArithmeticError(f"a_n decreased at n={n}; prefix-sum form invalid")
        a.append(val)
        pre.append(pre[-1] + val)
    return a[1:]


def path_p(n: int) -> Fraction:
    """Pr(tau_lab(path, n) = n - 1) = a_n / n."""
    return path_a_sequence(n)[-1] / n


def components_of(n: int, edges: Iterable[tuple[int, int]]) -> list[tuple[set, int]]:
    """Components of the simple graph on ``[n]`` as (vertex set, edge count)."""
    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    simple = {(min(u, v), max(u, v)) for u, v in edges}
    for u, v in simple:
        a, b = find(u), find(v)
        if a != b:
            parent[a] = b
    groups: dict[int, set] = {}
    for v in range(1, n + 1):
        groups.setdefault(find(v), set()).add(v)
    count: dict[int, int] = {}
    for u, v in simple:
        r = find(u)
        count[r] = count.get(r, 0) + 1
    return [(vs, count.get(root, 0)) for root, vs in sorted(groups.items(), key=lambda t: min(t[1]))]


def good_permutation(edges, pi: Sequence[int], r: int, comps=None) -> bool:
    """True if the first ``n - r`` entries of ``pi`` meet every component
    ``C`` of the graph in at least ``e(C)`` vertices."""
    n = len(pi)
    if not 0 <= r <= n:
        raise ValueError("need 0 <= r <= n")
    if comps is None:
        comps = components_of(n, edges)
    prefix = set(pi[: n - r])
    return all(len(vs & prefix) >= e for vs, e in comps)
