"""The two white/black urn processes and their exact analysis.

Model 1 starts with an even number ``n`` of white balls; a drawn white ball
turns one other white ball black.  Model 2 starts with ``n`` white balls and
every draw turns one white ball black while whites remain.  ``T`` is the
number of draws until no white ball is left.

Round ``i`` draws a white ball with probability ``W_{i-1} / (n - i + 1)``.
Simulation consumes one uniform per round, all drawn up front with a single
``rng.random(n)`` call, so a run is a pure function of the generator state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .exact import harmonic_range

EXACT_DP_LIMIT = 2000
EXACT_DP_DEFAULT = 60


@dataclass
class UrnState:
    model: int
    n: int
    round: int
    white: int

    @property
    def total(self) -> int:
        return self.n - self.round


@dataclass
class UrnRun:
    T: int
    trajectory: list[int]


def _check(model: int, n: int) -> None:
    if model not in (1, 2):
        raise ValueError(f"unknown urn model {model}")
    if n < 1:
        raise ValueError("n must be positive")
    if model == 1 and n % 2:
        raise ValueError("urn model 1 needs an even number of balls")


def urn_run(model: int, n: int, rng: np.random.Generator, record: bool = True) -> UrnRun:
    """Simulate until no white ball remains; ``trajectory`` is ``W_0..W_T``."""
    _check(model, n)
    U = rng.random(n).tolist()
    W = n
    traj = [n] if record else []
    balls = n
    i = 0
    if model == 1:
        for u in U:
            i += 1
            if u * balls < W:
                W -= 2
            if record:
                traj.append(W)
            if W == 0:
                break
            balls -= 1
    else:
        for u in U:
            i += 1
            if W > 1 and u * balls < W:
                W -= 2
            else:
                W -= 1
            if record:
                traj.append(W)
            if W == 0:
                break
            balls -= 1
    return UrnRun(i, traj)


def urn_checkpoints(model: int, n: int, rng: np.random.Generator,
                    checkpoints: Sequence[int]) -> tuple[int, list[int]]:
    """``T`` and ``W_j`` for each ``j`` in ``checkpoints`` (W_j = 0 for j >= T)."""
    run = urn_run(model, n, rng)
    traj = run.trajectory
    return run.T, [traj[j] if j < len(traj) else 0 for j in checkpoints]


def urn_distribution_dp(model: int, n: int, exact: Optional[bool] = None):
    """Exact law of ``T`` by a forward pass over (round, white count).

    Returns a dict ``{t: Fraction}`` in exact mode (default for
    ``n <= EXACT_DP_DEFAULT``), else a float64 array indexed by ``t``.
    """
    _check(model, n)
    if exact is None:
        exact = n <= EXACT_DP_DEFAULT
    if exact:
        if n > EXACT_DP_LIMIT:
            raise OverflowError(f"exact urn DP limited to n <= {EXACT_DP_LIMIT}")
        return _dp_exact(model, n)
    return _dp_float(model, n)


def _dp_exact(model: int, n: int) -> dict[int, Fraction]:
    dist = {n: Fraction(1)}
    pmf: dict[int, Fraction] = {}
    for i in range(1, n + 1):
        balls = n - i + 1
        nxt: dict[int, Fraction] = {}
        for w, p in dist.items():
            pw = Fraction(w, balls)
            if model == 1:
                moves = ((w - 2, pw), (w, 1 - pw))
            elif w > 1:
                moves = ((w - 2, pw), (w - 1, 1 - pw))
            else:
                moves = ((w - 1, Fraction(1)),)
            for w2, q in moves:
                if q:
                    nxt[w2] = nxt.get(w2, 0) + p * q
        if 0 in nxt:
            pmf[i] = nxt.pop(0)
        dist = nxt
        if not dist:
            break
    return pmf


def _dp_float(model: int, n: int) -> np.ndarray:
    pmf = np.zeros(n + 1)
    dist = np.zeros(n + 1)
    dist[n] = 1.0
    w = np.arange(n + 1, dtype=float)
    for i in range(1, n + 1):
        balls = n - i + 1
        pw = np.minimum(w / balls, 1.0)
        nxt = np.zeros(n + 1)
        if model == 1:
            nxt[:-2] += (dist * pw)[2:]
            nxt += dist * (1 - pw)
        else:
            nxt[:-2] += (dist * pw)[2:] * (w[2:] > 1)
            nxt[:-1] += (dist * (1 - pw))[1:]
            nxt[0] += dist[1] * pw[1]
        pmf[i] = nxt[0]
        nxt[0] = 0.0
        dist = nxt
        if dist.sum() < 1e-300:
            break
    return pmf


# --------------------------------------------------------------------------
# Moment formulas and tail bounds
# --------------------------------------------------------------------------

def urn1_mean_exact(n: int, j: int) -> Fraction:
    """E(W_j) for model 1."""
    if not 0 < j < n:
        raise ValueError("need 0 < j < n")
    return Fraction((n - j) * (n - j - 1), n - 1)


def urn1_tail_bound(n: int, alpha: int) -> Fraction:
    """Upper bound on Pr(T < n - alpha) for model 1; may exceed 1."""
    if not 0 < alpha < n:
        raise ValueError("need 0 < alpha < n")
    return Fraction(n ** 3, alpha ** 4)


def urn2_mean_bounds(n: int, j: int, prob_T_gt_j=1) -> tuple[Fraction, Fraction]:
    """Lower and upper bounds on E(W_j) for model 2.

    ``prob_T_gt_j`` is Pr(T > j); the upper bound uses it, the lower bound
    does not.
    """
    if not 0 < j < n:
        raise ValueError("need 0 < j < n")
    h = harmonic_range(n - j - 1, n - 1)
    p = Fraction(prob_T_gt_j)
    return (n - j) * (1 - h), (n - j) * (1 - p * h)


def m0(n: int) -> int:
    """floor((1 - 1/e) n), computed exactly for any size."""
    # floor(n - n/e) = n - ceil(n/e); n/e is irrational so ceil = floor + 1.
    # Partial sums of sum (-1)^k / k! bracket 1/e within the next term.
    k, term, s = 0, Fraction(1), Fraction(0)
    while True:
        s += term * (-1) ** k
        k += 1
        term /= k
        if term * n < Fraction(1, 10**6):
            break
    lo = n * s - n * term
    hi = n * s + n * term
    if math.floor(lo) != math.floor(hi):
        raise ArithmeticError("could not isolate floor(n/e)")
    return n - (math.floor(lo) + 1)


@dataclass
class Urn2Tails:
    lower_tail_prob_bound: float
    upper_tail_threshold: float
    upper_tail_prob_bound: float


def urn2_tail_bounds(n: int, alpha: float) -> Urn2Tails:
    """Constants of the two-sided concentration statement for model 2.

    Pr(T < m0 - alpha) < 6n/alpha^2 and
    Pr(T > m0 + 36 alpha + 12n/alpha^2) < 6n/alpha^2.
    """
    m = m0(n)
    if n < 4 or not 0 < alpha < m:
        raise ValueError("need n >= 4 and 0 < alpha < floor((1 - 1/e) n)")
    bound = 6 * n / alpha ** 2
    return Urn2Tails(bound, m + 36 * alpha + 12 * n / alpha ** 2, bound)
