"""Seeded, reproducible Monte Carlo over many independent games.

Trial ``i`` of a plan with master seed ``s`` runs on
``make_rng(trial_seed(s, i))`` where ``trial_seed`` is the SplitMix64
finalizer applied to ``s + (i + 1) * 0x9E3779B97F4A7C15 (mod 2^64)``.
Records depend only on (plan, i), so the worker count never changes them.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from . import graphs, predicates, strategies
from .process import make_rng, play
from .urns import urn_run

M64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
SCHEMA_VERSION = 1
QUANTILES = (1, 5, 25, 50, 75, 95, 99)
DEFAULT_TRIAL_LIMIT = 10 ** 7


class ResourceGuard(RuntimeError):
    """A plan asks for more work than the configured limits allow."""


def splitmix64(x: int) -> int:
    z = x & M64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & M64
    return z ^ (z >> 31)


def trial_seed(master_seed: int, i: int) -> int:
    return splitmix64((master_seed + GOLDEN * (i + 1)) & M64)


@dataclass
class TrialPlan:
    game: str
    n: int
    trials: int
    master_seed: int = 0xC0FFEE
    k: Optional[int] = None
    target: Optional[str] = None
    workers: Optional[int] = None
    max_rounds: Optional[int] = None
    ecdf_points: Sequence[int] = ()


@dataclass
class TrialRecord:
    trial: int
    seed: int
    tau: Optional[int]

    @property
    def reached(self) -> bool:
        return self.tau is not None


@dataclass
class SummaryStats:
    trials: int
    reached: int
    not_reached: int
    mean: Optional[float]
    variance: Optional[float]
    min: Optional[int]
    max: Optional[int]
    quantiles: dict[str, float] = field(default_factory=dict)
    ecdf: dict[str, float] = field(default_factory=dict)


# --------------------------------------------------------------------------
# Games
# --------------------------------------------------------------------------

def make_stop(target: str, n: int) -> predicates.StopPredicate:
    """Stop predicate from an id such as ``mindeg:3``, ``edgecon:5``, ``pm``."""
    name, _, arg = target.partition(":")
    if name == "mindeg":
        return predicates.MinDegree(int(arg or 1))
    if name == "edgecon":
        return predicates.EdgeConnected(int(arg or 1))
    if name == "pm":
        return predicates.PerfectMatching()
    if name == "m0":
        return predicates.ContainsEdges(strategies.m0_edges(n))
    if name == "even":
        return predicates.EvenComponents()
    if name == "path":
        return predicates.HamiltonPath()
    if name == "star":
        return predicates.SpanningStar(int(arg) if arg else None)
    if name == "circulant":
        return predicates.ContainsEdges(graphs.circulant(n, int(arg or 1)))
    raise KeyError(f"unknown target id {target!r}")


# game id -> (default target given k, default max rounds given (n, k))
_GAMES: dict[str, tuple[Callable[[int], str], Callable[[int, int], int]]] = {
    "orientation": (lambda k: f"circulant:{k}", lambda n, k: (2 * k + 1) * n),
    "mindeg-s0": (lambda k: "mindeg:1", lambda n, k: 2 * n),
    "mindeg-odd": (lambda k: f"mindeg:{2 * k + 1}", lambda n, k: (2 * k + 2) * n),
    "pm-labeled": (lambda k: "m0", lambda n, k: 2 * n),
    "pm-forest": (lambda k: "pm", lambda n, k: 2 * n),
    "ham-path": (lambda k: "path", lambda n, k: 2 * n),
    "star": (lambda k: "star", lambda n, k: 2 * n),
    "star-labeled": (lambda k: "star:1", lambda n, k: 2 * n),
    "edgecon": (lambda k: f"edgecon:{2 * k + 1}", lambda n, k: (2 * k + 2) * n),
}
_DEFAULT_K = {"orientation": 1, "mindeg-odd": 1, "edgecon": 2}
URN_GAMES = ("urn1", "urn2")
GAME_IDS = tuple(_GAMES) + URN_GAMES + ("bernoulli",)


def plan_k(plan: TrialPlan) -> int:
    return _DEFAULT_K.get(plan.game, 0) if plan.k is None else plan.k


def default_max_rounds(plan: TrialPlan) -> int:
    if plan.game in URN_GAMES or plan.game == "bernoulli":
        return plan.n
    return _GAMES[plan.game][1](plan.n, plan_k(plan))


def validate(plan: TrialPlan) -> None:
    if plan.game not in GAME_IDS:
        raise KeyError(f"unknown game id {plan.game!r}")
    if plan.trials < 1:
        raise ValueError("trials must be >= 1")
    if plan.n < 1:
        raise ValueError("n must be >= 1")
    if not 0 <= plan.master_seed <= M64:
        raise ValueError("master seed must fit in 64 bits")
    if plan.trials > DEFAULT_TRIAL_LIMIT:
        raise ResourceGuard(f"more than {DEFAULT_TRIAL_LIMIT} trials requested")


def run_trial(plan: TrialPlan, i: int) -> TrialRecord:
    seed = trial_seed(plan.master_seed, i)
    rng = make_rng(seed)
    game = plan.game
    if game == "bernoulli":
        return TrialRecord(i, seed, 1 if rng.random() < 0.5 else 2)
    if game in URN_GAMES:
        return TrialRecord(i, seed, urn_run(1 if game == "urn1" else 2, plan.n, rng, record=False).T)
    k = plan_k(plan)
    strategy = strategies.make_strategy(game, k=k, n=plan.n)
    stop = make_stop(plan.target or _GAMES[game][0](k), plan.n)
    max_rounds = plan.max_rounds if plan.max_rounds is not None else default_max_rounds(plan)
    return TrialRecord(i, seed, play(strategy, stop, plan.n, max_rounds, rng).tau)


def _run_range(plan: TrialPlan, lo: int, hi: int) -> list[TrialRecord]:
    return [run_trial(plan, i) for i in range(lo, hi)]


def worker_count(plan: TrialPlan) -> int:
    if plan.workers is not None:
        w = plan.workers
    else:
        w = int(os.environ.get("SEMIRANDOM_WORKERS", "1"))
    if w < 1:
        raise ValueError("worker count must be >= 1")
    return min(w, plan.trials)


def run_records(plan: TrialPlan) -> list[TrialRecord]:
    validate(plan)
    workers = worker_count(plan)
    if workers == 1:
        return _run_range(plan, 0, plan.trials)
    bounds = np.linspace(0, plan.trials, workers + 1).astype(int)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_run_range, plan, int(a), int(b))
                   for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
        out: list[TrialRecord] = []
        for f in futures:
            out.extend(f.result())
    return out


def run_plan(plan: TrialPlan) -> tuple[list[TrialRecord], SummaryStats]:
    records = run_records(plan)
    return records, summarize(records, plan.ecdf_points)


# --------------------------------------------------------------------------
# Statistics and output
# --------------------------------------------------------------------------

def ecdf(records: Sequence[TrialRecord], k: float) -> float:
    """Fraction of all trials with tau <= k (unreached trials never count)."""
    if not records:
        raise ValueError("no records")
    return sum(1 for r in records if r.tau is not None and r.tau <= k) / len(records)


def summarize(records: Sequence[TrialRecord], points: Iterable[int] = ()) -> SummaryStats:
    taus = np.array([r.tau for r in records if r.tau is not None], dtype=float)
    reached = len(taus)
    stats = SummaryStats(len(records), reached, len(records) - reached, None, None, None, None)
    if reached:
        stats.mean = float(taus.mean())
        stats.variance = float(taus.var(ddof=1)) if reached > 1 else 0.0
        stats.min = int(taus.min())
        stats.max = int(taus.max())
        qs = np.percentile(taus, QUANTILES)
        stats.quantiles = {str(q): float(v) for q, v in zip(QUANTILES, qs)}
    stats.ecdf = {str(p): ecdf(records, p) for p in points}
    return stats


def ecdf_vs_formula(records: Sequence[TrialRecord], formula: Callable[[int], float],
                    points: Iterable[int]) -> float:
    """max over ``points`` of |ECDF(k) - formula(k)|."""
    return max((abs(ecdf(records, k) - float(formula(k))) for k in points), default=0.0)


def records_csv(records: Iterable[TrialRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["trial", "seed", "tau", "reached"])
    for r in records:
        w.writerow([r.trial, r.seed, "" if r.tau is None else r.tau, int(r.reached)])
    return buf.getvalue()


def summary_json(stats: SummaryStats, plan: Optional[TrialPlan] = None) -> str:
    doc = {"schema_version": SCHEMA_VERSION}
    if plan is not None:
        p = asdict(plan)
        p["ecdf_points"] = list(plan.ecdf_points)
        p.pop("workers")  # output must not depend on scheduling
        doc["plan"] = p
    doc.update(asdict(stats))
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def mean_ci(records: Sequence[TrialRecord], z: float = 3.0) -> tuple[float, float]:
    """(mean, z * standard error) over reached trials."""
    taus = [r.tau for r in records if r.tau is not None]
    if len(taus) < 2:
        raise ValueError("need at least two reached trials")
    m = sum(taus) / len(taus)
    var = sum((t - m) ** 2 for t in taus) / (len(taus) - 1)
    return m, z * math.sqrt(var / len(taus))
