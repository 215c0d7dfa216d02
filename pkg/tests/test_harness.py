from __future__ import annotations

import json
import math

import pytest

from semirandom import harness, predicates, strategies
from semirandom.harness import TrialPlan, TrialRecord
from semirandom.process import make_rng, play


def test_splitmix_vector():
    # first output of the reference generator seeded with 0
    assert harness.trial_seed(0, 0) == 0xE220A8397B1DCDAF
    assert harness.splitmix64(0) == 0
    seeds = {harness.trial_seed(0xC0FFEE, i) for i in range(1000)}
    assert len(seeds) == 1000


def test_csv_independent_of_workers():
    plan = TrialPlan("mindeg-s0", 40, 30, master_seed=11)
    a = harness.records_csv(harness.run_records(TrialPlan(**{**plan.__dict__, "workers": 1})))
    b = harness.records_csv(harness.run_records(TrialPlan(**{**plan.__dict__, "workers": 2})))
    assert a == b
    assert a.splitlines()[0] == "trial,seed,tau,reached"


def test_single_trial_matches_direct_play():
    plan = TrialPlan("ham-path", 25, 1, master_seed=99)
    (rec,) = harness.run_records(plan)
    seed = harness.trial_seed(99, 0)
    out = play(strategies.hamilton_path(), predicates.HamiltonPath(), 25, 50, make_rng(seed))
    assert rec.seed == seed and rec.tau == out.tau == 24


def test_bernoulli_ecdf():
    trials = 4000
    recs, stats = harness.run_plan(TrialPlan("bernoulli", 1, trials, master_seed=5, ecdf_points=(0, 1, 2)))
    assert abs(stats.ecdf["1"] - 0.5) <= 4 / math.sqrt(trials)
    assert stats.ecdf["0"] == 0 and stats.ecdf["2"] == 1
    assert harness.ecdf_vs_formula(recs, lambda k: harness.ecdf(recs, k), range(4)) == 0


def test_summary_invariants():
    recs = [TrialRecord(0, 1, 3), TrialRecord(1, 2, None), TrialRecord(2, 3, 5), TrialRecord(3, 4, 4)]
    s = harness.summarize(recs, (4, 10))
    assert (s.trials, s.reached, s.not_reached) == (4, 3, 1)
    assert s.mean == 4 and s.variance == 1 and (s.min, s.max) == (3, 5)
    assert s.ecdf == {"4": 0.5, "10": 0.75}  # unreached never counts
    qs = list(s.quantiles.values())
    assert qs == sorted(qs) and s.min <= qs[0] and qs[-1] <= s.max
    assert "1,2,,0" in harness.records_csv(recs)
    m, hw = harness.mean_ci(recs)
    assert m == 4 and hw == pytest.approx(3 / math.sqrt(3))


def test_empty_summary():
    s = harness.summarize([TrialRecord(0, 1, None)])
    assert s.mean is None and s.not_reached == 1
    with pytest.raises(ValueError):
        harness.ecdf([], 1)


def test_summary_json_schema():
    plan = TrialPlan("urn1", 20, 50, workers=3)
    recs, stats = harness.run_plan(plan)
    doc = json.loads(harness.summary_json(stats, plan))
    assert doc["schema_version"] == harness.SCHEMA_VERSION
    assert "workers" not in doc["plan"] and doc["plan"]["game"] == "urn1"
    assert doc["trials"] == 50 and doc["reached"] == 50


def test_validation():
    with pytest.raises(KeyError):
        harness.run_records(TrialPlan("nope", 10, 1))
    with pytest.raises(ValueError):
        harness.run_records(TrialPlan("urn1", 10, 0))
    with pytest.raises(ValueError):
        harness.run_records(TrialPlan("urn1", 10, 1, master_seed=-1))
    with pytest.raises(harness.ResourceGuard):
        harness.run_records(TrialPlan("urn1", 10, 10 ** 7 + 1))
    with pytest.raises(KeyError):
        harness.make_stop("bogus", 5)


def test_worker_env(monkeypatch):
    monkeypatch.setenv("SEMIRANDOM_WORKERS", "3")
    assert harness.worker_count(TrialPlan("urn1", 5, 10)) == 3
    assert harness.worker_count(TrialPlan("urn1", 5, 2)) == 2
    monkeypatch.setenv("SEMIRANDOM_WORKERS", "0")
    with pytest.raises(ValueError):
        harness.worker_count(TrialPlan("urn1", 5, 2))


def test_max_rounds_cap_gives_unreached():
    recs = harness.run_records(TrialPlan("mindeg-s0", 50, 5, max_rounds=3))
    assert all(not r.reached for r in recs)
