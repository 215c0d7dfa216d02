from __future__ import annotations

import json
import os
from pathlib import Path

import pytest

from semirandom.cli import main

GOLDEN = Path(__file__).parent / "golden"
UPDATE = os.environ.get("UPDATE_GOLDEN") == "1"

CASES = {
    "simulate_mindeg": ["simulate", "--game", "mindeg-s0", "--n", "30", "--trials", "8", "--seed", "7"],
    "simulate_pretty": ["simulate", "--game", "orientation", "--k", "2", "--n", "20", "--trials", "5",
                        "--ecdf", "40,60", "--pretty"],
    "urn1": ["urn", "--model", "1", "--n", "50", "--trials", "6", "--seed", "0x10"],
    "urn2_dp": ["urn", "--model", "2", "--n", "6", "--dp"],
    "exact_harmonic": ["exact", "--what", "harmonic", "--m", "10", "--l", "3"],
    "exact_pr": ["exact", "--what", "pr", "--n", "8", "--r", "3", "--pretty"],
    "exact_star": ["exact", "--what", "star", "--n", "5"],
    "exact_path": ["exact", "--what", "path-an", "--n", "6"],
    "exact_urn1_mean": ["exact", "--what", "urn1-mean", "--n", "10", "--j", "4"],
    "exact_urn2_bounds": ["exact", "--what", "urn2-bounds", "--n", "100", "--j", "30", "--prob", "1/2"],
    "oracle_star": ["oracle", "--target", "star-labeled", "--n", "4", "--k", "3", "--strategy", "star-labeled"],
    "oracle_pretty": ["oracle", "--target", "pm", "--n", "4", "--k", "2", "--pretty"],
    "graph_gt": ["graph", "gt", "--n", "12", "--t", "3", "--check"],
}


def _run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def _golden(name: str, text: str) -> None:
    path = GOLDEN / f"{name}.txt"
    if UPDATE or not path.exists():
        GOLDEN.mkdir(exist_ok=True)
        path.write_text(text)
    assert text == path.read_text()


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden_output(name, capsys):
    code, out, err = _run(CASES[name], capsys)
    assert code == 0
    _golden(name, out + (f"--- stderr\n{err}" if err else ""))


@pytest.mark.parametrize("sub", [["simulate"], ["urn"], ["exact"], ["oracle"], ["graph"], ["graph", "gt"],
                                 ["graph", "orient"], ["graph", "lgd"], ["graph", "mincut"], []])
def test_help_text(sub, capsys, monkeypatch):
    monkeypatch.setenv("COLUMNS", "80")
    code, out, _ = _run(sub + ["--help"], capsys)
    assert code == 0
    _golden("help_" + ("_".join(sub) or "main"), out)


def test_graph_file_tools(tmp_path, capsys):
    g = tmp_path / "g.txt"
    assert _run(["graph", "gt", "--n", "9", "--t", "3", "--out", str(g)], capsys)[0] == 0
    for name, argv in (("graph_orient", ["graph", "orient", "--in", str(g)]),
                       ("graph_balanced", ["graph", "orient", "--in", str(g), "--balanced"]),
                       ("graph_lgd", ["graph", "lgd", "--in", str(g)]),
                       ("graph_mincut", ["graph", "mincut", "--in", str(g)])):
        code, out, _ = _run(argv, capsys)
        assert code == 0
        _golden(name, out)


def test_simulate_files(tmp_path, capsys):
    csv_path, js = tmp_path / "r.csv", tmp_path / "s.json"
    argv = ["simulate", "--game", "pm-forest", "--n", "16", "--trials", "4", "--out", str(csv_path),
            "--summary", str(js), "--ecdf", "16"]
    assert _run(argv, capsys)[0] == 0
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "trial,seed,tau,reached" and len(lines) == 5
    doc = json.loads(js.read_text())
    assert doc["schema_version"] == 1 and doc["trials"] == 4
    # same seed, two workers: byte-identical output
    csv2 = tmp_path / "r2.csv"
    assert _run(argv[:-6] + ["--out", str(csv2), "--workers", "2"], capsys)[0] == 0
    assert csv2.read_text() == csv_path.read_text()


@pytest.mark.parametrize("argv,code", [
    ([], 2),
    (["simulate", "--game", "nope", "--n", "5"], 2),
    (["simulate", "--game", "mindeg-s0", "--n", "5", "--trials", "0"], 2),
    (["exact", "--what", "pr", "--n", "5", "--r", "1"], 2),
    (["exact", "--what", "harmonic"], 2),
    (["graph", "lgd", "--in", "/nonexistent/file"], 2),
    (["oracle", "--target", "mindeg1", "--n", "9", "--k", "2"], 3),
    (["oracle", "--target", "mindeg1", "--n", "6", "--k", "6", "--budget", "10"], 3),
    (["urn", "--model", "1", "--n", "4000", "--dp"], 0),
    (["simulate", "--game", "bernoulli", "--n", "1", "--trials", "20000000"], 3),
])
def test_exit_codes(argv, code, capsys):
    assert _run(argv, capsys)[0] == code
