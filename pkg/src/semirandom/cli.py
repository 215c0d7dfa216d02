"""Command-line entry point: ``semirandom <subcommand> ...``.

Exit codes: 0 success, 2 usage error, 3 resource guard tripped.
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import exact, graphs, harness, oracle, strategies, urns

DEFAULT_SEED = 0xC0FFEE
EXIT_OK, EXIT_USAGE, EXIT_GUARD = 0, 2, 3


class UsageError(Exception):
    pass


def _int(text: str) -> int:
    """Integer in any Python base notation (``0xC0FFEE`` is accepted)."""
    try:
        return int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None


def _points(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}") from None


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def _emit(text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, required=True, help="number of vertices / balls")
    p.add_argument("--trials", type=int, default=1, help="number of independent trials (default 1)")
    p.add_argument("--seed", type=_int, default=DEFAULT_SEED,
                   help=f"64-bit master seed (default {DEFAULT_SEED:#x})")
    p.add_argument("--workers", type=int, default=None,
                   help="worker processes (default $SEMIRANDOM_WORKERS or 1)")
    p.add_argument("--out", default=None, help="per-trial CSV path (default stdout)")
    p.add_argument("--summary", default=None, help="JSON summary path")
    p.add_argument("--ecdf", type=_points, default=[], help="comma-separated points for the ECDF")
    p.add_argument("--pretty", action="store_true", help="print a human-readable summary table")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="semirandom",
        description="Simulate and analyse the no-replacement semi-random graph process.")
    sub = ap.add_subparsers(dest="command", metavar="{simulate,urn,exact,oracle,graph}")

    p = sub.add_parser("simulate", help="run Monte Carlo trials of a Builder strategy")
    p.add_argument("--game", required=True, choices=sorted(strategies.STRATEGY_IDS) + ["bernoulli"],
                   help="strategy id")
    p.add_argument("--k", type=int, default=None, help="strategy parameter k")
    p.add_argument("--target", default=None,
                   help="stop predicate, e.g. mindeg:3, edgecon:5, pm, m0, even, path, star[:c], circulant:k")
    p.add_argument("--max-rounds", type=int, default=None, help="round cap (default depends on game)")
    _add_run_flags(p)

    p = sub.add_parser("urn", help="simulate an urn model or print its exact law")
    p.add_argument("--model", type=int, choices=(1, 2), required=True, help="urn model")
    p.add_argument("--dp", action="store_true", help="print the law of T as CSV t,prob instead of simulating")
    _add_run_flags(p)

    p = sub.add_parser("exact", help="exact rational formulas")
    p.add_argument("--what", required=True,
                   choices=("harmonic", "pr", "star", "path-an", "urn1-mean", "urn2-bounds"))
    p.add_argument("--n", type=int, help="size parameter")
    p.add_argument("--m", type=int, help="harmonic: upper index")
    p.add_argument("--l", type=int, default=0, help="harmonic: lower index (default 0)")
    p.add_argument("--r", type=int, help="pr: unfinished pairs budget r")
    p.add_argument("--j", type=int, help="urn round index j")
    p.add_argument("--prob", default="1", help="urn2-bounds: Pr(T > j) as a fraction (default 1)")
    p.add_argument("--float", action="store_true", help="path-an: float mode (large n)")
    p.add_argument("--pretty", action="store_true", help="append decimal values")

    p = sub.add_parser("oracle", help="exact optimal success probability by backward induction")
    p.add_argument("--target", required=True, choices=sorted(oracle.TARGET_IDS), help="target id")
    p.add_argument("--n", type=int, required=True, help="number of vertices (<= 7)")
    p.add_argument("--k", type=int, required=True, help="round budget")
    p.add_argument("--strategy", choices=sorted(strategies.STRATEGY_IDS), default=None,
                   help="also evaluate this strategy exactly")
    p.add_argument("--budget", type=int, default=oracle.DEFAULT_NODE_BUDGET, help="position budget")
    p.add_argument("--pretty", action="store_true", help="print a table instead of CSV")

    p = sub.add_parser("graph", help="graph tools")
    gsub = p.add_subparsers(dest="tool", metavar="{gt,orient,lgd,mincut}")
    q = gsub.add_parser("gt", help="build the (t+1)-regular graph G_t")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--t", type=int, required=True)
    q.add_argument("--check", action="store_true", help="verify regularity, cuts and edge connectivity")
    q.add_argument("--out", default=None, help="write the graph file here")
    q = gsub.add_parser("orient", help="orientation minimising the maximum out-degree")
    q.add_argument("--in", dest="infile", required=True, help="graph file")
    q.add_argument("--balanced", action="store_true", help="Eulerian balanced orientation instead")
    q = gsub.add_parser("lgd", help="maximum subgraph density L(G)")
    q.add_argument("--in", dest="infile", required=True, help="graph file")
    q = gsub.add_parser("mincut", help="edge connectivity")
    q.add_argument("--in", dest="infile", required=True, help="graph file")
    return ap


# --------------------------------------------------------------------------
# Subcommands
# --------------------------------------------------------------------------

def _pretty_summary(s: harness.SummaryStats) -> str:
    rows = [("trials", s.trials), ("reached", s.reached), ("not reached", s.not_reached),
            ("mean", s.mean), ("variance", s.variance), ("min", s.min), ("max", s.max)]
    rows += [(f"q{q}", v) for q, v in s.quantiles.items()]
    rows += [(f"ecdf({p})", v) for p, v in s.ecdf.items()]
    width = max(len(r[0]) for r in rows)
    return "".join(f"{k.ljust(width)}  {'-' if v is None else (f'{v:.6g}' if isinstance(v, float) else v)}\n"
                   for k, v in rows)


def _run(args, game: str) -> int:
    plan = harness.TrialPlan(game, args.n, args.trials, args.seed,
                             k=getattr(args, "k", None), target=getattr(args, "target", None),
                             workers=args.workers, max_rounds=getattr(args, "max_rounds", None),
                             ecdf_points=args.ecdf)
    records, summary = harness.run_plan(plan)
    _emit(harness.records_csv(records), args.out)
    if args.summary:
        _emit(harness.summary_json(summary, plan), args.summary)
    if args.pretty:
        sys.stderr.write(_pretty_summary(summary))
    return EXIT_OK


def cmd_simulate(args) -> int:
    return _run(args, args.game)


def cmd_urn(args) -> int:
    if args.dp:
        pmf = urns.urn_distribution_dp(args.model, args.n)
        if isinstance(pmf, dict):
            lines = [f"{t},{_frac(p)}" for t, p in pmf.items()]
        else:
            lines = [f"{t},{p:.17g}" for t, p in enumerate(pmf) if p > 0]
        _emit("t,prob\n" + "".join(x + "\n" for x in lines), args.out)
        return EXIT_OK
    return _run(args, f"urn{args.model}")


def _need(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"exact --what {args.what} needs {', '.join(missing)}")


def cmd_exact(args) -> int:
    what = args.what
    out: list[tuple[str, object]] = []
    if what == "harmonic":
        _need(args, "m")
        out.append(("H", exact.harmonic_range(args.l, args.m)))
    elif what == "pr":
        _need(args, "n", "r")
        out.append(("p", exact.pm_hit_probability(args.n, args.r)))
    elif what == "star":
        _need(args, "n")
        u, l, g = exact.star_probs(args.n)
        out += [("unlabeled", u), ("labeled", l), ("gap", g)]
    elif what == "path-an":
        _need(args, "n")
        seq = exact.path_a_sequence(args.n, exact=not args.float)
        out += [(f"a_{i}", a) for i, a in enumerate(seq, 1)]
    elif what == "urn1-mean":
        _need(args, "n", "j")
        out.append(("E", urns.urn1_mean_exact(args.n, args.j)))
    else:
        _need(args, "n", "j")
        lo, hi = urns.urn2_mean_bounds(args.n, args.j, Fraction(args.prob))
        out += [("lower", lo), ("upper", hi)]
    single = len(out) == 1
    for name, v in out:
        text = _frac(v) if isinstance(v, Fraction) else repr(v)
        if args.pretty:
            text += f" {float(v):.12g}"
        print(text if single else f"{name} {text}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    target = oracle.make_target(args.target, args.n)
    value = oracle.optimal_success_prob(target, args.n, args.k, args.budget)
    rows = [("optimal", value)]
    if args.strategy:
        make = lambda: strategies.make_strategy(args.strategy, n=args.n)  # noqa: E731
        rows.append((args.strategy, oracle.strategy_success_prob(make, target, args.n, args.k)))
    if args.pretty:
        for name, v in rows:
            print(f"{name:>14}  {_frac(v):>20}  {float(v):.12f}")
    else:
        print("who,target,n,k,value,decimal")
        for name, v in rows:
            print(f"{name},{args.target},{args.n},{args.k},{_frac(v)},{float(v):.12f}")
    return EXIT_OK


def cmd_graph(args) -> int:
    if args.tool is None:
        raise UsageError("graph needs a tool: gt, orient, lgd or mincut")
    if args.tool == "gt":
        gt = graphs.build_gt(args.n, args.t)
        G = gt.graph()
        if args.out:
            graphs.write_graph(G, args.out)
        degs = set(graphs.degree_sequence(G))
        print(f"n={gt.n} t={gt.t} m={gt.m} edges={G.num_edges}")
        print(f"regular={degs.pop()}" if len(degs) == 1 else f"regular=no degrees={sorted(degs)}")
        if args.check:
            ok = graphs.check_cut_claim(gt, enforce_size=False)
            print(f"cut-claim={'pass' if ok else 'fail'}")
            print(f"lambda={graphs.edge_connectivity(G)}")
        return EXIT_OK
    G = graphs.read_graph(args.infile)
    if args.tool == "orient":
        if args.balanced:
            arcs = graphs.balanced_orientation(G)
            d = max(graphs.out_degrees(G.n, arcs)[1:], default=0)
        else:
            d, arcs = graphs.min_outdegree_orientation(G)
        print(f"max-outdegree={d}")
        for u, v in arcs:
            print(f"{u} {v}")
    elif args.tool == "lgd":
        L = graphs.max_subgraph_density(G)
        print(f"L={_frac(L)} ceil={math.ceil(L)}")
    else:
        print(f"lambda={graphs.edge_connectivity(G)}")
    return EXIT_OK


COMMANDS = {"simulate": cmd_simulate, "urn": cmd_urn, "exact": cmd_exact,
            "oracle": cmd_oracle, "graph": cmd_graph}


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    if not argv:
        ap.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    if args.command is None:
        ap.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except (OverflowError, oracle.OracleBudgetExceeded, harness.ResourceGuard) as e:
        print(f"semirandom: resource guard: {e}", file=sys.stderr)
        return EXIT_GUARD
    except (UsageError, ValueError, KeyError, OSError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"semirandom: error: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
