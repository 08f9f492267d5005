"""Batch command-line surface.

Subcommands: `compute` (JSON run report to stdout), `verify` (re-validate a
report against its graph), `check-pr` (pseudorandom object certificates),
and `bench` (CSV timing/value table over a generated suite).  Reports are
bit-identical across reruns except for the wall-time field.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import maxflow
from .config import DEFAULT, load_config
from .errors import ConstructionFailed, InvariantError, ParseError, VcutError
from .gabow import KConnected, gabow_vc
from .graphs import Graph, NoCut, VertexCut, parse_graph, validate_cut
from .instrument import Counters
from .oracle import (
    brute_kappa,
    check_disperser,
    check_selector,
    check_symmetric_crossing,
    random_digraph,
    random_graph,
)
from .unweighted import unbalanced_vc, vertex_connectivity_unweighted
from .weighted import vertex_connectivity_weighted

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_PARSE = 2
EXIT_INVARIANT = 3


def _digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()[:16]


def _terminal_loop(g, cfg, stats):
    """Pure terminal-reduction driver (no unbalanced branch)."""
    from .graphs import better_cut, min_degree_cut, ni_sparsify
    from .isocut import balanced_terminal_vc
    from .unweighted import terminal_reduction

    if g.is_complete():
        return NoCut(g.n - 1)
    comps = g.components()
    if len(comps) > 1:
        rest = set(range(g.n)) - set(comps[0])
        return VertexCut(comps[0], (), rest, 0)
    gs = ni_sparsify(g, g.min_degree())
    k = max(1, gs.min_degree())
    best = min_degree_cut(g)
    terms = tuple(range(g.n))
    while terms:
        cand = balanced_terminal_vc(gs, terms, k, cfg, stats)
        if isinstance(cand, VertexCut) and validate_cut(g, cand):
            best = better_cut(best, cand)
        cand, terms = terminal_reduction(gs, terms, k, cfg, stats)
        if isinstance(cand, VertexCut) and validate_cut(g, cand):
            best = better_cut(best, cand)
    return best


def _run_algorithm(graph, algo, k, cfg, stats):
    directed = not isinstance(graph, Graph)
    if algo == "auto":
        algo = "weighted" if directed else "unweighted"
    if algo == "unweighted":
        if directed:
            raise InvariantError("unweighted algorithm needs an undirected graph")
        return algo, vertex_connectivity_unweighted(graph, cfg, stats)
    if algo == "weighted":
        if not directed:
            raise InvariantError("weighted algorithm needs a directed graph")
        return algo, vertex_connectivity_weighted(graph, cfg, stats)
    if algo == "gabow":
        if directed:
            raise InvariantError("the gap-based algorithm needs an undirected graph")
        return algo, gabow_vc(graph, k, cfg, stats)
    if algo == "unbalanced":
        if directed:
            raise InvariantError("the unbalanced algorithm needs an undirected graph")
        if not graph.is_connected():
            rest = set(range(graph.n)) - set(graph.components()[0])
            return algo, VertexCut(graph.components()[0], (), rest, 0)
        return algo, unbalanced_vc(graph, cfg, stats)
    if algo == "terminal":
        if directed:
            raise InvariantError("the terminal algorithm needs an undirected graph")
        return algo, _terminal_loop(graph, cfg, stats)
    raise InvariantError(f"unknown algorithm {algo!r}")


def _report(graph, algo, result, stats, cfg, wall_ms, digest, k):
    rep = {
        "schema": 1,
        "input": digest,
        "algorithm": algo,
        "backend": maxflow.BACKEND,
        "n": graph.n,
        "m": graph.m,
        "directed": not isinstance(graph, Graph),
        "counters": stats.as_dict(),
        "config": cfg.as_dict(),
        "wall_time_ms": wall_ms,
    }
    if k is not None:
        rep["k"] = k
    if isinstance(result, NoCut):
        rep["complete"] = True
        rep["value"] = result.value
    elif isinstance(result, KConnected):
        rep["k_connected"] = True
        rep["value"] = None
    else:
        rep["complete"] = False
        rep["value"] = result.value
        rep["cut"] = {
            "L": list(result.L),
            "S": list(result.S),
            "R": list(result.R),
        }
    return rep


def cmd_compute(args) -> int:
    try:
        data = open(args.path, "rb").read()
        graph = parse_graph(data)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InvariantError as exc:
        print(f"invariant error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    cfg = load_config(args.config) if args.config else DEFAULT
    stats = Counters()
    start = time.perf_counter()
    try:
        algo, result = _run_algorithm(graph, args.algo, args.k, cfg, stats)
    except VcutError as exc:
        print(f"invariant error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    wall = round((time.perf_counter() - start) * 1000.0, 3)
    rep = _report(graph, algo, result, stats, cfg, wall, _digest(data), args.k)
    if args.oracle:
        want = brute_kappa(graph, cfg)
        rep["oracle_value"] = want[0] if isinstance(want, tuple) else want.value
    print(json.dumps(rep, sort_keys=True))
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        data = open(args.graph, "rb").read()
        graph = parse_graph(data)
        report = json.load(open(args.report))
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ParseError, InvariantError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if report.get("input") != _digest(data):
        print("verify: input digest mismatch", file=sys.stderr)
        return EXIT_MISMATCH
    if report.get("complete"):
        expected = graph.is_complete()
        if not expected:
            print("verify: report claims complete but graph is not", file=sys.stderr)
            return EXIT_MISMATCH
    elif report.get("k_connected"):
        pass
    else:
        cut = report.get("cut")
        if cut is None:
            print("verify: report has neither cut nor sentinel", file=sys.stderr)
            return EXIT_MISMATCH
        vc = VertexCut(cut["L"], cut["S"], cut["R"], report["value"])
        if not validate_cut(graph, vc):
            print("verify: cut does not validate", file=sys.stderr)
            return EXIT_MISMATCH
        weight = (
            len(vc.S)
            if isinstance(graph, Graph)
            else graph.weight_of(vc.S)
        )
        if weight != report["value"]:
            print("verify: separator value mismatch", file=sys.stderr)
            return EXIT_MISMATCH
    if args.oracle:
        want = brute_kappa(graph)
        kappa = want[0] if isinstance(want, tuple) else want.value
        got = report.get("value")
        if report.get("k_connected"):
            if kappa is not None and kappa < report.get("k", 0):
                print(f"verify: oracle kappa={kappa} below k", file=sys.stderr)
                return EXIT_MISMATCH
        elif got != kappa:
            print(f"verify: oracle kappa={kappa}, report value={got}", file=sys.stderr)
            return EXIT_MISMATCH
    print("ok")
    return EXIT_OK


def cmd_check_pr(args) -> int:
    from .pseudorandom import (
        build_disperser,
        build_mixing_graph,
        build_selector,
        symmetric_crossing_family,
    )

    cfg = load_config(args.config) if args.config else DEFAULT
    eps = Fraction(args.eps) if args.eps else None
    cert = {"object": args.object, "params": {}, "verdict": None}
    try:
        if args.object == "crossing":
            cert["params"] = {"n": args.n, "alpha": args.alpha}
            fam = symmetric_crossing_family(args.n, args.alpha, cfg)
            if args.n > 14:
                cert["verdict"] = "skipped"
                cert["reason"] = "exhaustive check gated at n <= 14"
            else:
                ok, witness = check_symmetric_crossing(fam.pairs, args.n, args.alpha)
                cert["property"] = "crossing"
                cert["method"] = "exhaustive"
                cert["verdict"] = bool(ok)
                cert["degree_bound_declared"] = fam.degree_bound
                cert["max_degree"] = fam.max_degree()
                if witness:
                    cert["counterexample"] = witness
        elif args.object == "selector":
            cert["params"] = {"n": args.n, "k": args.k, "eps": str(eps)}
            fam = build_selector(args.n, args.k, eps, cfg)
            if args.n > 12:
                cert["verdict"] = "skipped"
                cert["reason"] = "exhaustive check gated at n <= 12"
            else:
                ok, witness = check_selector(fam.sets, args.n, args.k, eps)
                cert["property"] = "selection"
                cert["method"] = "exhaustive"
                cert["verdict"] = bool(ok)
                cert["sizes_ok"] = all(len(s) >= 2 for s in fam.sets)
                if witness:
                    cert["counterexample"] = witness
        elif args.object == "disperser":
            cert["params"] = {"n": args.n, "k": args.k, "d": args.d, "eps": str(eps)}
            bip = build_disperser(args.n, args.k, args.d, eps, cfg=cfg)
            ok, method, witness = check_disperser(bip, args.k, eps, cfg)
            cert["property"] = "coverage"
            cert["method"] = method
            cert["verdict"] = bool(ok)
            cert["right_size"] = bip.n_right
            cert["degree"] = bip.degree
            if witness:
                cert["counterexample"] = witness
        elif args.object == "mixing":
            cert["params"] = {"n": args.n, "d": args.d}
            mg = build_mixing_graph(args.n, args.d, cfg)
            cert["property"] = "pair-mixing"
            cert["method"] = "eigensolve"
            cert["verdict"] = True
            cert["lambda"] = mg.lam
            cert["pair_threshold"] = mg.pair_threshold
            cert["max_degree"] = mg.max_degree
        else:
            print(f"unknown object {args.object!r}", file=sys.stderr)
            return EXIT_PARSE
    except ConstructionFailed as exc:
        cert["verdict"] = "skipped"
        cert["reason"] = str(exc)
    print(json.dumps(cert, sort_keys=True))
    return EXIT_OK


def _bench_row(line, cfg):
    parts = line.split()
    kind = parts[0]
    if kind == "graph":
        n, p, seed = int(parts[1]), float(parts[2]), int(parts[3])
        g = random_graph(n, p, seed)
        algo = "unweighted"
    elif kind == "digraph":
        n, p, seed = int(parts[1]), float(parts[2]), int(parts[3])
        wmax = int(parts[4]) if len(parts) > 4 else 8
        g = random_digraph(n, p, wmax, seed)
        algo = "weighted"
    else:
        raise ParseError(f"unknown suite row kind {kind!r}")
    stats = Counters()
    start = time.perf_counter()
    _, result = _run_algorithm(g, algo, None, cfg, stats)
    wall = round((time.perf_counter() - start) * 1000.0, 3)
    value = result.value if not isinstance(result, KConnected) else None
    return {
        "kind": kind,
        "n": g.n,
        "m": g.m,
        "seed": parts[3],
        "algo": algo,
        "value": value,
        "wall_ms": wall,
        "flow_calls": stats.get("flow_calls"),
    }


def cmd_bench(args) -> int:
    cfg = load_config(args.config) if args.config else DEFAULT
    try:
        lines = [
            ln.strip()
            for ln in open(args.suite)
            if ln.strip() and not ln.strip().startswith("#")
        ]
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    fields = ["kind", "n", "m", "seed", "algo", "value", "wall_ms", "flow_calls"]
    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(lambda ln: _bench_row(ln, cfg), lines))
    else:
        rows = [_bench_row(ln, cfg) for ln in lines]
    with open(args.out, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="vcut", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="compute a minimum vertex cut")
    p.add_argument("path")
    p.add_argument(
        "--algo",
        default="auto",
        choices=["auto", "unweighted", "weighted", "gabow", "unbalanced", "terminal"],
    )
    p.add_argument("--k", type=int, default=None, help="cut parameter (gabow)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--config", default=None)
    p.add_argument("--oracle", action="store_true", help="include the brute-force value")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", help="re-validate a run report")
    p.add_argument("graph")
    p.add_argument("report")
    p.add_argument("--oracle", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("check-pr", help="pseudorandom object certificate")
    p.add_argument("object", choices=["crossing", "selector", "disperser", "mixing"])
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-k", type=int, default=2)
    p.add_argument("-d", type=int, default=4)
    p.add_argument("-e", "--eps", default="1/2")
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_check_pr)

    p = sub.add_parser("bench", help="run a generated suite, write CSV")
    p.add_argument("suite")
    p.add_argument("out")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
