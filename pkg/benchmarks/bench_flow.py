"""Benchmark the compiled flow kernel against the pure-Python twin.

The solvers share one contract (see vcut._pyflow), so the comparison runs
identical split networks through both and checks that values and canonical
cuts agree while timing them.  Run:

    python3 benchmarks/bench_flow.py [--rounds 3]
"""

import argparse
import itertools
import sys
import time

from vcut import _pyflow
from vcut.oracle import random_digraph, random_graph

try:
    from vcut import _core
except ImportError:
    _core = None


def split_network(n, arcs, caps, s, t):
    inf = n * max(caps) + 1
    tails = [2 * v for v in range(n)]
    heads = [2 * v + 1 for v in range(n)]
    acaps = list(caps)
    for u, v in arcs:
        tails.append(2 * u + 1)
        heads.append(2 * v)
        acaps.append(inf)
    tails += [2 * n, 2 * t]
    heads += [2 * s + 1, 2 * n + 1]
    acaps += [inf, inf]
    return 2 * n + 2, tails, heads, acaps, 2 * n, 2 * n + 1


def workload():
    """A batch of (network, description) covering the pipelines' shapes."""
    out = []
    for seed in range(6):
        g = random_graph(40, 0.25, seed)
        arcs = [(u, v) for u in range(g.n) for v in g.adj[u]]
        pairs = [
            (s, t)
            for s, t in itertools.combinations(range(g.n), 2)
            if not g.has_edge(s, t)
        ][:40]
        for s, t in pairs:
            out.append(split_network(g.n, arcs, [1] * g.n, s, t))
    for seed in range(4):
        d = random_digraph(20, 0.35, 8, seed)
        arcs = list(d.arcs())
        pairs = [
            (s, t)
            for s, t in itertools.permutations(range(d.n), 2)
            if not d.has_arc(s, t)
        ][:40]
        for s, t in pairs:
            out.append(split_network(d.n, arcs, list(d.weights), s, t))
    return out


def run(solver, nets):
    t0 = time.perf_counter()
    results = [solver(*net, None) for net in nets]
    return time.perf_counter() - t0, results


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--rounds", type=int, default=3)
    args = ap.parse_args()

    nets = workload()
    print(f"{len(nets)} flow instances per round, {args.rounds} rounds")

    py_time, py_results = min(
        (run(_pyflow.solve, nets) for _ in range(args.rounds)), key=lambda x: x[0]
    )
    print(f"python backend : {py_time * 1000:8.1f} ms")

    if _core is None:
        print("cython backend : not built (pip install -e . rebuilds it)")
        return 0

    c_time, c_results = min(
        (run(_core.solve, nets) for _ in range(args.rounds)), key=lambda x: x[0]
    )
    print(f"cython backend : {c_time * 1000:8.1f} ms")
    print(f"speedup        : {py_time / c_time:8.1f}x")

    mismatches = sum(
        1 for a, b in zip(py_results, c_results) if a[0] != b[0] or a[1] != b[1]
    )
    print(f"agreement      : {len(nets) - mismatches}/{len(nets)} identical (value + canonical cut)")
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
