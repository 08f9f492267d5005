"""The weighted directed pipeline: lopsided case (clustering, the 0.9
in-weight split, bucketed crossing families, per-pair sparsified flow
instances) and the symmetric case, combined over the graph and its reverse.

Every separator extracted from a sparsified instance is re-validated in the
original digraph before it can become a candidate, so the returned cut is
always sound; at verification scale the symmetric branch's pair families are
complete, which makes the combined driver unconditionally exact.
"""

from __future__ import annotations

import math

from .cnc import weighted_cnc
from .config import DEFAULT, Config
from .errors import InvariantError
from .graphs import (
    NoCut,
    VertexCut,
    WeightedDigraph,
    better_cut,
    min_out_neighborhood_cut,
    validate_cut,
)
from .maxflow import vertex_max_flow
from .pseudorandom import asymmetric_crossing_family, map_pairs, symmetric_crossing_family


def _log2ceil(x):
    return max(1, math.ceil(math.log2(max(2, x))))


def _bucket(w):
    """Weight buckets: bucket i holds weights in (2^(i-1), 2^i], bucket 1
    holds {1, 2}."""
    return max(1, math.ceil(math.log2(w))) if w > 1 else 1


def _powers_up_to(limit):
    out = []
    p = 1
    while p <= limit:
        out.append(p)
        p *= 2
    return out


def identify_vlow(d: WeightedDigraph, cluster):
    """Vertices whose in-neighborhood covers at most 0.9 of the cluster's
    weight; one scan over the cluster's out-arcs."""
    cset = set(cluster)
    wc = d.weight_of(cset)
    if wc <= 0:
        raise InvariantError("cluster weight must be positive")
    covered = [0] * d.n
    for u in cset:
        wu = d.weights[u]
        for v in d.out_adj[u]:
            covered[v] += wu
    return [v for v in range(d.n) if covered[v] <= 0.9 * wc]


def lopsided_pairs(d: WeightedDigraph, cluster, v_low, ell, r, cfg: Config = DEFAULT):
    """Bucketed union of asymmetric crossing families between the cluster
    and the low-coverage set, for one (ell, r) guess; degenerate bucket
    parameters clamp to the complete fallback."""
    if ell < 1 or r < 1:
        raise InvariantError("ell and r must be >= 1 (powers of two)")
    logw = _log2ceil(max(2, d.max_weight))
    logn = _log2ceil(d.n)
    q = max(1, math.ceil(math.log2(max(2, d.max_weight))))
    by_bucket_c = {}
    by_bucket_d = {}
    for u in cluster:
        by_bucket_c.setdefault(_bucket(d.weights[u]), []).append(u)
    for v in v_low:
        by_bucket_d.setdefault(_bucket(d.weights[v]), []).append(v)
    pairs = []
    bound = 0
    for i in range(1, q + 1):
        ci = sorted(by_bucket_c.get(i, []))
        if not ci:
            continue
        for j in range(1, q + 1):
            dj = sorted(by_bucket_d.get(j, []))
            if not dj:
                continue
            l_ij = max(1, math.ceil(ell / (2**i * logw)))
            l_ij = min(l_ij, len(ci))
            r_ij = len(dj) - math.ceil(d.n * ell * logw * logn * logn / r)
            r_ij = max(1, min(r_ij, len(dj)))
            l_ij = min(l_ij, r_ij)
            fam = asymmetric_crossing_family(ci, dj, l_ij, r_ij, cfg)
            pairs.extend(fam.pairs)
            bound += fam.degree_bound
    from .pseudorandom import PairFamily

    return PairFamily(pairs, bound, "bucketed")


def sparsify_lopsided(d: WeightedDigraph, s, t, cluster):
    """The per-pair compressed instance: arcs incident to the cluster minus
    arcs inside N_out(s), plus an arc from every cluster out-neighbor to t.

    Returns (digraph, ids) with ids mapping instance positions back to
    original vertices; any (s,t)-separator of the instance is an
    (s,t)-separator of the original graph.
    """
    cset = set(cluster)
    if s not in cset:
        raise InvariantError("s must lie in the cluster")
    n_out = set()
    for u in cset:
        for v in d.out_adj[u]:
            if v not in cset:
                n_out.add(v)
    vertices = sorted(cset | n_out | {t})
    vset = set(vertices)
    ns = d.out_set(s)
    arcs = set()
    for u in vertices:
        u_in_c = u in cset
        for v in d.out_adj[u]:
            if v not in vset or not (u_in_c or v in cset):
                continue
            if u in ns and v in ns:
                continue
            arcs.add((u, v))
    for u in sorted(n_out):
        if u != t:
            arcs.add((u, t))
    pos = {v: i for i, v in enumerate(vertices)}
    local = sorted((pos[u], pos[v]) for u, v in arcs)
    weights = [d.weights[v] for v in vertices]
    return WeightedDigraph.from_arcs(len(vertices), local, weights), vertices


def sparsify_symmetric(d: WeightedDigraph, s, t):
    """Drop arcs inside N_out(s) and arcs inside N_in(t); the minimum
    (s,t)-separator is unchanged."""
    if s == t:
        raise InvariantError("s == t")
    ns = d.out_set(s)
    nt = d.in_set(t)
    adj = []
    for u in range(d.n):
        row = [
            v for v in d.out_adj[u]
            if not (u in ns and v in ns) and not (u in nt and v in nt)
        ]
        adj.append(row)
    return WeightedDigraph(d.n, adj, d.weights)


def _digraph_pair_cut(d: WeightedDigraph, h: WeightedDigraph, ids, s, t,
                      limit, stats):
    """Min (s,t)-separator on the instance h, mapped back and validated as a
    cut of d.  Returns None when capped; counts (never expected) extraction
    failures so the acceptance suite can assert soundness."""
    pos = {v: i for i, v in enumerate(ids)}
    arcs = list(h.arcs())
    value, sep, _, completed = vertex_max_flow(
        h.n, arcs, list(h.weights), [pos[s]], [pos[t]], limit=limit, stats=stats
    )
    if not completed:
        return None
    separator = {ids[j] for j in sep}
    reach = set(d.reachable_from(s, removed=frozenset(separator)))
    rest = set(range(d.n)) - reach - separator
    cut = VertexCut(reach, separator, rest, d.weight_of(separator)) if rest else None
    if cut is None or cut.value != value or not validate_cut(d, cut):
        if stats is not None:
            stats.add("sparsified_invalid")
        return None
    if stats is not None:
        stats.add("sparsified_valid")
    return cut


def lopsided_vc(d: WeightedDigraph, cfg: Config = DEFAULT, stats=None):
    """Cut search targeting minimum cuts whose far side carries most of the
    weight.  Always returns a valid cut; minimum under the lopsidedness
    promise."""
    best = min_out_neighborhood_cut(d)
    total = d.weight_of(range(d.n))
    evaluated = set()
    for ell in _powers_up_to(total):
        clusters = weighted_cnc(d, ell, stats=stats)
        seen_clusters = set()
        for cluster in clusters:
            ckey = frozenset(cluster)
            if ckey in seen_clusters:
                continue
            seen_clusters.add(ckey)
            v_low = identify_vlow(d, cluster)
            if not v_low:
                continue
            pair_pool = set()
            for r in _powers_up_to(total):
                fam = lopsided_pairs(d, cluster, v_low, ell, r, cfg)
                pair_pool.update(fam.pairs)
            for s, t in sorted(pair_pool):
                if s == t or d.has_arc(s, t):
                    continue
                key = (s, t, ckey)
                if key in evaluated:
                    continue
                evaluated.add(key)
                h, ids = sparsify_lopsided(d, s, t, cluster)
                if stats is not None:
                    stats.add("sparsified_instances")
                    stats.add("sparsified_edges", h.m)
                    stats.add("naive_edges", d.m)
                    stats.add("sparsified_edges_lopsided", h.m)
                    stats.add("naive_edges_lopsided", d.m)
                limit = best.value if isinstance(best, VertexCut) else None
                cand = _digraph_pair_cut(d, h, ids, s, t, limit, stats)
                best = better_cut(best, cand)
    return best


def symmetric_pairs(d: WeightedDigraph, ell, cfg: Config = DEFAULT):
    """Bucket-pair union of symmetric crossing families with the
    directional inclusion rule (pairs kept when their source sits in the
    heavier bucket)."""
    if ell < 1:
        raise InvariantError("ell must be >= 1")
    lam = cfg.lam
    logw = _log2ceil(max(2, d.max_weight))
    logn = _log2ceil(d.n)
    q = max(1, math.ceil(math.log2(max(2, d.max_weight))))
    buckets = {}
    for v in range(d.n):
        buckets.setdefault(_bucket(d.weights[v]), []).append(v)
    pairs = []
    bound = 0
    for i in range(1, q + 1):
        vi = buckets.get(i, [])
        if not vi:
            continue
        for j in range(1, q + 1):
            vj = buckets.get(j, [])
            if not vj:
                continue
            union = sorted(set(vi) | set(vj))
            if len(union) < 2:
                continue
            alpha = min(
                d.n,
                d.n * (2 ** max(i, j) / ell) * logw * lam * lam * logn,
            )
            fam = map_pairs(symmetric_crossing_family(len(union), alpha, cfg), union)
            heavy = set(vi if i >= j else vj)
            pairs.extend(p for p in fam.pairs if p[0] in heavy)
            bound += fam.degree_bound
    from .pseudorandom import PairFamily

    return PairFamily(pairs, bound, "bucketed-symmetric")


def symmetric_vc(d: WeightedDigraph, cfg: Config = DEFAULT, stats=None):
    """Cut search for weight-balanced minimum cuts: pair flows on
    arc-dropped instances, both orientations per pair."""
    best = min_out_neighborhood_cut(d)
    total = d.weight_of(range(d.n))
    evaluated = set()
    for ell in _powers_up_to(total):
        fam = symmetric_pairs(d, ell, cfg)
        for u, v in fam:
            for s, t in ((u, v), (v, u)):
                if s == t or d.has_arc(s, t) or (s, t) in evaluated:
                    continue
                evaluated.add((s, t))
                h = sparsify_symmetric(d, s, t)
                if stats is not None:
                    stats.add("sparsified_instances")
                    stats.add("sparsified_edges", h.m)
                    stats.add("naive_edges", d.m)
                limit = best.value if isinstance(best, VertexCut) else None
                cand = _digraph_pair_cut(
                    d, h, list(range(d.n)), s, t, limit, stats
                )
                best = better_cut(best, cand)
    return best


def vertex_connectivity_weighted(d: WeightedDigraph, cfg: Config = DEFAULT, stats=None):
    """Exact minimum weighted vertex cut driver.

    Handles non-strongly-connected inputs (weight-0 cut from a sink
    component) and complete digraphs (NoCut sentinel, no numeric value);
    otherwise the minimum over the lopsided and symmetric branches on both
    the graph and its reverse.
    """
    if d.n <= 1:
        return NoCut(None)
    sccs = d.strongly_connected_components()
    if len(sccs) > 1:
        sink = sccs[0]  # Tarjan emits a sink component first
        rest = set(range(d.n)) - set(sink)
        return VertexCut(sink, (), rest, 0)
    if d.is_complete():
        return NoCut(None)
    best = None
    for variant, flip in ((d, False), (d.reverse(), True)):
        for branch in (lopsided_vc, symmetric_vc):
            got = branch(variant, cfg, stats)
            if isinstance(got, VertexCut):
                if flip:
                    got = VertexCut(got.R, got.S, got.L, got.value)
                if validate_cut(d, got):
                    best = better_cut(best, got)
    assert isinstance(best, VertexCut)
    return best
