"""The full unweighted undirected pipeline: unbalanced case over the kernel
index, terminal-expander decomposition, shaving, terminal reduction, and the
top-level driver.

Every branch only ever contributes cuts that re-validate in the original
graph, and the driver returns the minimum over all of them, so exactness at
verification scale never depends on which case analysis actually applied.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .cnc import cnc
from .config import DEFAULT, Config
from .errors import BudgetExceeded, InvariantError, UndefinedExpansion
from .graphs import (
    Graph,
    NoCut,
    NoSeparator,
    VertexCut,
    better_cut,
    min_degree_cut,
    ni_sparsify,
    validate_cut,
)
from .isocut import balanced_terminal_vc, subgraph_balanced_terminal_vc
from .kernel import build_kernel_index, query_kappa_upper
from .maxflow import min_st_cut
from .pseudorandom import symmetric_crossing_family


def _log2ceil(n):
    return max(1, math.ceil(math.log2(max(2, n))))


class ExpanderDecomposition:
    __slots__ = ("x", "pieces", "phi")

    def __init__(self, x, pieces, phi):
        self.x = tuple(sorted(x))
        self.pieces = tuple(sorted((tuple(sorted(p)) for p in pieces), key=lambda p: p[0]))
        self.phi = phi

    def __repr__(self):
        return (
            f"ExpanderDecomposition(|X|={len(self.x)}, "
            f"pieces={[len(p) for p in self.pieces]}, phi={self.phi})"
        )


def terminal_expansion(g: Graph, terminals, cut: VertexCut) -> Fraction:
    """h_T of a cut: |S| over the smaller terminal mass of the two closed
    sides.  Raises UndefinedExpansion when that mass is zero."""
    tset = set(terminals)
    ls = len(tset & (set(cut.L) | set(cut.S)))
    rs = len(tset & (set(cut.R) | set(cut.S)))
    denom = min(ls, rs)
    if denom == 0:
        raise UndefinedExpansion("no terminal mass on one side")
    return Fraction(len(cut.S), denom)


def _sparsest_canonical_cut(g: Graph, terminals, probe_budget, stats):
    """Best (lowest h_T) canonical cut (A, N(A), rest) of g.

    Exhaustive over all vertex subsets for small graphs, terminal-pair flow
    probing otherwise.  Returns (h, cut) or None when nothing with positive
    terminal mass on both sides exists.
    """
    tset = set(terminals)
    n = g.n
    best = None

    def consider(left, sep, rest):
        nonlocal best
        if not left or not rest:
            return
        ls = len(tset & (left | sep))
        rs = len(tset & (rest | sep))
        denom = min(ls, rs)
        if denom == 0:
            return
        h = Fraction(len(sep), denom)
        key = (h, tuple(sorted(sep)), tuple(sorted(left)))
        if best is None or key < best[0]:
            cut = VertexCut(left, sep, rest, len(sep))
            best = (key, cut)

    if n <= 16:
        adj_mask = [0] * n
        for v in range(n):
            for w in g.adj[v]:
                adj_mask[v] |= 1 << w
        tmask = 0
        for v in tset:
            tmask |= 1 << v
        full = (1 << n) - 1
        nbr_or = [0] * (1 << n)
        # Track the sparsest cut with integer cross-multiplication;
        # ties break on (separator mask, subset mask) for determinism.
        b_num = b_den = 0
        best_bits = None
        for bits in range(1, full):
            low = bits & -bits
            sep_mask = nbr_or[bits ^ low] | adj_mask[low.bit_length() - 1]
            nbr_or[bits] = sep_mask
            sep = sep_mask & ~bits
            rest = full & ~bits & ~sep
            if not rest:
                continue
            lt = ((bits | sep) & tmask).bit_count()
            rt = ((rest | sep) & tmask).bit_count()
            denom = lt if lt < rt else rt
            if denom == 0:
                continue
            num = sep.bit_count()
            if best_bits is None or num * b_den < b_num * denom or (
                num * b_den == b_num * denom
                and (sep, bits) < (best_bits[1], best_bits[0])
            ):
                b_num, b_den = num, denom
                best_bits = (bits, sep, rest)
        if best_bits is not None:
            bits, sep, rest = best_bits
            consider(
                {v for v in range(n) if bits >> v & 1},
                {v for v in range(n) if sep >> v & 1},
                {v for v in range(n) if rest >> v & 1},
            )
    else:
        comps = g.components()
        if len(comps) > 1:
            universe = set(range(n))
            for comp in comps:
                left = set(comp)
                consider(left, set(), universe - left)
        terms = sorted(tset)
        probes = 0
        for i, u in enumerate(terms):
            for v in terms[i + 1:]:
                if probes >= probe_budget:
                    break
                if g.has_edge(u, v):
                    continue
                probes += 1
                res = min_st_cut(g, u, v, stats=stats)
                if res is NoSeparator:
                    continue
                _, cut = res
                consider(set(cut.L), set(cut.S), set(cut.R))
            if probes >= probe_budget:
                break
    if best is None:
        return None
    return best[0][0], best[1]


def expander_decomposition(g: Graph, terminals, phi, cfg: Config = DEFAULT,
                           stats=None, _cache=None):
    """Partition V into X plus mutually non-adjacent pieces on which no
    terminal-sparse cut below phi was found.

    Raises BudgetExceeded (carrying the partial result) when the separator
    mass exceeds max(1, budget_frac * |T|); callers retry with smaller phi.
    """
    terms = sorted(set(terminals))
    if not terms:
        raise InvariantError("empty terminal set")
    budget = max(1, int(cfg.expander_budget_frac * len(terms)))
    cache = _cache if _cache is not None else {}
    x_set = set()
    pieces = []
    stack = [tuple(range(g.n))]
    while stack:
        piece = stack.pop()
        if not piece:
            continue
        if len(piece) == 1:
            pieces.append(piece)
            continue
        key = piece
        if key not in cache:
            sub, ids = g.induced(piece)
            local_terms = [j for j, v in enumerate(ids) if v in set(terms)]
            got = _sparsest_canonical_cut(
                sub, local_terms, probe_budget=min(48, 4 * len(piece)), stats=stats
            )
            if got is None:
                cache[key] = None
            else:
                h, cut = got
                cache[key] = (
                    h,
                    tuple(ids[j] for j in cut.L),
                    tuple(ids[j] for j in cut.S),
                    tuple(ids[j] for j in cut.R),
                )
        entry = cache[key]
        if entry is None or entry[0] >= phi:
            pieces.append(piece)
            continue
        _, left, sep, rest = entry
        x_set.update(sep)
        stack.append(rest)
        stack.append(left)
    result = ExpanderDecomposition(x_set, pieces, phi)
    if len(x_set) > budget:
        raise BudgetExceeded(f"|X|={len(x_set)} over budget {budget}", partial=result)
    return result


def _decompose_with_retry(g, terms, cfg, stats, cache):
    phi = cfg.expander_phi
    while True:
        try:
            return expander_decomposition(g, terms, phi, cfg, stats, _cache=cache)
        except BudgetExceeded as exc:
            if stats is not None:
                stats.add("expander_budget_retries")
            phi /= 2
            if phi < cfg.expander_phi_floor:
                return exc.partial


def shaving(h: Graph, candidates, a):
    """Subset R of `candidates` whose neighborhoods pairwise differ by at
    most 5a, covering every candidate whose neighborhood nearly fills a
    common superset B with slack a."""
    cand = sorted(set(candidates))
    if not cand:
        return set()
    count = [0] * h.n
    for u in cand:
        for v in h.adj[u]:
            count[v] += 1
    core = {v for v in range(h.n) if count[v] >= 0.1 * len(cand)}
    out = set()
    for u in cand:
        nb = h.neighbor_set(u)
        sym = len(nb) + len(core) - 2 * len(nb & core)
        if sym <= 2.2 * a:
            out.add(u)
    return out


def terminal_reduction(g: Graph, terminals, k, cfg: Config = DEFAULT, stats=None):
    """One reduction round: returns (best cut or NoCut, T') with
    |T'| <= 0.9 |T|.

    Follows the decomposition / contraction / shaving / clustering /
    pruning sequence; every candidate cut comes from the balanced-terminal
    subroutine and validates in g.
    """
    terms = sorted(set(terminals))
    if not terms:
        raise InvariantError("empty terminal set")
    if k < 1:
        raise InvariantError("k must be >= 1")
    n = g.n
    logn = _log2ceil(n)
    cache = {}
    decomp = _decompose_with_retry(g, terms, cfg, stats, cache)
    x_list = list(decomp.x)
    x_set = set(x_list)
    term_set = set(terms)

    best = None

    def offer(candidate):
        nonlocal best
        if isinstance(candidate, VertexCut) and validate_cut(g, candidate):
            best = better_cut(best, candidate)

    t_bar_quota = max(1, len(terms) // cfg.tr_tbar_div)
    t_bar = [t for t in terms if t not in x_set][:t_bar_quota]

    small_pieces = []
    big_pieces = []
    for piece in decomp.pieces:
        inside = len(term_set.intersection(piece))
        if 0 < inside < 5:
            small_pieces.append(piece)
        elif inside >= 5:
            big_pieces.append(piece)

    t_big = []
    for piece in big_pieces:
        local = sorted(term_set.intersection(piece))
        t_big.extend(local[: math.ceil(2 * len(local) / 3)])

    # Contracted bipartite graph between X and the small pieces.
    nx = len(x_list)
    x_pos = {x: i for i, x in enumerate(x_list)}
    gp_adj = [set() for _ in range(nx + len(small_pieces))]
    for idx, piece in enumerate(small_pieces):
        for u in piece:
            for w in g.adj[u]:
                if w in x_set:
                    gp_adj[x_pos[w]].add(nx + idx)
                    gp_adj[nx + idx].add(x_pos[w])
    gprime = Graph(nx + len(small_pieces), [sorted(r) for r in gp_adj])

    low_ids = [nx + i for i in range(len(small_pieces)) if gprime.degree(nx + i) <= 2 * k]
    low_set = set(low_ids)
    hlow_nodes = sorted(set(range(nx)) | low_set)
    hlow, hlow_ids = gprime.induced(hlow_nodes)
    hpos = {v: i for i, v in enumerate(hlow_ids)}

    t_small = []
    max_scale = math.ceil(math.log2(k)) if k >= 2 else 0
    for i_scale in range(1, max_scale + 1):
        a = 2 ** i_scale
        x_low = sorted(
            x for x in x_list
            if hlow.degree(hpos[x_pos[x]]) < cfg.tr_xlow_mult * a
        )
        paths = set()
        for x in x_list:
            r_x = shaving(hlow, hlow.neighbors(hpos[x_pos[x]]), a)
            ordered = sorted(r_x)
            for p, q in zip(ordered, ordered[1:]):
                paths.add((p, q))
        cluster_locals = [hpos[v] for v in hlow_ids if v in low_set]
        remap = {h: j for j, h in enumerate(cluster_locals)}
        hconnected = Graph(
            len(cluster_locals),
            _adj_from_edges(
                len(cluster_locals),
                [(remap[p], remap[q]) for (p, q) in paths if p in remap and q in remap],
            ),
        )

        def a_dist(ui, vi):
            return len(
                hlow.neighbor_set(cluster_locals[ui])
                ^ hlow.neighbor_set(cluster_locals[vi])
            )

        clustering = cnc(hconnected, a_dist, 15 * a, stats=stats)
        prune_gate = cfg.tr_prune_gate_mult * a * logn ** cfg.tr_tsmall_log_exp
        prune_eps = 1 - 1 / logn ** cfg.tr_prune_log_exp
        for partition in clustering.partitions:
            x_prime = set(x_list)
            for cluster in partition:
                quota = len(cluster) // (logn ** cfg.tr_tsmall_log_exp)
                for cj in sorted(cluster)[:quota]:
                    piece = small_pieces[hlow_ids[cluster_locals[cj]] - nx]
                    t_small.extend(sorted(term_set.intersection(piece)))
                if len(cluster) > prune_gate:
                    members = {cluster_locals[cj] for cj in cluster}
                    for x in sorted(x_prime):
                        inside = sum(
                            1 for w in hlow.neighbors(hpos[x_pos[x]]) if w in members
                        )
                        if inside > prune_eps * len(cluster):
                            x_prime.discard(x)
            cand_terms = sorted(x_prime | set(t_bar))
            if cand_terms:
                offer(balanced_terminal_vc(g, cand_terms, k, cfg, stats))
            cand_low = sorted(set(x_low) | set(t_bar))
            if cand_low:
                offer(balanced_terminal_vc(g, cand_low, k, cfg, stats))

    t_prime = sorted(set(x_list) | set(t_big) | set(t_small) | set(t_bar))
    limit = math.floor(0.9 * len(terms))
    if len(t_prime) > limit:
        t_prime = t_prime[:limit]
    if stats is not None:
        s_prime_ok = best is None or not isinstance(best, VertexCut) or validate_cut(g, best)
        stats.event("terminal_reduction", len(terms), len(t_prime), s_prime_ok)
        stats.add("terminal_reduction_rounds")
    return (best if best is not None else NoCut(None)), tuple(t_prime)


def _adj_from_edges(n, edges):
    adj = [set() for _ in range(n)]
    for u, v in edges:
        if u != v:
            adj[u].add(v)
            adj[v].add(u)
    return [sorted(r) for r in adj]


def unbalanced_vc(g: Graph, cfg: Config = DEFAULT, stats=None):
    """Cut search targeting minimum cuts with a small side.

    Per power-of-two scale: crossing-family pairs answered through the
    kernel index (early-stopped by the best cut so far; any improvement is
    realized by one full-graph flow), plus one balanced-terminal call per
    distinct cluster.  Always returns a valid cut; minimum whenever some
    minimum cut has |L| <= lambda * delta with |L| <= |R|.
    """
    if g.is_complete():
        return NoCut(g.n - 1)
    delta = g.min_degree()
    best = min_degree_cut(g)
    logn = _log2ceil(g.n)
    max_scale = max(1, math.ceil(math.log2(max(2, delta * logn))))
    seen_clusters = set()
    for i in range(1, max_scale + 1):
        ell = 2 ** i
        alpha = max(1, Fraction(2 * delta, ell))
        family = symmetric_crossing_family(g.n, alpha, cfg)
        index = build_kernel_index(g, ell, cfg, stats)
        for ci, cluster in enumerate(index.clusters):
            key = frozenset(cluster)
            if key in seen_clusters or len(cluster) < 2:
                continue
            seen_clusters.add(key)
            cand = subgraph_balanced_terminal_vc(g, cluster, delta * logn, cfg, stats)
            if isinstance(cand, VertexCut) and validate_cut(g, cand):
                best = better_cut(best, cand)
        seen_pairs = set()
        for s, t in family:
            if isinstance(best, VertexCut) and best.value <= 1:
                break  # connected graphs cannot do better
            if s == t:
                continue
            key = (s, t) if s < t else (t, s)
            if key in seen_pairs or g.has_edge(*key):
                continue
            seen_pairs.add(key)
            # kappa(s,t) is symmetric but the index answers from s's
            # clusters, so try both orientations before giving up.
            for a, b in (key, key[::-1]):
                cap = best.value if isinstance(best, VertexCut) else g.n
                kappa_hat = query_kappa_upper(index, a, b, cap=cap, stats=stats)
                if kappa_hat < cap:
                    res = min_st_cut(g, a, b, stats=stats)
                    if res is not NoSeparator and res[1] is not None:
                        best = better_cut(best, res[1])
    return best


def vertex_connectivity_unweighted(g: Graph, cfg: Config = DEFAULT, stats=None):
    """Exact minimum vertex cut driver.

    Disconnected inputs yield a value-0 cut, complete inputs the NoCut
    sentinel carrying n-1.  Otherwise: sparsify, run the unbalanced branch,
    then alternate balanced-terminal calls with terminal reduction until the
    terminal set empties, returning the minimum valid cut seen anywhere.
    """
    if g.n <= 1:
        return NoCut(max(0, g.n - 1))
    comps = g.components()
    if len(comps) > 1:
        rest = set(range(g.n)) - set(comps[0])
        return VertexCut(comps[0], (), rest, 0)
    if g.is_complete():
        return NoCut(g.n - 1)

    gs = ni_sparsify(g, g.min_degree())
    k = max(1, gs.min_degree())
    best = min_degree_cut(g)

    def offer(candidate):
        nonlocal best
        if isinstance(candidate, VertexCut) and validate_cut(g, candidate):
            best = better_cut(best, candidate)

    offer(unbalanced_vc(gs, cfg, stats))
    terms = tuple(range(g.n))
    while terms:
        offer(balanced_terminal_vc(gs, terms, k, cfg, stats))
        reduced, terms = terminal_reduction(gs, terms, k, cfg, stats)
        offer(reduced)
    assert isinstance(best, VertexCut)
    return best
