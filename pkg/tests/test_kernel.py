import itertools
import math

import pytest

from conftest import complete
from vcut.config import DEFAULT
from vcut.errors import EmptyKernel, InvariantError
from vcut.graphs import Graph, NoSeparator
from vcut.kernel import build_kernel_index, kernel_graph, query_kappa_upper
from vcut.maxflow import min_st_separator
from vcut.oracle import brute_pair_kappa, generate_planted, random_graph


class TestBuildIndex:
    def test_clique_single_cluster(self):
        idx = build_kernel_index(complete(6), 1)
        assert any(set(c) == set(range(6)) for c in idx.clusters)

    def test_planted_cover(self):
        inst = generate_planted("unbalanced", {"l": 2, "s": 3, "r": 14}, seed=3)
        idx = build_kernel_index(inst.graph, 2)
        assert any(set(inst.cut.L) <= set(c) for c in idx.clusters)

    def test_huge_ell_whole_vlow_cluster(self):
        g = random_graph(15, 0.3, 0)
        idx = build_kernel_index(g, g.n * g.n)
        assert any(set(c) == set(idx.v_low) for c in idx.clusters)

    def test_membership_bound(self):
        g = random_graph(20, 0.25, 1)
        idx = build_kernel_index(g, 2)
        logn = max(1, math.ceil(math.log2(20)))
        for v in idx.v_low:
            assert len(idx.clusters_of(v)) <= DEFAULT.cnc_partition_factor * logn


class TestKernelGraph:
    def test_empty_kernel_when_t_dominates_cluster(self):
        # Hub 0 is adjacent to everything; {1,2} cluster together (tiny
        # neighborhood difference) while the hub's neighborhood is far away,
        # so the cluster sits entirely inside N[0].
        g = Graph.from_edges(9, [(0, i) for i in range(1, 9)] + [(1, 2)])
        idx = build_kernel_index(g, 1)
        small = [i for i, c in enumerate(idx.clusters) if set(c) == {1, 2}]
        assert small, idx.clusters
        with pytest.raises(EmptyKernel):
            kernel_graph(idx, small[0], 1, 0)

    def test_wrong_cluster_rejected(self):
        g = random_graph(10, 0.3, 2)
        idx = build_kernel_index(g, 1)
        for i, cluster in enumerate(idx.clusters):
            out = [v for v in range(10) if v not in cluster]
            if out:
                with pytest.raises(InvariantError):
                    kernel_graph(idx, i, out[0], cluster[0])
                break

    def test_kernel_never_undershoots(self):
        for seed in range(4):
            g = random_graph(14, 0.3, seed)
            idx = build_kernel_index(g, 2)
            for i, cluster in enumerate(idx.clusters):
                for s in cluster[:2]:
                    for t in range(g.n):
                        if t == s or g.has_edge(s, t):
                            continue
                        try:
                            kern, ids, ks, kt = kernel_graph(idx, i, s, t)
                        except EmptyKernel:
                            continue
                        res = min_st_separator(kern, ks, kt)
                        if res is NoSeparator:
                            continue
                        assert res[0] >= brute_pair_kappa(g, s, t)

    def test_planted_promise_equality(self):
        inst = generate_planted("unbalanced", {"l": 2, "s": 3, "r": 14}, seed=7)
        g = inst.graph
        kappa = inst.cut.value
        idx = build_kernel_index(g, max(1, len(inst.cut.L)))
        cover = [i for i, c in enumerate(idx.clusters) if set(inst.cut.L) <= set(c)]
        assert cover
        hit = False
        for i in cover:
            for s in inst.cut.L:
                if s not in idx.clusters[i]:
                    continue
                for t in inst.cut.R:
                    if g.has_edge(s, t):
                        continue
                    kern, ids, ks, kt = kernel_graph(idx, i, s, t)
                    res = min_st_separator(kern, ks, kt)
                    if res is not NoSeparator and res[0] == kappa:
                        hit = True
        assert hit


class TestQuery:
    def test_sentinel_when_unclustered(self):
        from conftest import star

        g = star(9)  # center degree 9 > clow_mult * delta = 8
        idx = build_kernel_index(g, 1)
        assert 0 not in idx.index
        assert query_kappa_upper(idx, 0, 5) == g.n

    def test_adjacent_pair_sentinel(self):
        g = random_graph(12, 0.3, 4)
        idx = build_kernel_index(g, 1)
        u, v = next(iter(g.edges()))
        if u in idx.index:
            assert query_kappa_upper(idx, u, v) == g.n

    def test_never_undershoots_all_pairs(self):
        for seed in range(5):
            g = random_graph(16, 0.3, seed)
            for ell in (1, 2, 4):
                idx = build_kernel_index(g, ell)
                for s, t in itertools.combinations(range(16), 2):
                    if g.has_edge(s, t):
                        continue
                    got = query_kappa_upper(idx, s, t)
                    assert got >= brute_pair_kappa(g, s, t)

    def test_promise_instances_exact(self):
        hits = 0
        for seed in range(6):
            inst = generate_planted("unbalanced", {"l": 2, "s": 3, "r": 13}, seed=seed)
            g = inst.graph
            idx = build_kernel_index(g, max(1, len(inst.cut.L)))
            for s in inst.cut.L:
                for t in inst.cut.R:
                    if g.has_edge(s, t):
                        continue
                    if query_kappa_upper(idx, s, t) == inst.cut.value:
                        hits += 1
        assert hits > 0

    def test_cluster_size_dichotomy_on_planted(self):
        # Either the covering cluster is small relative to |S| log n, or it
        # meets S in few vertices relative to |L| log n (generous constant).
        C = 8
        for seed in range(5):
            inst = generate_planted("unbalanced", {"l": 2, "s": 3, "r": 14}, seed=seed)
            g = inst.graph
            logn = max(1, math.ceil(math.log2(g.n)))
            idx = build_kernel_index(g, max(1, len(inst.cut.L)))
            L, S = set(inst.cut.L), set(inst.cut.S)
            for cluster in idx.clusters:
                if not L <= set(cluster):
                    continue
                small = len(cluster) <= C * len(S) * logn
                sparse_s = len(S & set(cluster)) <= C * len(L) * logn
                assert small or sparse_s
