import itertools
import random

import pytest

from conftest import complete, cycle, petersen, two_cliques_sharing
from vcut.errors import Exhausted
from vcut.gabow import (
    GapState,
    KConnected,
    RichSet,
    gabow_vc,
    increase_gap,
    large_gap_vc,
    rich_set_or_cut,
)
from vcut.graphs import Graph, NoCut, VertexCut, validate_cut
from vcut.oracle import brute_kappa, generate_planted, random_graph


class TestRichSetOrCut:
    def test_dense_graph_returns_whole_set(self):
        g = complete(8)
        # delta = 7 > n/2: the first branch certifies V itself.
        candidates, rich = rich_set_or_cut(g, 3)
        assert isinstance(rich, RichSet)
        assert set(rich.vertices) == set(range(8))

    def test_small_cut_found(self):
        g = two_cliques_sharing(6, 2)
        candidates, rich = rich_set_or_cut(g, 3)
        best = min((c.value for c in candidates), default=None)
        assert best == 2

    def test_planted_rich_set_straddles_cut(self):
        inst = generate_planted("balanced-terminal", {"side": 8, "s": 3}, seed=1)
        g = inst.graph
        candidates, rich = rich_set_or_cut(g, inst.cut.value + 2)
        if rich is not None and rich.tau > 0:
            lset, rset = set(inst.cut.L), set(inst.cut.R)
            tv = set(rich.vertices)
            assert len(tv & lset) >= rich.tau
            assert len(tv & rset) >= rich.tau
        else:
            assert min(c.value for c in candidates) == inst.cut.value


class TestIncreaseGap:
    def test_round_on_near_complete_graph(self):
        # K8 minus a perfect matching: removing a vertex and patching
        # degrees keeps everything consistent.
        n = 8
        matching = {(0, 1), (2, 3), (4, 5), (6, 7)}
        edges = [e for e in itertools.combinations(range(n), 2) if e not in matching]
        g = Graph.from_edges(n, edges)
        from vcut.graphs import min_degree_cut

        state = GapState(g, list(range(n)), (), min_degree_cut(g), 0)
        new = increase_gap(state, 4, g)
        assert new.gap == 1
        assert len(new.removed) == 1
        assert new.h.m <= g.m
        if isinstance(new.best, VertexCut):
            assert validate_cut(g, new.best)

    def test_best_cut_never_worsens(self):
        g = random_graph(14, 0.5, 3)
        from vcut.graphs import min_degree_cut

        state = GapState(g, list(range(g.n)), (), min_degree_cut(g), 0)
        before = state.best.value
        try:
            after = increase_gap(state, 4, g)
        except Exhausted:
            return
        assert after.best.value <= before

    def test_complete_graph_exhausted(self):
        g = complete(6)
        state = GapState(g, list(range(6)), (), None, 0)
        with pytest.raises(Exhausted):
            increase_gap(state, 3, g)


class TestLargeGap:
    def test_cycle_small_cut(self):
        got = large_gap_vc(cycle(8), 3, 0)
        assert isinstance(got, VertexCut) and got.value == 2

    def test_complete_k_connected(self):
        got = large_gap_vc(complete(8), 3, 0)
        assert isinstance(got, KConnected)

    def test_planted_exact(self):
        inst = generate_planted("balanced-terminal", {"side": 7, "s": 2}, seed=4)
        got = large_gap_vc(inst.graph, inst.cut.value + 3, 0)
        assert isinstance(got, VertexCut) and got.value == inst.cut.value


class TestGabowDriver:
    def test_petersen_decisions(self):
        got = gabow_vc(petersen(), 4)
        assert isinstance(got, VertexCut) and got.value == 3
        assert isinstance(gabow_vc(petersen(), 3), KConnected)

    def test_disconnected(self):
        g = Graph.from_edges(4, [(0, 1), (2, 3)])
        got = gabow_vc(g, 1)
        assert isinstance(got, VertexCut) and got.value == 0

    def test_complete_sentinel(self):
        got = gabow_vc(complete(5), 8)
        assert isinstance(got, NoCut) and got.value == 4

    def test_matches_oracle_decisions(self):
        rng = random.Random(6)
        for case in range(50):
            n = rng.randrange(6, 30)
            p = rng.choice([0.15, 0.3, 0.5])
            k = rng.randrange(1, 9)
            g = random_graph(n, p, case, connected=rng.random() < 0.9)
            got = gabow_vc(g, k)
            want = brute_kappa(g)
            kappa = want[0] if isinstance(want, tuple) else want.value
            if kappa >= k:
                assert isinstance(got, KConnected), (case, n, p, k, kappa)
            elif isinstance(got, NoCut):
                assert got.value == kappa
            else:
                assert isinstance(got, VertexCut), (case, n, p, k)
                assert got.value == kappa, (case, n, p, k, got.value, kappa)
                assert validate_cut(g, got)
