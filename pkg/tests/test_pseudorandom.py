import random
from fractions import Fraction

import numpy as np
import pytest

from vcut.config import DEFAULT
from vcut.errors import ConstructionFailed, InvariantError
from vcut.oracle import (
    check_crossing_family,
    check_disperser,
    check_selector,
    check_symmetric_crossing,
)
from vcut.pseudorandom import (
    LeftRegularBipartite,
    _compose_ablr,
    asymmetric_crossing_family,
    build_disperser,
    build_mixing_graph,
    build_selector,
    build_unique_neighbor_expander,
    check_unique_neighbor_expansion,
    map_pairs,
    selector_backend_threshold,
    symmetric_crossing_family,
)

TIGHT = DEFAULT.replace(crossing_c=1, crossing_polylog_exp=0)


class TestDisperser:
    def test_k_equals_n_trivial(self):
        bip = build_disperser(6, 6, 4, Fraction(1, 8))
        ok, method, _ = check_disperser(bip, 6, Fraction(1, 8))
        assert ok

    def test_greedy_passes_exhaustive(self):
        bip = build_disperser(12, 4, 4, Fraction(1, 8))
        ok, method, witness = check_disperser(bip, 4, Fraction(1, 8))
        assert ok and method == "exhaustive" and witness is None

    def test_impossible_coverage_fails(self):
        with pytest.raises(ConstructionFailed):
            build_disperser(12, 4, 4, 0, n_right=100)

    def test_amplified_degree_and_property(self):
        bip = build_disperser(8, 3, 12, Fraction(1, 4))
        assert bip.degree >= 12
        ok, _, _ = check_disperser(bip, 3, Fraction(1, 4))
        assert ok

    def test_determinism(self):
        a = build_disperser(10, 3, 4, Fraction(1, 8))
        b = build_disperser(10, 3, 4, Fraction(1, 8))
        assert a.table == b.table


class TestAsymmetricCrossing:
    def test_trivial_full_sets(self):
        fam = asymmetric_crossing_family(range(5), range(5), 5, 5)
        assert len(fam) >= 1
        ok, _ = check_crossing_family(fam.pairs, range(5), range(5), 5, 5)
        assert ok

    def test_exhaustive_small(self):
        fam = asymmetric_crossing_family(range(10), range(10), 2, 5)
        ok, witness = check_crossing_family(fam.pairs, range(10), range(10), 2, 5)
        assert ok, witness
        assert fam.max_degree() <= fam.degree_bound

    def test_large_r_path(self):
        fam = asymmetric_crossing_family(range(10), range(10), 2, 8)
        assert "large-r" in fam.method
        ok, witness = check_crossing_family(fam.pairs, range(10), range(10), 2, 8)
        assert ok, witness

    def test_composed_construction_crosses(self):
        for (na, nb, l, r) in [(10, 10, 2, 5), (12, 10, 3, 5), (8, 12, 2, 6)]:
            pairs = _compose_ablr(tuple(range(na)), tuple(range(nb)), l, r, DEFAULT)
            ok, witness = check_crossing_family(pairs, range(na), range(nb), l, r)
            assert ok, (na, nb, l, r, witness)

    def test_degenerate_r_equals_b(self):
        fam = asymmetric_crossing_family(range(6), range(6), 6, 6)
        ok, _ = check_crossing_family(fam.pairs, range(6), range(6), 6, 6)
        assert ok

    def test_preconditions(self):
        with pytest.raises(InvariantError):
            asymmetric_crossing_family(range(4), range(4), 3, 2)  # l > r


class TestSymmetricCrossing:
    @pytest.mark.parametrize("n,alpha", [(9, 2), (8, 1), (10, 3), (7, 1.5)])
    def test_exhaustive(self, n, alpha):
        fam = symmetric_crossing_family(n, alpha)
        ok, witness = check_symmetric_crossing(fam.pairs, n, alpha)
        assert ok, witness
        assert fam.max_degree() <= fam.degree_bound

    def test_alpha_at_least_n_complete(self):
        fam = symmetric_crossing_family(6, 6)
        assert len(fam) == 36  # complete including self-pairs

    def test_unbalanced_partition_not_required(self):
        # Partitions violating |L| >= |S|/alpha carry no guarantee; the
        # checker only enumerates admissible ones, so a family passing it
        # may still miss such partitions.
        fam = symmetric_crossing_family(9, 2)
        ok, _ = check_symmetric_crossing(fam.pairs, 9, 2)
        assert ok

    def test_mapping_preserves_structure(self):
        fam = symmetric_crossing_family(4, 4)
        mapped = map_pairs(fam, [10, 20, 30, 40])
        assert all(u in (10, 20, 30, 40) and v in (10, 20, 30, 40) for u, v in mapped)

    def test_determinism(self):
        a = symmetric_crossing_family(9, 2)
        b = symmetric_crossing_family(9, 2)
        assert a.pairs == b.pairs


class TestSelector:
    @pytest.mark.parametrize("n,k,eps", [(8, 2, Fraction(1, 2)), (10, 3, Fraction(1, 4)), (7, 3, Fraction(1, 2))])
    def test_exhaustive_property(self, n, k, eps):
        fam = build_selector(n, k, eps)
        ok, witness = check_selector(fam.sets, n, k, eps)
        assert ok, witness
        assert all(len(s) >= 2 for s in fam.sets)

    def test_vacuous_configurations_pass(self):
        fam = build_selector(8, 2, Fraction(1, 2))
        ok, _ = check_selector(fam.sets, 8, 2, Fraction(1, 2))
        assert ok

    def test_size_floor_gate(self):
        with pytest.raises(ConstructionFailed):
            build_selector(4, 2, Fraction(1, 2))  # 2k >= n: L and S can cover [n]

    def test_backend_threshold_reported(self):
        thr = selector_backend_threshold(64, Fraction(1, 2))
        assert thr >= 0

    def test_family_size_budget(self):
        fam = build_selector(10, 3, Fraction(1, 4))
        assert len(fam) <= DEFAULT.selector_budget_mult * 10 * 10


class TestUniqueNeighbor:
    def test_perfect_matching(self):
        bip = LeftRegularBipartite(4, 4, [[0], [1], [2], [3]])
        assert check_unique_neighbor_expansion(bip, 4, 1)

    def test_complete_bipartite_shares_everything(self):
        bip = LeftRegularBipartite(4, 4, [[0, 1, 2, 3]] * 4)
        assert not check_unique_neighbor_expansion(bip, 2, Fraction(3, 5))

    def test_greedy_certified_when_feasible(self):
        bip = build_unique_neighbor_expander(8, 1, 3, 8, 1)
        assert bip is not None
        assert check_unique_neighbor_expansion(bip, 1, 1)

    def test_greedy_loose_alpha(self):
        bip = build_unique_neighbor_expander(6, 2, 3, 12, Fraction(1, 2))
        if bip is not None:
            assert check_unique_neighbor_expansion(bip, 2, Fraction(1, 2))


class TestMixingGraph:
    def test_complete_when_degree_allows(self):
        mg = build_mixing_graph(8, 7)
        assert mg.method == "complete"
        assert mg.pair_threshold == 1

    def test_spot_check_mixing_inequality(self):
        mg = build_mixing_graph(64, 8)
        assert mg.max_degree <= 32
        adj = [set(row) for row in mg.adj]
        deg = mg.max_degree
        rng = random.Random(4)
        for _ in range(1000):
            size_s = rng.randrange(1, 33)
            size_t = rng.randrange(1, 33)
            nodes = rng.sample(range(64), size_s + size_t)
            s_side, t_side = set(nodes[:size_s]), set(nodes[size_s:])
            edges = sum(1 for u in s_side for v in adj[u] if v in t_side)
            bound = size_s * size_t * deg / 64 + mg.lam * deg * (size_s * size_t) ** 0.5
            assert edges <= bound + 1e-6

    def test_planted_threshold_pairs_connected(self):
        mg = build_mixing_graph(64, 8)
        adj = [set(row) for row in mg.adj]
        rng = random.Random(9)
        trials = 0
        for _ in range(2000):
            if trials >= 1000:
                break
            size_s = rng.randrange(1, 64)
            if size_s * (64 - size_s) < mg.pair_threshold:
                continue
            size_t_min = -(-mg.pair_threshold // size_s)
            if size_s + size_t_min > 64:
                continue
            nodes = rng.sample(range(64), size_s + size_t_min)
            s_side, t_side = set(nodes[:size_s]), set(nodes[size_s:])
            trials += 1
            edges = sum(1 for u in s_side for v in adj[u] if v in t_side)
            assert edges > 0, (size_s, size_t_min)

    def test_eigensolve_matches_numpy(self):
        mg = build_mixing_graph(32, 6)
        a = np.zeros((32, 32))
        for u, row in enumerate(mg.adj):
            for v in row:
                a[u, v] = 1.0 / mg.max_degree
        eigs = sorted(abs(x) for x in np.linalg.eigvalsh(a))
        assert abs(eigs[-2] - mg.lam) < 1e-8

    def test_degree_budget_respected(self):
        for n, d in [(20, 3), (50, 5), (33, 4)]:
            mg = build_mixing_graph(n, d)
            assert mg.max_degree <= 4 * d
            assert mg.n == n

    def test_determinism(self):
        a = build_mixing_graph(40, 6)
        b = build_mixing_graph(40, 6)
        assert a.adj == b.adj and a.pair_threshold == b.pair_threshold
