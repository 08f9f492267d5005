import itertools
import random

import pytest

from conftest import cycle, path, petersen, star
from vcut import _pyflow
from vcut.errors import InvariantError
from vcut.graphs import Graph, NoCut, NoSeparator, validate_cut
from vcut.maxflow import (
    BACKEND,
    min_s_to_set_separator,
    min_st_cut,
    min_st_separator,
    rooted_connectivity,
    vertex_max_flow,
    weak_separator,
)
from vcut.oracle import brute_pair_kappa, brute_s_to_set_kappa, random_graph


class TestMinStSeparator:
    def test_cycle_antipodal(self):
        value, sep = min_st_separator(cycle(6), 0, 3)
        assert value == 2
        assert sep == (1, 5)

    def test_adjacent_pair(self):
        assert min_st_separator(cycle(6), 0, 1) is NoSeparator

    def test_petersen_nonadjacent(self):
        g = petersen()
        for s, t in itertools.combinations(range(10), 2):
            if g.has_edge(s, t):
                continue
            value, _ = min_st_separator(g, s, t)
            assert value == 3

    def test_same_vertex_rejected(self):
        with pytest.raises(InvariantError):
            min_st_separator(cycle(4), 2, 2)

    def test_agrees_with_oracle_everywhere(self):
        for seed in range(10):
            g = random_graph(16, 0.12 + 0.05 * seed, seed)
            for s, t in itertools.combinations(range(g.n), 2):
                mine = min_st_separator(g, s, t)
                ref = brute_pair_kappa(g, s, t)
                if mine is NoSeparator:
                    assert ref is NoSeparator
                else:
                    assert mine[0] == ref

    def test_cut_reconstruction_validates(self):
        for seed in range(5):
            g = random_graph(14, 0.3, seed)
            for s, t in itertools.combinations(range(g.n), 2):
                res = min_st_cut(g, s, t)
                if res is NoSeparator:
                    continue
                value, cut = res
                assert validate_cut(g, cut)
                assert s in cut.L and t in cut.R
                assert cut.value == value

    def test_deterministic_repeat(self):
        g = random_graph(15, 0.3, 9)
        first = [min_st_separator(g, s, t) for s, t in itertools.combinations(range(15), 2)]
        second = [min_st_separator(g, s, t) for s, t in itertools.combinations(range(15), 2)]
        assert first == second

    def test_capped_query(self):
        g = petersen()
        value, sep = min_st_separator(g, 0, 7, limit=2)
        assert value == 2 and sep is None
        value, sep = min_st_separator(g, 0, 7, limit=9)
        assert value == 3 and sep is not None


class TestMinSToSet:
    def test_singleton_matches_pair(self):
        g = path(3)
        assert min_s_to_set_separator(g, 0, [2]) == min_st_separator(g, 0, 2)

    def test_star_center_adjacent(self):
        assert min_s_to_set_separator(star(4), 0, [1, 2]) is NoSeparator

    def test_simultaneous_semantics_vs_oracle(self):
        rng = random.Random(2)
        for seed in range(8):
            g = random_graph(13, 0.25, seed)
            for _ in range(10):
                s = rng.randrange(13)
                rest = [v for v in range(13) if v != s]
                terms = rng.sample(rest, rng.randrange(1, 4))
                mine = min_s_to_set_separator(g, s, terms)
                ref = brute_s_to_set_kappa(g, s, terms)
                if mine is NoSeparator:
                    assert ref is NoSeparator
                else:
                    assert mine[0] == ref


class TestRootedConnectivity:
    def test_star_leaf(self):
        value, cut = rooted_connectivity(star(4), 1)
        assert value == 1 and cut.S == (0,)

    def test_k5_minus_edge(self):
        g = Graph.from_edges(5, [e for e in itertools.combinations(range(5), 2) if e != (0, 1)])
        value, cut = rooted_connectivity(g, 0)
        assert value == 3
        assert 0 in cut.L and 1 in cut.R

    def test_dominating_vertex(self):
        assert isinstance(rooted_connectivity(star(4), 0), NoCut)

    def test_matches_min_over_targets(self):
        for seed in range(6):
            g = random_graph(12, 0.3, seed)
            for a in range(12):
                targets = [t for t in range(12) if t != a and not g.has_edge(a, t)]
                if not targets:
                    continue
                value, cut = rooted_connectivity(g, a)
                ref = min(brute_pair_kappa(g, a, t) for t in targets)
                assert value == ref
                assert validate_cut(g, cut) and a in cut.L


class TestWeakSeparator:
    def _brute_weak(self, g, terms):
        """Min |Z| over Z where some surviving terminal is disconnected from
        some surviving non-terminal."""
        tset = set(terms)
        best = None
        for r in range(g.n):
            for z in itertools.combinations(range(g.n), r):
                zs = set(z)
                alive_terms = tset - zs
                if not alive_terms:
                    continue
                reach = set()
                for v in alive_terms:
                    reach |= set(g.component_of(v, removed=frozenset(zs)))
                if set(range(g.n)) - zs - reach:
                    return r, zs
        return best

    def test_cycle_single_vertex(self):
        value, cut = weak_separator(cycle(5), [0])
        assert value == 2
        assert validate_cut(cycle(5), cut)

    def test_single_vertex_is_rooted_connectivity(self):
        for seed in range(4):
            g = random_graph(10, 0.3, seed)
            for v in range(10):
                if g.degree(v) == g.n - 1:
                    continue
                got = weak_separator(g, [v])
                ref = rooted_connectivity(g, v)
                if isinstance(got, NoCut) or isinstance(ref, NoCut):
                    continue
                assert got[0] == ref[0]

    def test_matches_brute_enumeration(self):
        rng = random.Random(5)
        for seed in range(6):
            g = random_graph(9, 0.35, seed)
            terms = sorted(rng.sample(range(9), rng.randrange(1, 4)))
            got = weak_separator(g, terms)
            ref = self._brute_weak(g, terms)
            if isinstance(got, NoCut):
                assert ref is None
            else:
                assert ref is not None and got[0] == ref[0]
                assert validate_cut(g, got[1])

    def test_separator_may_contain_terminals(self):
        # Two triangles joined through vertex 2; separating {2} cuts at 2's
        # neighbors, but a terminal pair across the joint may be absorbed.
        g = Graph.from_edges(5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)])
        value, cut = weak_separator(g, [0, 2])
        assert validate_cut(g, cut)


class TestBackendTwins:
    def test_pure_python_twin_agrees(self):
        rng = random.Random(0)
        for seed in range(6):
            g = random_graph(12, 0.35, seed)
            arcs = g.flow_arcs()
            n = g.n
            tails = [2 * v for v in range(n)] + [2 * u + 1 for u, v in arcs]
            heads = [2 * v + 1 for v in range(n)] + [2 * v for u, v in arcs]
            caps = [1] * n + [n + 1] * len(arcs)
            s, t = rng.randrange(n), rng.randrange(n)
            if s == t or g.has_edge(s, t):
                continue
            tails += [2 * n, 2 * t]
            heads += [2 * s + 1, 2 * n + 1]
            caps += [n + 1, n + 1]
            got_py = _pyflow.solve(2 * n + 2, tails, heads, caps, 2 * n, 2 * n + 1, None)
            try:
                from vcut import _core
            except ImportError:
                pytest.skip("compiled backend not built")
            got_c = _core.solve(2 * n + 2, tails, heads, caps, 2 * n, 2 * n + 1, None)
            assert got_py[0] == got_c[0]
            assert got_py[1] == got_c[1]

    def test_backend_reported(self):
        assert BACKEND in ("cython", "python")


class TestVertexMaxFlow:
    def test_duality_asserted(self):
        g = petersen()
        arcs = g.flow_arcs()
        value, sep, reach, completed = vertex_max_flow(
            g.n, arcs, [1] * g.n, [0], [7]
        )
        assert completed and value == len(sep) == 3

    def test_uncuttable_vertices(self):
        g = path(5)
        arcs = g.flow_arcs()
        caps = [1, None, 1, 1, 1]
        value, sep, _, _ = vertex_max_flow(g.n, arcs, caps, [0], [4])
        assert sep in ([2], [3])
        assert value == 1

    def test_overlapping_terminals_rejected(self):
        with pytest.raises(InvariantError):
            vertex_max_flow(3, [(0, 1), (1, 2)], [1] * 3, [1], [1])
