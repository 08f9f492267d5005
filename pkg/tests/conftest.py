import itertools

import pytest

from vcut.graphs import Graph, WeightedDigraph


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, 5 + i) for i in range(5)]
    return Graph.from_edges(10, outer + inner + spokes)


def cycle(n) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n) -> Graph:
    return Graph.from_edges(n, list(itertools.combinations(range(n), 2)))


def path(n) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def grid(rows, cols) -> Graph:
    def vid(r, c):
        return r * cols + c

    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((vid(r, c), vid(r, c + 1)))
            if r + 1 < rows:
                edges.append((vid(r, c), vid(r + 1, c)))
    return Graph.from_edges(rows * cols, edges)


def star(leaves) -> Graph:
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def two_cliques_sharing(k, shared) -> Graph:
    """Two K_k's sharing `shared` vertices."""
    n = 2 * k - shared
    a = list(range(k))
    b = list(range(k - shared, n))
    edges = set()
    for grp in (a, b):
        for u, v in itertools.combinations(grp, 2):
            edges.add((u, v))
    return Graph.from_edges(n, sorted(edges))


def directed_cycle(weights) -> WeightedDigraph:
    n = len(weights)
    return WeightedDigraph.from_arcs(n, [(i, (i + 1) % n) for i in range(n)], weights)


def complete_digraph(weights) -> WeightedDigraph:
    n = len(weights)
    return WeightedDigraph.from_arcs(
        n, [(a, b) for a in range(n) for b in range(n) if a != b], weights
    )


@pytest.fixture
def petersen_graph():
    return petersen()
