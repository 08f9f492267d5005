"""Common-neighborhood clustering and pairwise sparse-recovery sketches.

The clustering engine takes any symmetric distance oracle with the triangle
inequality and a candidate edge set (graph edges for the unweighted kernel
path, all pairs for the weighted variant) and produces a small set of
partitions such that every connected set with pairwise oracle distance <= d
lands inside one cluster.
"""

from __future__ import annotations

import itertools
import math

from .config import DEFAULT, Config
from .errors import InvariantError, MixedSketchError
from .graphs import Graph, WeightedDigraph, weighted_symdiff

# Ball-growing schedule, read-only: the loop keeps expanding while the ball
# boundary is large or the ball grew by GROWTH_FACTOR, and radii advance in
# RADIUS_STEP * i * d increments (final clusters use RADIUS_STEP*i - 3).
GROWTH_FACTOR = 1.1
RADIUS_STEP = 5


class Clustering:
    """A list of partitions of the ground set, with a membership index."""

    __slots__ = ("n", "partitions", "_index")

    def __init__(self, n, partitions):
        self.n = n
        self.partitions = tuple(
            tuple(tuple(sorted(c)) for c in partition) for partition in partitions
        )
        self._index = None
        for partition in self.partitions:
            flat = sorted(v for c in partition for v in c)
            if flat != list(range(n)):
                raise InvariantError("partition does not exactly cover the ground set")

    def membership_index(self):
        """Per-vertex list of (partition_idx, cluster_idx) memberships."""
        if self._index is None:
            index = [[] for _ in range(self.n)]
            for pi, partition in enumerate(self.partitions):
                for ci, cluster in enumerate(partition):
                    for v in cluster:
                        index[v].append((pi, ci))
            self._index = index
        return self._index

    def clusters(self):
        for partition in self.partitions:
            yield from partition

    def __repr__(self):
        sizes = [len(p) for p in self.partitions]
        return f"Clustering(n={self.n}, partitions={sizes})"


def cnc(g, dist, d, candidates="edges", stats=None):
    """Ball-growing clustering over the candidate graph filtered by `dist`.

    `g` is a Graph (candidates="edges") or a vertex count (candidates
    "all-pairs").  Roots are always the smallest remaining id.  Later rounds
    only re-cluster the residual carry-over set; their partitions are padded
    with singleton clusters so every partition covers the ground set.
    """
    if d < 1:
        raise InvariantError("d must be >= 1")
    if isinstance(g, Graph):
        n = g.n
        candidate_edges = g.edges() if candidates == "edges" else None
    else:
        n = int(g)
        candidate_edges = None
    if candidates == "all-pairs":
        candidate_edges = itertools.combinations(range(n), 2)
    elif candidate_edges is None:
        raise InvariantError("candidates must be 'edges' (with a Graph) or 'all-pairs'")

    cache = {}

    def dd(u, v):
        if u == v:
            return 0
        key = (u, v) if u < v else (v, u)
        got = cache.get(key)
        if got is None:
            got = dist(key[0], key[1])
            cache[key] = got
        return got

    gp = [[] for _ in range(n)]
    for u, v in candidate_edges:
        if dd(u, v) <= d:
            gp[u].append(v)
            gp[v].append(u)
    gp = [sorted(row) for row in gp]

    def ball(root, radius, allowed):
        seen = {root}
        queue = [root]
        qi = 0
        while qi < len(queue):
            x = queue[qi]
            qi += 1
            for y in gp[x]:
                if y in allowed and y not in seen and dd(root, y) <= radius:
                    seen.add(y)
                    queue.append(y)
        return seen

    partitions = []
    u_set = set(range(n))
    while u_set:
        clusters = []
        u_rem = set(u_set)
        u_next = set()
        while u_rem:
            root = min(u_rem)
            t_prev = set()
            t_cur = {root}
            i = 1
            while True:
                boundary = set()
                for x in t_cur:
                    for y in gp[x]:
                        if y in u_rem and y not in t_cur:
                            boundary.add(y)
                if len(boundary) >= len(t_prev) or len(t_cur) >= GROWTH_FACTOR * len(t_prev):
                    i += 1
                    t_prev = t_cur
                    t_cur = ball(root, RADIUS_STEP * i * d, u_rem)
                else:
                    break
            tree = ball(root, (RADIUS_STEP * i - 3) * d, u_rem)
            clusters.append(tree)
            u_rem -= tree
            u_next |= t_cur - t_prev
        for v in sorted(set(range(n)) - u_set):
            clusters.append({v})
        partitions.append(clusters)
        u_set = u_next
    if stats is not None:
        stats.add("cnc_calls")
        stats.add("cnc_partitions", len(partitions))
        stats.add("cluster_memberships", sum(len(c) for p in partitions for c in p))
    return Clustering(n, partitions)


def weighted_cnc(d_graph: WeightedDigraph, ell, stats=None):
    """Clusters covering the left side of every minimum cut with w(L) <= ell.

    Runs the clustering engine over the all-pairs candidate graph with the
    weighted out-neighborhood symmetric difference as distance and d = 2*ell.
    Returns the flat cluster list (each vertex appears once per partition).
    """
    if ell < 0:
        raise InvariantError("ell must be >= 0")
    clustering = cnc(
        d_graph.n,
        lambda u, v: weighted_symdiff(d_graph, u, v),
        max(1, 2 * ell),
        candidates="all-pairs",
        stats=stats,
    )
    if ell == 0:
        # Only identical out-neighborhoods may share a cluster.
        clusters = []
        for cluster in clustering.clusters():
            groups = {}
            for v in cluster:
                groups.setdefault(d_graph.out_adj[v], []).append(v)
            clusters.extend(tuple(sorted(grp)) for grp in groups.values())
        return clusters
    return [cluster for cluster in clustering.clusters()]


# ---------------------------------------------------------------------------
# Pairwise sparse recovery
# ---------------------------------------------------------------------------

class TooLarge:
    """Sentinel: the symmetric difference exceeded the sketch threshold."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "TooLarge"


TOO_LARGE = TooLarge()


class RecoverySketch:
    """Per-vertex digest supporting pairwise symmetric-difference recovery."""

    __slots__ = ("n", "x", "backend", "payload", "field")

    def __init__(self, n, x, backend, payload, field=None):
        self.n = n
        self.x = x
        self.backend = backend
        self.payload = payload
        self.field = field


def _small_prime_above(n):
    candidate = max(3, n + 1)
    while True:
        if all(candidate % q for q in range(2, int(math.isqrt(candidate)) + 1)):
            return candidate
        candidate += 1


def _primitive_root(p):
    phi = p - 1
    factors = set()
    rem = phi
    q = 2
    while q * q <= rem:
        while rem % q == 0:
            factors.add(q)
            rem //= q
        q += 1
    if rem > 1:
        factors.add(rem)
    for g in range(2, p):
        if all(pow(g, phi // q, p) != 1 for q in factors):
            return g
    raise InvariantError(f"no primitive root mod {p}")


def sketch_construct(g: Graph, x, backend=None, cfg: Config = DEFAULT):
    """Build one sketch per vertex; pairwise recovery is exact up to size x.

    The reference backend stores neighborhoods outright and never fails; the
    syndrome backend stores 2x power sums over a prime field and fails with
    TooLarge beyond the threshold.
    """
    backend = backend or cfg.sketch_backend
    if x < 0:
        raise InvariantError("x must be >= 0")
    if backend == "exact":
        return [
            RecoverySketch(g.n, x, "exact", g.neighbor_set(v)) for v in range(g.n)
        ]
    if backend != "syndrome":
        raise InvariantError(f"unknown sketch backend {backend!r}")
    p = _small_prime_above(max(g.n + 1, 2 * x + 2))
    omega = _primitive_root(p)
    powers = [pow(omega, i, p) for i in range(g.n)]
    sketches = []
    for v in range(g.n):
        syndromes = []
        for j in range(1, 2 * x + 1):
            acc = 0
            for i in g.adj[v]:
                acc = (acc + pow(powers[i], j, p)) % p
            syndromes.append(acc)
        sketches.append(RecoverySketch(g.n, x, "syndrome", tuple(syndromes), (p, omega)))
    return sketches


def _berlekamp_massey(seq, p):
    """Minimal LFSR (connection polynomial) for `seq` over F_p."""
    c = [1]
    b = [1]
    L, m, bb = 0, 1, 1
    for i, s in enumerate(seq):
        delta = s
        for j in range(1, L + 1):
            delta = (delta + c[j] * seq[i - j]) % p
        if delta == 0:
            m += 1
        elif 2 * L <= i:
            t = list(c)
            coef = delta * pow(bb, -1, p) % p
            c = c + [0] * (len(b) + m - len(c))
            for j, bj in enumerate(b):
                c[j + m] = (c[j + m] - coef * bj) % p
            L = i + 1 - L
            b = t
            bb = delta
            m = 1
        else:
            coef = delta * pow(bb, -1, p) % p
            c = c + [0] * max(0, len(b) + m - len(c))
            for j, bj in enumerate(b):
                c[j + m] = (c[j + m] - coef * bj) % p
            m += 1
    return c[: L + 1], L


def _solve_mod(matrix, rhs, p):
    n = len(rhs)
    a = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] % p), None)
        if pivot is None:
            return None
        a[col], a[pivot] = a[pivot], a[col]
        inv = pow(a[col][col], -1, p)
        a[col] = [x * inv % p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                factor = a[r][col]
                a[r] = [(x - factor * y) % p for x, y in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


def sketch_recover(a: RecoverySketch, b: RecoverySketch):
    """N(u) triangle N(v) from two sketches; TooLarge when out of range."""
    if (a.n, a.x, a.backend, a.field) != (b.n, b.x, b.backend, b.field):
        raise MixedSketchError("sketches built with different parameters")
    if a.backend == "exact":
        return set(a.payload ^ b.payload)
    p, omega = a.field
    x = a.x
    diff = [(sa - sb) % p for sa, sb in zip(a.payload, b.payload)]
    if all(v == 0 for v in diff):
        return set()
    if x == 0:
        return TOO_LARGE
    conn, degree = _berlekamp_massey(diff, p)
    if degree == 0 or degree > x:
        return TOO_LARGE
    positions = []
    for i in range(a.n):
        z = pow(omega, (p - 1 - i) % (p - 1), p)  # omega^{-i}
        acc = 0
        for coeff in reversed(conn):
            acc = (acc * z + coeff) % p
        if acc == 0:
            positions.append(i)
    if len(positions) != degree:
        return TOO_LARGE
    vander = [[pow(omega, i * j, p) for i in positions] for j in range(1, degree + 1)]
    amps = _solve_mod(vander, diff[:degree], p)
    if amps is None or any(e not in (1, p - 1) for e in amps):
        return TOO_LARGE
    for j in range(1, 2 * x + 1):
        acc = 0
        for i, e in zip(positions, amps):
            acc = (acc + e * pow(omega, i * j, p)) % p
        if acc != diff[j - 1]:
            return TOO_LARGE
    return set(positions)
