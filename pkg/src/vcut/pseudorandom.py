"""Dispersers, crossing families, selectors, unique-neighbor expanders, and
spectrally certified mixing graphs.

Backends follow one discipline: a construction is only returned together
with a checked certificate (exhaustive verification when the subset space is
small, deterministic sampling otherwise), and whenever the parameter
formulas degenerate at small sizes, the trivial complete fallback takes
over.  All constructions are deterministic: same parameters, same output.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

import numpy as np

from .config import DEFAULT, Config
from .errors import ConstructionFailed, InvariantError


def _log2ceil(x: int) -> int:
    return max(1, math.ceil(math.log2(max(2, x))))


class LeftRegularBipartite:
    """Left-regular bipartite graph as a neighbor table G(v,i) -> right id."""

    __slots__ = ("n_left", "n_right", "degree", "table")

    def __init__(self, n_left, n_right, table):
        self.n_left = n_left
        self.n_right = n_right
        self.table = tuple(tuple(row) for row in table)
        if len(self.table) != n_left:
            raise InvariantError("table height != n_left")
        degs = {len(row) for row in self.table} or {0}
        if len(degs) != 1:
            raise InvariantError("left degrees are not uniform")
        self.degree = degs.pop()
        for row in self.table:
            for w in row:
                if not 0 <= w < n_right:
                    raise InvariantError("right id out of range")

    def neighbors(self, v) -> frozenset:
        return frozenset(self.table[v])

    def right_degrees(self):
        deg = [0] * self.n_right
        for row in self.table:
            for w in row:
                deg[w] += 1
        return deg

    def preimage(self, i, w):
        """Preimage of right vertex w under slot i."""
        return [v for v in range(self.n_left) if self.table[v][i] == w]

    def __repr__(self):
        return f"LeftRegularBipartite({self.n_left}x{self.n_right}, d={self.degree})"


class PairFamily:
    """Ordered pair list with per-source degree bookkeeping."""

    __slots__ = ("pairs", "degree_bound", "method", "_deg")

    def __init__(self, pairs, degree_bound, method):
        seen = set()
        ordered = []
        self._deg = {}
        for p in pairs:
            if p in seen:
                continue
            seen.add(p)
            ordered.append(p)
            self._deg[p[0]] = self._deg.get(p[0], 0) + 1
        self.pairs = tuple(ordered)
        self.degree_bound = degree_bound
        self.method = method

    def degree(self, u) -> int:
        return self._deg.get(u, 0)

    def max_degree(self) -> int:
        return max(self._deg.values(), default=0)

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __repr__(self):
        return f"PairFamily({len(self.pairs)} pairs, bound={self.degree_bound}, {self.method})"


class SubsetFamily:
    """List of vertex subsets of a ground set [n]."""

    __slots__ = ("n", "sets", "method")

    def __init__(self, n, sets, method="constructed"):
        self.n = n
        dedup = sorted({tuple(sorted(s)) for s in sets})
        self.sets = tuple(dedup)
        self.method = method
        for s in self.sets:
            if not s:
                raise InvariantError("empty member set")

    def __len__(self):
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    def __repr__(self):
        return f"SubsetFamily(n={self.n}, {len(self.sets)} sets, {self.method})"


class MixingGraph:
    """Regular-ish graph with a numerically certified spectral bound.

    `pair_threshold` is the certificate: for disjoint A, B, if
    |A| * |B| >= pair_threshold then E(A,B) is nonempty.
    """

    __slots__ = ("n", "adj", "max_degree", "lam", "pair_threshold", "method")

    def __init__(self, n, adj, lam, pair_threshold, method):
        self.n = n
        self.adj = tuple(tuple(sorted(row)) for row in adj)
        self.max_degree = max((len(r) for r in self.adj), default=0)
        self.lam = lam
        self.pair_threshold = pair_threshold
        self.method = method

    def edges(self):
        for u, row in enumerate(self.adj):
            for v in row:
                if u < v:
                    yield (u, v)

    def __repr__(self):
        return (
            f"MixingGraph(n={self.n}, maxdeg={self.max_degree}, "
            f"lam={self.lam:.4f}, threshold={self.pair_threshold})"
        )


# ---------------------------------------------------------------------------
# Dispersers
# ---------------------------------------------------------------------------

def _subset_count(n, k):
    c = 1
    for i in range(k):
        c = c * (n - i) // (i + 1)
        if c > 10**9:
            return 10**9
    return c


def _verify_disperser(table, n_right, k, eps, cfg):
    from .oracle import check_disperser

    bip = LeftRegularBipartite(len(table), n_right, table)
    ok, method, _ = check_disperser(bip, k, eps, cfg)
    return bip if ok else None


def _greedy_disperser_table(n, k, d, n_right, cfg):
    """Conditional-expectation greedy slot assignment.

    Tracks, per left k-subset, the covered right mask and remaining slots;
    each slot picks the right vertex with the largest weighted marginal
    coverage.  Falls back to a seeded spread when the subset space is too
    large to track (the verification step stays authoritative either way).
    """
    work = _subset_count(n, k) * (n_right + k) * d
    if k < 1 or work > 3_000_000:
        rng = random.Random(f"disperser-spread:{n}:{k}:{d}:{n_right}")
        return [[rng.randrange(n_right) for _ in range(d)] for _ in range(n)]
    subsets = list(itertools.combinations(range(n), k))
    by_vertex = [[] for _ in range(n)]
    for idx, sub in enumerate(subsets):
        for v in sub:
            by_vertex[v].append(idx)
    covered = [0] * len(subsets)
    unassigned = [k * d] * len(subsets)
    q = 1.0 - 1.0 / n_right
    qpow = [q**i for i in range(k * d + 1)]
    table = [[0] * d for _ in range(n)]
    for v in range(n):
        for i in range(d):
            gain = [0.0] * n_right
            total = 0.0
            for idx in by_vertex[v]:
                w8 = qpow[unassigned[idx] - 1]
                total += w8
                mask = covered[idx]
                w = mask
                while w:
                    low = w & -w
                    gain[low.bit_length() - 1] -= w8
                    w ^= low
            best_w, best_gain = 0, -1.0
            for w in range(n_right):
                g = total + gain[w]
                if g > best_gain + 1e-12:
                    best_gain = g
                    best_w = w
            table[v][i] = best_w
            bit = 1 << best_w
            for idx in by_vertex[v]:
                covered[idx] |= bit
                unassigned[idx] -= 1
    return table


def build_disperser(n, k, d, eps, n_right=None, cfg: Config = DEFAULT):
    """Left-regular bipartite graph where every left set of size >= k covers
    at least a (1-eps) fraction of the right side.

    The left degree is max(d, base) where base = ceil(log2 n)^exp; degrees
    above the base are realized by group-contraction amplification of a
    larger base disperser.  Raises ConstructionFailed when no attempt can be
    certified (always, for example, with eps=0 and an explicit
    n_right > k*d).
    """
    eps = Fraction(eps)
    if not (1 <= k <= n):
        raise InvariantError("need 1 <= k <= n")
    if not (0 <= eps < 1):
        raise InvariantError("need 0 <= eps < 1")
    base = _log2ceil(n) ** cfg.disperser_base_exp
    if d > base:
        gamma = math.ceil(d / base)
        inner = build_disperser(gamma * n, gamma * k, base, eps, n_right=n_right, cfg=cfg)
        table = []
        for u in range(n):
            row = []
            for j in range(gamma):
                row.extend(inner.table[u * gamma + j])
            table.append(row)
        amplified = _verify_disperser(table, inner.n_right, k, eps, cfg)
        if amplified is None:
            raise ConstructionFailed("amplified disperser failed re-verification")
        return amplified
    d_eff = base
    if n_right is not None:
        attempts = [n_right]
    elif eps == 0:
        attempts = [d_eff]
    else:
        slots = k * d_eff
        spread = math.log(max(math.e, _subset_count(n, k) / float(eps)))
        sized = max(2, min(int(slots / spread), k * d_eff))
        attempts = []
        for cand in (sized, max(2, sized // 2), min(d_eff, sized)):
            if cand not in attempts:
                attempts.append(cand)
    for m in attempts:
        if m < 1:
            continue
        if m <= d_eff:
            # Full-coverage fallback: every left vertex sees the whole right
            # side, a (1,0)-disperser.
            table = [[i % m for i in range(d_eff)] for _ in range(n)]
        else:
            table = _greedy_disperser_table(n, k, d_eff, m, cfg)
        got = _verify_disperser(table, m, k, eps, cfg)
        if got is not None:
            return got
    raise ConstructionFailed(
        f"no certified ({k},{eps})-disperser at n={n}, d={d_eff}, sizes {attempts}"
    )


# ---------------------------------------------------------------------------
# Crossing families
# ---------------------------------------------------------------------------

def _complete_pairs(universe_a, universe_b):
    # Self-pairs stay in: when the universes overlap, the crossing contract
    # quantifies over all L, R of the stated sizes, including L = R = {a}.
    return [(a, b) for a in universe_a for b in universe_b]


def _declared_bound(size_b, l, r, cfg):
    polylog = _log2ceil(size_b) ** cfg.crossing_polylog_exp
    return cfg.crossing_c * polylog * max(1, -(-(size_b - r) // l))


def _align_duplicate(small: LeftRegularBipartite, target_size: int):
    """Duplicate right vertices of `small` up to `target_size`, returning
    per-original (start, length) blocks of aligned ids."""
    w = small.n_right
    base_dup, extra = divmod(target_size, w)
    blocks = []
    pos = 0
    for j in range(w):
        length = base_dup + (1 if j < extra else 0)
        blocks.append((pos, length))
        pos += length
    return blocks


def _compose_ablr(universe_a, universe_b, l, r, cfg):
    base = _log2ceil(len(universe_b)) ** cfg.disperser_base_exp
    d1 = build_disperser(len(universe_b), r, base, Fraction(1, 8), cfg=cfg)
    d2_degree = max(base, -(-r // l) * base)
    d2 = build_disperser(len(universe_a), l, d2_degree, Fraction(1, 8), cfg=cfg)

    if d1.n_right >= d2.n_right:
        blocks = _align_duplicate(d2, d1.n_right)
        w_total = d1.n_right
        rdeg = d1.right_degrees()
        edge_total = len(universe_b) * d1.degree
        thresh = 4 * edge_total / w_total
        w_small = {w for w in range(w_total) if rdeg[w] <= thresh}
        d1_right_index = [[] for _ in range(w_total)]
        for bv, row in enumerate(d1.table):
            for w in row:
                d1_right_index[w].append(bv)

        def d1_nbrs_of(w):
            return d1_right_index[w]

        def aligned_neighbors(u_idx):
            out = set()
            for j in d2.table[u_idx]:
                start, length = blocks[j]
                out.update(range(start, start + length))
            return out
    else:
        blocks = _align_duplicate(d1, d2.n_right)
        w_total = d2.n_right
        rdeg = d1.right_degrees()
        edge_total = len(universe_b) * d1.degree
        thresh = 4 * edge_total / d1.n_right
        small_orig = {w for w in range(d1.n_right) if rdeg[w] <= thresh}
        w_small = set()
        owner = {}
        for j in range(d1.n_right):
            start, length = blocks[j]
            for a in range(start, start + length):
                owner[a] = j
                if j in small_orig:
                    w_small.add(a)
        d1_right_index = [[] for _ in range(d1.n_right)]
        for bv, row in enumerate(d1.table):
            for w in row:
                d1_right_index[w].append(bv)

        def d1_nbrs_of(w):
            return d1_right_index[owner[w]]

        def aligned_neighbors(u_idx):
            return set(d2.table[u_idx])

    pairs = []
    for ui, u in enumerate(universe_a):
        hit = set()
        for w in aligned_neighbors(ui):
            if w in w_small:
                hit.update(d1_nbrs_of(w))
        for bv in sorted(hit):
            pairs.append((u, universe_b[bv]))
    return pairs


def asymmetric_crossing_family(universe_a, universe_b, l, r, cfg: Config = DEFAULT):
    """(A,B,l,r)-crossing family: every L in A, R in B with |L| >= l,
    |R| >= r is crossed by some pair.

    Composed from two verified dispersers when the declared degree bound
    beats the complete family; otherwise (or on any backend failure) the
    complete fallback is used.
    """
    universe_a = tuple(sorted(universe_a))
    universe_b = tuple(sorted(universe_b))
    if not (1 <= l <= len(universe_a) and 1 <= r <= len(universe_b) and l <= r):
        raise InvariantError("need 1 <= l <= |A|, 1 <= r <= |B|, l <= r")

    if r > len(universe_b) // 2:
        r_dash = len(universe_b) - r
        if r_dash == 0:
            # R = B forced: one pair per source crosses everything.
            return PairFamily(
                [(a, universe_b[0]) for a in universe_a],
                degree_bound=1,
                method="single-target",
            )
        b_dash = universe_b[: 2 * r_dash]
        l_dash = min(l, r_dash)
        inner = asymmetric_crossing_family(universe_a, b_dash, l_dash, r_dash, cfg)
        return PairFamily(inner.pairs, inner.degree_bound, inner.method + "+large-r")

    bound = _declared_bound(len(universe_b), l, r, cfg)
    if bound < len(universe_b):
        try:
            pairs = _compose_ablr(universe_a, universe_b, l, r, cfg)
            fam = PairFamily(pairs, bound, "composed")
            if fam.max_degree() <= bound:
                return fam
        except ConstructionFailed:
            pass
    return PairFamily(
        _complete_pairs(universe_a, universe_b), len(universe_b), "complete"
    )


def symmetric_crossing_family(n, alpha, cfg: Config = DEFAULT):
    """Pair family over [n] crossing every tri-partition (L,S,R) with
    |R| >= |L| >= |S|/alpha.

    Union over power-of-two guesses (l, r) with l <= r, l + r <= n and
    n < (2*alpha+2)*l + 2*r (the exact compatibility test for partitions
    whose floor-power-of-two sizes are (l, r)).  Ground sets of size <= 2 or
    alpha >= n short-circuit to the complete family.
    """
    universe = tuple(range(n))
    if n <= 2 or alpha >= n:
        return PairFamily(_complete_pairs(universe, universe), n, "complete")
    guesses = []
    l = 1
    while l <= n:
        r = l
        while r <= n:
            if l + r <= n and n < (2 * alpha + 2) * l + 2 * r:
                guesses.append((l, r))
            r *= 2
        l *= 2
    pairs = []
    total_bound = 0
    methods = set()
    for l, r in guesses:
        fam = asymmetric_crossing_family(universe, universe, l, r, cfg)
        pairs.extend(fam.pairs)
        total_bound += fam.degree_bound
        methods.add(fam.method)
    if not guesses:
        return PairFamily(_complete_pairs(universe, universe), n, "complete")
    return PairFamily(pairs, min(total_bound, n), "+".join(sorted(methods)))


def map_pairs(family: PairFamily, vertices) -> PairFamily:
    """Map a family over [n] onto an id list (position i -> vertices[i])."""
    vertices = list(vertices)
    pairs = [(vertices[u], vertices[v]) for (u, v) in family.pairs]
    return PairFamily(pairs, family.degree_bound, family.method)


# ---------------------------------------------------------------------------
# Unique-neighbor expanders and selectors
# ---------------------------------------------------------------------------

def check_unique_neighbor_expansion(bip: LeftRegularBipartite, k, alpha, cfg: Config = DEFAULT):
    """(k,alpha)-unique-neighbor expansion: every left S with |S| <= k has
    at least alpha*d*|S| right vertices with exactly one neighbor in S.

    Exhaustive for left size <= 20, deterministic sampling otherwise
    (a sampled failure is definitive false).
    """
    alpha = Fraction(alpha)
    n = bip.n_left
    nbrs = [bip.neighbors(v) for v in range(n)]

    def ok(subset):
        count = {}
        for v in subset:
            for w in nbrs[v]:
                count[w] = count.get(w, 0) + 1
        uniques = sum(1 for c in count.values() if c == 1)
        return uniques >= alpha * bip.degree * len(subset)

    if n <= 20:
        for size in range(1, min(k, n) + 1):
            for subset in itertools.combinations(range(n), size):
                if not ok(subset):
                    return False
        return True
    rng = random.Random(0x00E1)
    for _ in range(cfg.sampled_check_trials):
        size = rng.randrange(1, min(k, n) + 1)
        if not ok(rng.sample(range(n), size)):
            return False
    return True


def build_unique_neighbor_expander(n_left, k, d, m, alpha, forbid=None, cfg: Config = DEFAULT):
    """Greedy d-left-regular (k,alpha)-unique-neighbor expander on [m].

    `forbid` pairs (x, y) must differ under every slot index.  Returns None
    when no certified attempt exists at these parameters.
    """
    forbid = forbid or []
    partners = {}
    for x, y in forbid:
        partners.setdefault(x, set()).add(y)
        partners.setdefault(y, set()).add(x)
    for attempt in range(3):
        rng = random.Random(f"une:{n_left}:{k}:{d}:{m}:{attempt}")
        load = [0] * m
        table = [[-1] * d for _ in range(n_left)]
        order = list(range(n_left))
        if attempt:
            rng.shuffle(order)
        feasible = True
        for v in order:
            for i in range(d):
                banned = {table[v][j] for j in range(i)}
                banned.update(
                    table[p][i] for p in partners.get(v, ()) if table[p][i] >= 0
                )
                options = [w for w in range(m) if w not in banned]
                if not options:
                    feasible = False
                    break
                best = min(options, key=lambda w: (load[w], w))
                table[v][i] = best
                load[best] += 1
            if not feasible:
                break
        if not feasible:
            continue
        bip = LeftRegularBipartite(n_left, m, table)
        if check_unique_neighbor_expansion(bip, k, alpha, cfg):
            return bip
    return None


def selector_backend_threshold(n, eps, cfg: Config = DEFAULT) -> int:
    """Largest k for which the unique-neighbor-expander route is even
    parameter-feasible here (sets of size >= 2 force m <= n'/2, and
    alpha*d*k' <= m caps k' = 4k)."""
    n_pow = 1 << max(1, (n - 1).bit_length())
    eps = Fraction(eps)
    alpha = 1 - 2 * (eps / 8)
    d = max(2, _log2ceil(n_pow))
    m = n_pow // 2
    return int(Fraction(m) / (alpha * d) / 4)


def build_selector(n, k, eps, cfg: Config = DEFAULT):
    """(n,k,eps)-selector: for all disjoint L, S with eps*k < |L| <= k and
    |S| <= k some member set hits L exactly once and misses S; every member
    set has size >= 2.

    Tries the unique-neighbor-expander construction (power-of-two padding
    with duplicates, k' = 4k, eps' = eps/8) when parameter-feasible, else
    falls back to the verified family of all 2-element subsets, which is a
    valid selector whenever 2k < n.  ConstructionFailed when 2k >= n: L and
    S can then cover the whole ground set and no size->=2 selector exists.
    """
    eps = Fraction(eps)
    if k < 1 or not (0 < eps <= 1):
        raise InvariantError("need k >= 1 and eps in (0,1]")
    if 2 * k >= n:
        raise ConstructionFailed(
            f"no selector with member sets >= 2 exists for 2k={2*k} >= n={n}"
        )
    if k <= selector_backend_threshold(n, eps, cfg):
        n_pow = 1 << max(1, (n - 1).bit_length())
        dup_of = {n + j: j for j in range(n_pow - n)}
        forbid = [(n + j, j) for j in range(n_pow - n)]
        alpha = 1 - 2 * (eps / 8)
        d = max(2, _log2ceil(n_pow))
        m = n_pow // 2
        bip = build_unique_neighbor_expander(n_pow, 4 * k, d, m, alpha, forbid, cfg)
        if bip is not None:
            sets = []
            for i in range(d):
                groups = {}
                for v in range(n_pow):
                    groups.setdefault(bip.table[v][i], []).append(v)
                for members in groups.values():
                    mapped = {dup_of.get(v, v) for v in members}
                    if len(mapped) < 2:
                        raise InvariantError("selector set below the size-2 floor")
                    sets.append(sorted(mapped))
            fam = SubsetFamily(n, sets, "unique-neighbor")
            if len(fam) <= cfg.selector_budget_mult * n * n:
                return fam
    pairs = [frozenset(p) for p in itertools.combinations(range(n), 2)]
    fam = SubsetFamily(n, pairs, "pair-fallback")
    if len(fam) > cfg.selector_budget_mult * n * n:
        raise ConstructionFailed("selector budget exceeded")
    return fam


# ---------------------------------------------------------------------------
# Mixing graphs
# ---------------------------------------------------------------------------

def _circulant_adj(n, offsets):
    adj = [set() for _ in range(n)]
    for o in offsets:
        for v in range(n):
            adj[v].add((v + o) % n)
            adj[v].add((v - o) % n)
    return [sorted(row) for row in adj]


def _spectral_lambda(adj, cfg: Config = DEFAULT) -> float:
    """max |eigenvalue| of the degree-normalized adjacency, principal
    eigenvector excluded.  Dense eigensolve up to n=2048, power iteration
    with Rayleigh quotients above."""
    n = len(adj)
    degs = [len(r) for r in adj]
    dmax = max(degs) if degs else 1
    a = np.zeros((n, n))
    for u, row in enumerate(adj):
        for v in row:
            a[u, v] = 1.0 / dmax
    if n <= 2048:
        eigs = np.linalg.eigvalsh(a)
        principal = max(range(len(eigs)), key=lambda i: eigs[i])
        rest = [abs(float(e)) for i, e in enumerate(eigs) if i != principal]
        return max(rest, default=0.0)
    rng = np.random.default_rng(12345)
    ones = np.ones(n) / math.sqrt(n)
    x = rng.standard_normal(n)
    x -= ones * (ones @ x)
    x /= np.linalg.norm(x)
    lam = 0.0
    for _ in range(300):
        y = a @ x
        y -= ones * (ones @ y)
        norm = np.linalg.norm(y)
        if norm == 0:
            return 0.0
        x = y / norm
        lam = norm
    return float(lam) * 1.05  # Rayleigh estimate padded toward safety


def build_mixing_graph(n, d, cfg: Config = DEFAULT) -> MixingGraph:
    """Graph on n vertices, max degree <= 4d, with a certificate
    guaranteeing E(A,B) != empty whenever |A|*|B| >= pair_threshold.

    Backend: deterministic circulant with offsets chosen by a greedy
    spectral search (closed-form circulant eigenvalues), certified by an
    eigensolve of the final graph.  Complete graph when d >= n-1 (or when n
    is too small to do better within the degree budget).
    """
    if n < 1:
        raise InvariantError("n must be >= 1")
    if d >= n:
        raise InvariantError("need d < n")
    if d >= n - 1 or (n <= 8 and n - 1 <= 4 * d):
        adj = [[v for v in range(n) if v != u] for u in range(n)]
        return MixingGraph(n, adj, 0.0, 1, "complete")

    half = n // 2
    target_offsets = max(1, math.ceil(d / 2))
    budget = max(target_offsets, min(2 * d, half))  # up to 4d degree
    chosen = []
    ks = np.arange(1, n)
    partial = np.zeros(n - 1)

    def lam_of(vec, count):
        deg = 2 * count
        return float(np.max(np.abs(vec))) / deg if deg else 1.0

    candidates = list(range(1, half + 1))
    while len(chosen) < budget:
        best_o, best_val = None, None
        for o in candidates:
            if o in chosen:
                continue
            contrib = 2 * np.cos(2 * math.pi * o * ks / n)
            val = float(np.max(np.abs(partial + contrib)))
            if best_val is None or val < best_val - 1e-12:
                best_val = val
                best_o = o
        if best_o is None:
            break
        chosen.append(best_o)
        partial += 2 * np.cos(2 * math.pi * best_o * ks / n)
        if len(chosen) >= target_offsets:
            deg_now = 2 * len(chosen)
            if lam_of(partial, len(chosen)) <= 0.9 or len(chosen) >= budget:
                break

    adj = _circulant_adj(n, chosen)
    if max(len(r) for r in adj) > 4 * d:
        raise ConstructionFailed(f"degree budget 4d={4*d} unreachable at n={n}")
    lam = _spectral_lambda(adj, cfg)
    lam_safe = lam * (1 + 1e-9) + 1e-12
    threshold = int(lam_safe * lam_safe * n * n) + 1
    return MixingGraph(n, adj, lam, threshold, "circulant")
