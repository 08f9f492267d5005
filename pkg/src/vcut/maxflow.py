"""Vertex-capacitated max flow / minimum separator engine.

Every query runs Dinic's blocking flow on the standard vertex-splitting
transform: v becomes v_in -> v_out with capacity w(v), original arcs get an
effectively-infinite capacity (n*W+1), and terminals are wired to bypass
their own split arc, so separators never contain them.

The canonical separator returned everywhere is the minimum cut closest to
the source (saturated split arcs on the residual source-reachable frontier),
which is unique, so results are deterministic and backend-independent.

The inner solver is the compiled `vcut._core` when available, else the
pure-Python `vcut._pyflow`; set VCUT_PURE_PYTHON=1 to force the fallback.
"""

from __future__ import annotations

import os

from .errors import InvariantError
from .graphs import Graph, NoCut, NoSeparator, VertexCut

if os.environ.get("VCUT_PURE_PYTHON"):
    from . import _pyflow as _backend
else:
    try:
        from . import _core as _backend  # type: ignore[attr-defined]
    except ImportError:
        from . import _pyflow as _backend

BACKEND = _backend.BACKEND_NAME


def _finish(n, tails, heads, arc_caps, caps, sources, sinks, inf, limit, stats):
    """Append terminal bypass arcs, run the solver, extract the separator."""
    super_s, super_t = 2 * n, 2 * n + 1
    for s in sources:
        tails.append(super_s)
        heads.append(2 * s + 1)
        arc_caps.append(inf)
    for t in sinks:
        tails.append(2 * t)
        heads.append(super_t)
        arc_caps.append(inf)
    if stats is not None:
        stats.add("flow_calls")
        stats.add("flow_edges", len(tails))
    value, reach, completed = _backend.solve(
        2 * n + 2, tails, heads, arc_caps, super_s, super_t, limit
    )
    if not completed:
        return limit, None, None, False
    if value >= inf:
        # Only possible via a direct source-sink adjacency the caller should
        # have screened; surface it as an invariant breach.
        raise InvariantError("no finite separator exists (adjacent terminals)")
    separator = [v for v in range(n) if reach[2 * v] and not reach[2 * v + 1]]
    sep_weight = sum(caps[v] for v in separator)
    assert sep_weight == value, "max-flow / min-separator duality violated"
    reach_orig = [bool(reach[2 * v + 1]) for v in range(n)]
    return value, separator, reach_orig, True


def vertex_max_flow(n, arcs, caps, sources, sinks, limit=None, stats=None):
    """Min vertex separator between vertex sets via one max-flow call.

    `arcs` are directed pairs over [0,n); `caps[v]` is v's removal cost and
    may be None for uncuttable vertices.  Terminal vertices are never part
    of the separator (flow bypasses their split arc).  Returns
    `(value, separator, reach, completed)` where `reach[v]` is true when v
    lies strictly on the source side; when `limit` is hit early the result
    is `(limit, None, None, False)`.
    """
    sources = sorted(set(sources))
    sinks = sorted(set(sinks))
    if set(sources) & set(sinks):
        raise InvariantError("source and sink sets overlap")
    finite = [c for c in caps if c is not None]
    inf = n * (max(finite) if finite else 1) + 1
    tails = [2 * v for v in range(n)]
    heads = [2 * v + 1 for v in range(n)]
    arc_caps = [inf if c is None else c for c in caps]
    for u, v in arcs:
        tails.append(2 * u + 1)
        heads.append(2 * v)
        arc_caps.append(inf)
    adjusted = [1 if c is None else c for c in caps]
    return _finish(n, tails, heads, arc_caps, adjusted, sources, sinks, inf, limit, stats)


_NETWORK_CACHE: dict = {}


def _graph_network(g):
    """Cached split network (tails, heads, caps, vertex caps, inf) for a
    whole-graph flow; graphs are immutable so this is safe to share."""
    key = id(g)
    got = _NETWORK_CACHE.get(key)
    if got is not None and got[0] is g:
        return got[1]
    if isinstance(g, Graph):
        caps = [1] * g.n
        arcs = g.flow_arcs()
    else:
        caps = list(g.weights)
        arcs = list(g.arcs())
    inf = g.n * max(caps, default=1) + 1
    tails = [2 * v for v in range(g.n)]
    heads = [2 * v + 1 for v in range(g.n)]
    arc_caps = list(caps)
    for u, v in arcs:
        tails.append(2 * u + 1)
        heads.append(2 * v)
        arc_caps.append(inf)
    entry = (tails, heads, arc_caps, caps, inf)
    if len(_NETWORK_CACHE) > 64:
        _NETWORK_CACHE.clear()
    _NETWORK_CACHE[key] = (g, entry)
    return entry


def _graph_flow(g, sources, sinks, limit=None, stats=None):
    tails, heads, arc_caps, caps, inf = _graph_network(g)
    return _finish(
        g.n, tails[:], heads[:], arc_caps[:], caps, sources, sinks, inf, limit, stats
    )


def min_st_separator(g, s, t, limit=None, stats=None):
    """Minimum (s,t) vertex separator; NoSeparator when t is adjacent to s.

    Returns (value, separator_tuple).  With `limit`, values >= limit come
    back as (limit, None) and are exact below it.
    """
    if s == t:
        raise InvariantError("s == t")
    adjacent = g.has_edge(s, t) if isinstance(g, Graph) else g.has_arc(s, t)
    if adjacent:
        return NoSeparator
    value, sep, _, completed = _graph_flow(g, [s], [t], limit=limit, stats=stats)
    if not completed:
        return value, None
    return value, tuple(sep)


def min_st_cut(g, s, t, limit=None, stats=None):
    """Like min_st_separator but returns the full (L,S,R) cut."""
    if s == t:
        raise InvariantError("s == t")
    adjacent = g.has_edge(s, t) if isinstance(g, Graph) else g.has_arc(s, t)
    if adjacent:
        return NoSeparator
    value, sep, reach, completed = _graph_flow(g, [s], [t], limit=limit, stats=stats)
    if not completed:
        return value, None
    left = {v for v in range(g.n) if reach[v]}
    sep_set = set(sep)
    right = set(range(g.n)) - left - sep_set
    return value, VertexCut(left, sep_set, right, value)


def min_s_to_set_separator(g: Graph, s: int, terminals, limit=None, stats=None):
    """Minimum separator between s and a super-sink attached to all of
    `terminals` (simultaneous separation; terminals are uncuttable).

    NoSeparator when some terminal is adjacent to s.
    """
    terminals = sorted(set(terminals))
    if not terminals:
        raise InvariantError("empty terminal set")
    if s in terminals:
        raise InvariantError("s in terminal set")
    nb = g.neighbor_set(s)
    if any(t in nb for t in terminals):
        return NoSeparator
    value, sep, _, completed = _graph_flow(g, [s], terminals, limit=limit, stats=stats)
    if not completed:
        return value, None
    return value, tuple(sep)


def rooted_connectivity(g: Graph, a: int, stats=None):
    """kappa(a) = min over t outside N[a] of kappa(a,t), with the achieving
    cut (A, C, B), a in A.  NoCut when N[a] covers the whole graph.
    """
    candidates = [t for t in range(g.n) if t != a and not g.has_edge(a, t)]
    if not candidates:
        return NoCut(g.n - 1)
    best_value = g.degree(a) + 1
    best_cut = None
    for t in candidates:
        res = min_st_cut(g, a, t, limit=best_value, stats=stats)
        if res is NoSeparator:
            continue
        value, cut = res
        if cut is not None and value < best_value:
            best_value = value
            best_cut = cut
    assert best_cut is not None  # N(a) always separates a from a non-neighbor
    return best_value, best_cut


def weak_separator(g: Graph, terminals, stats=None):
    """Minimum number of vertices, terminals included, whose removal leaves
    some terminal disconnected from some surviving non-terminal vertex.

    Realized through the rooted connectivity of a new vertex joined to all
    terminals, restricted to separators that keep a terminal alive on the
    near side (otherwise the candidate is not a vertex cut of g at all):
    each terminal v in turn is forced onto the near side by making it a
    second source.  The separator may intersect the terminal set.  NoCut
    when no candidate has a valid far side.
    """
    tset = sorted(set(terminals))
    if not tset or len(tset) >= g.n:
        raise InvariantError("terminal set must be a nonempty strict subset")
    aug = [list(row) for row in g.adj] + [list(tset)]
    for v in tset:
        aug[v] = sorted(set(aug[v]) | {g.n})
    gt = Graph(g.n + 1, aug)
    virtual = g.n
    best_value = None
    best_cut = None
    terminal_set = set(tset)
    for v in tset:
        blocked = gt.neighbor_set(v) | terminal_set | {v}
        for u in range(g.n):
            if u in blocked:
                continue
            limit = None if best_value is None else best_value
            value, sep, reach, completed = _graph_flow(
                gt, [virtual, v], [u], limit=limit, stats=stats
            )
            if not completed:
                continue
            if best_value is None or value < best_value:
                best_value = value
                left = {x for x in range(g.n) if reach[x]}
                sep_set = set(sep)
                right = set(range(g.n)) - left - sep_set
                best_cut = VertexCut(left, sep_set, right, value)
    if best_cut is None:
        return NoCut(g.n - 1)
    return best_value, best_cut
