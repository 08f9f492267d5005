# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Dinic solver for the vertex-split flow networks.

Semantic twin of vcut._pyflow.solve; see that module for the contract.
"""

from libc.stdlib cimport malloc, free

BACKEND_NAME = "cython"


def solve(num_nodes, tails, heads, caps, s, t, limit):
    cdef Py_ssize_t n = num_nodes
    cdef Py_ssize_t num_arcs = len(tails)
    cdef Py_ssize_t i
    cdef long long limit_val
    cdef bint capped = limit is not None
    limit_val = <long long> limit if capped else 0

    cdef long long *cap = <long long *> malloc(2 * num_arcs * sizeof(long long))
    cdef Py_ssize_t *to = <Py_ssize_t *> malloc(2 * num_arcs * sizeof(Py_ssize_t))
    cdef Py_ssize_t *nxt = <Py_ssize_t *> malloc(2 * num_arcs * sizeof(Py_ssize_t))
    cdef Py_ssize_t *head = <Py_ssize_t *> malloc(n * sizeof(Py_ssize_t))
    cdef Py_ssize_t *level = <Py_ssize_t *> malloc(n * sizeof(Py_ssize_t))
    cdef Py_ssize_t *it = <Py_ssize_t *> malloc(n * sizeof(Py_ssize_t))
    cdef Py_ssize_t *queue = <Py_ssize_t *> malloc(n * sizeof(Py_ssize_t))
    cdef Py_ssize_t *path = <Py_ssize_t *> malloc((n + 1) * sizeof(Py_ssize_t))
    if cap == NULL or to == NULL or nxt == NULL or head == NULL \
            or level == NULL or it == NULL or queue == NULL or path == NULL:
        free(<void *> cap)
        free(<void *> to)
        free(<void *> nxt)
        free(<void *> head)
        free(<void *> level)
        free(<void *> it)
        free(<void *> queue)
        free(<void *> path)
        raise MemoryError()

    cdef Py_ssize_t u, v, e, a, b, qh, qt, cut_at, path_len, src = s, snk = t
    cdef long long c, flow = 0, pushed

    try:
        for i in range(n):
            head[i] = -1
        for i in range(num_arcs):
            u = tails[i]
            v = heads[i]
            c = caps[i]
            a = 2 * i
            b = a + 1
            to[a] = v
            cap[a] = c
            nxt[a] = head[u]
            head[u] = a
            to[b] = u
            cap[b] = 0
            nxt[b] = head[v]
            head[v] = b

        while (not capped) or flow < limit_val:
            for i in range(n):
                level[i] = -1
            level[src] = 0
            queue[0] = src
            qh = 0
            qt = 1
            while qh < qt:
                u = queue[qh]
                qh += 1
                e = head[u]
                while e != -1:
                    v = to[e]
                    if cap[e] > 0 and level[v] < 0:
                        level[v] = level[u] + 1
                        queue[qt] = v
                        qt += 1
                    e = nxt[e]
            if level[snk] < 0:
                break
            for i in range(n):
                it[i] = head[i]

            path_len = 0
            u = src
            while True:
                if u == snk:
                    pushed = cap[path[0]]
                    for i in range(1, path_len):
                        if cap[path[i]] < pushed:
                            pushed = cap[path[i]]
                    if capped and flow + pushed > limit_val:
                        pushed = limit_val - flow
                    for i in range(path_len):
                        e = path[i]
                        cap[e] -= pushed
                        cap[e ^ 1] += pushed
                    flow += pushed
                    if capped and flow >= limit_val:
                        return limit, None, False
                    cut_at = 0
                    while cut_at < path_len and cap[path[cut_at]] > 0:
                        cut_at += 1
                    path_len = cut_at
                    u = src if path_len == 0 else to[path[path_len - 1]]
                    continue
                e = it[u]
                while e != -1 and not (cap[e] > 0 and level[to[e]] == level[u] + 1):
                    e = nxt[e]
                it[u] = e
                if e != -1:
                    path[path_len] = e
                    path_len += 1
                    u = to[e]
                else:
                    level[u] = -1
                    if path_len == 0:
                        break
                    path_len -= 1
                    e = path[path_len]
                    u = src if path_len == 0 else to[path[path_len - 1]]
                    it[u] = nxt[e]

        reach = bytearray(n)
        level[src] = 1
        for i in range(n):
            level[i] = 0
        level[src] = 1
        queue[0] = src
        qh = 0
        qt = 1
        while qh < qt:
            u = queue[qh]
            qh += 1
            e = head[u]
            while e != -1:
                v = to[e]
                if cap[e] > 0 and level[v] == 0:
                    level[v] = 1
                    queue[qt] = v
                    qt += 1
                e = nxt[e]
        for i in range(n):
            reach[i] = 1 if level[i] else 0
        return flow, bytes(reach), True
    finally:
        free(<void *> cap)
        free(<void *> to)
        free(<void *> nxt)
        free(<void *> head)
        free(<void *> level)
        free(<void *> it)
        free(<void *> queue)
        free(<void *> path)
