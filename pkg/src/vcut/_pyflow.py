"""Pure-Python Dinic solver; semantic twin of the compiled vcut._core.

Both backends expose `solve(num_nodes, tails, heads, caps, s, t, limit)` and
return `(value, reach, completed)`:

- `value` is the max-flow value, or `limit` if augmentation stopped early,
- `reach` is the residual source-reachable node mask (bytes; only when
  completed, else None),
- `completed` says whether a maximum flow was actually reached.

The reach mask is the source side of the minimum cut closest to the source,
which is unique for a given network, so the two backends agree bit for bit.
"""

from __future__ import annotations

BACKEND_NAME = "python"


def solve(num_nodes, tails, heads, caps, s, t, limit):
    num_arcs = len(tails)
    to = [0] * (2 * num_arcs)
    cap = [0] * (2 * num_arcs)
    nxt = [-1] * (2 * num_arcs)
    head = [-1] * num_nodes
    for i in range(num_arcs):
        u, v, c = tails[i], heads[i], caps[i]
        a = 2 * i
        b = a + 1
        to[a] = v
        cap[a] = c
        nxt[a] = head[u]
        head[u] = a
        to[b] = u
        nxt[b] = head[v]
        head[v] = b

    level = [-1] * num_nodes
    it = [-1] * num_nodes
    queue = [0] * num_nodes
    flow = 0
    capped = limit is not None

    while not capped or flow < limit:
        for i in range(num_nodes):
            level[i] = -1
        level[s] = 0
        queue[0] = s
        qh, qt = 0, 1
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
        if level[t] < 0:
            break
        for i in range(num_nodes):
            it[i] = head[i]

        # Blocking flow: repeated DFS walks with current-arc pointers.
        path = []  # arc ids from s to the current node
        u = s
        while True:
            if u == t:
                pushed = min(cap[e] for e in path)
                if capped and flow + pushed > limit:
                    pushed = limit - flow
                for e in path:
                    cap[e] -= pushed
                    cap[e ^ 1] += pushed
                flow += pushed
                if capped and flow >= limit:
                    return limit, None, False
                # Retreat to just before the first saturated arc.
                cut_at = 0
                while cut_at < len(path) and cap[path[cut_at]] > 0:
                    cut_at += 1
                del path[cut_at:]
                u = s if not path else to[path[-1]]
                continue
            e = it[u]
            while e != -1 and not (cap[e] > 0 and level[to[e]] == level[u] + 1):
                e = nxt[e]
            it[u] = e
            if e != -1:
                path.append(e)
                u = to[e]
            else:
                level[u] = -1
                if not path:
                    break
                dead = path.pop()
                u = s if not path else to[path[-1]]
                it[u] = nxt[dead]

    reach = bytearray(num_nodes)
    reach[s] = 1
    queue[0] = s
    qh, qt = 0, 1
    while qh < qt:
        u = queue[qh]
        qh += 1
        e = head[u]
        while e != -1:
            v = to[e]
            if cap[e] > 0 and not reach[v]:
                reach[v] = 1
                queue[qt] = v
                qt += 1
            e = nxt[e]
    return flow, bytes(reach), True
