"""Exact integer maximum flow (Dinic's blocking-flow algorithm)."""

from collections import deque
from dataclasses import dataclass, field

from .errors import InputError


@dataclass
class FlowNetwork:
    """Capacitated network on nodes ``0..num_nodes-1``.

    Arcs keep their insertion index so flows can be mapped back to the
    objects they were built from.
    """

    num_nodes: int
    source: int
    sink: int
    arcs: list = field(default_factory=list)  # (tail, head, capacity)

    def add_arc(self, tail, head, capacity):
        if capacity < 0:
            raise InputError(f"negative capacity {capacity} on {tail}->{head}")
        if not (0 <= tail < self.num_nodes and 0 <= head < self.num_nodes):
            raise InputError(f"arc {tail}->{head} outside node range")
        self.arcs.append((tail, head, int(capacity)))
        return len(self.arcs) - 1


@dataclass(frozen=True)
class MaxFlowResult:
    value: int
    flow: tuple  # per network arc
    min_cut: frozenset  # nodes reachable from the source in the residual graph


def max_flow(net, limit=None):
    """Maximum ``source -> sink`` flow.

    With ``limit`` set, augmentation stops once the value reaches it; the
    returned cut is then only meaningful when ``value < limit``.
    """
    n = net.num_nodes
    s, t = net.source, net.sink
    if s == t:
        raise InputError("source equals sink")
    # residual graph: edge list with paired reverse edges
    head, cap, adj = [], [], [[] for _ in range(n)]
    for (u, v, c) in net.arcs:
        adj[u].append(len(head))
        head.append(v)
        cap.append(c)
        adj[v].append(len(head))
        head.append(u)
        cap.append(0)

    big = sum(c for (_, _, c) in net.arcs) + 1
    total = 0
    while limit is None or total < limit:
        level = [-1] * n
        level[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for e in adj[u]:
                if cap[e] > 0 and level[head[e]] < 0:
                    level[head[e]] = level[u] + 1
                    queue.append(head[e])
        if level[t] < 0:
            break
        it = [0] * n

        def push(u, pushed):
            if u == t:
                return pushed
            edges = adj[u]
            while it[u] < len(edges):
                e = edges[it[u]]
                v = head[e]
                if cap[e] > 0 and level[v] == level[u] + 1:
                    got = push(v, min(pushed, cap[e]))
                    if got:
                        cap[e] -= got
                        cap[e ^ 1] += got
                        return got
                it[u] += 1
            return 0

        while limit is None or total < limit:
            got = push(s, big if limit is None else limit - total)
            if not got:
                break
            total += got

    seen = {s}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for e in adj[u]:
            if cap[e] > 0 and head[e] not in seen:
                seen.add(head[e])
                queue.append(head[e])
    flow = tuple(cap[2 * i + 1] for i in range(len(net.arcs)))
    return MaxFlowResult(total, flow, frozenset(seen))
