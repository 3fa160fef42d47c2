"""Exact integer max-flow (Dinic) and the min-cut helpers built on it.

Parallel edges are aggregated into capacities before the flow runs, so the
cost depends on the number of distinct vertex pairs / hyperedges, not on
multiplicities.  Augmentation order is fixed by insertion order, which keeps
results reproducible.
"""

from __future__ import annotations

from collections import Counter, deque

INF = float("inf")


class FlowNetwork:
    def __init__(self, size: int):
        self.size = size
        self.head: list[list[int]] = [[] for _ in range(size)]
        self.to: list[int] = []
        self.cap: list[float] = []

    def add_arc(self, u: int, v: int, cap: float, rev_cap: float = 0) -> None:
        self.head[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(cap)
        self.head[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(rev_cap)

    def add_edge(self, u: int, v: int, cap: float) -> None:
        """Undirected edge: capacity ``cap`` in both directions."""
        self.add_arc(u, v, cap, cap)

    def _levels(self, s: int, t: int):
        level = [-1] * self.size
        level[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for a in self.head[u]:
                v = self.to[a]
                if self.cap[a] > 0 and level[v] < 0:
                    level[v] = level[u] + 1
                    queue.append(v)
        return level if level[t] >= 0 else None

    def max_flow(self, s: int, t: int) -> float:
        if s == t:
            raise ValueError("source and sink coincide")
        total = 0
        while (level := self._levels(s, t)) is not None:
            it = [0] * self.size
            while True:
                pushed = self._push(s, t, INF, level, it)
                if not pushed:
                    break
                total += pushed
        return total

    def _push(self, s, t, limit, level, it):
        # iterative DFS over the level graph
        path: list[int] = []
        u = s
        while True:
            if u == t:
                amount = min(self.cap[a] for a in path)
                for a in path:
                    self.cap[a] -= amount
                    self.cap[a ^ 1] += amount
                return amount
            advanced = False
            arcs = self.head[u]
            while it[u] < len(arcs):
                a = arcs[it[u]]
                v = self.to[a]
                if self.cap[a] > 0 and level[v] == level[u] + 1:
                    path.append(a)
                    u = v
                    advanced = True
                    break
                it[u] += 1
            if advanced:
                continue
            if not path:
                return 0
            level[u] = -1  # dead end
            a = path.pop()
            u = self.to[a ^ 1]
            it[u] += 1


def graph_min_cut(vertex_count: int, edges, s: int, t: int) -> int:
    """Minimum number of edges separating ``s`` from ``t`` in an undirected multigraph."""
    net = FlowNetwork(vertex_count)
    for (u, v), mult in Counter(tuple(sorted(e)) for e in edges).items():
        net.add_edge(u, v, mult)
    return int(net.max_flow(s, t))


def hypergraph_min_cut(vertex_count: int, hyperedges, s: int, t: int) -> int:
    """Minimum number of hyperedges whose removal separates ``s`` from ``t``.

    Each distinct hyperedge becomes an entry/exit node pair joined by an arc
    whose capacity is the hyperedge's multiplicity; members connect to it with
    unbounded arcs.
    """
    grouped = Counter(tuple(sorted(e)) for e in hyperedges if len(e) > 1)
    net = FlowNetwork(vertex_count + 2 * len(grouped))
    for i, (e, mult) in enumerate(grouped.items()):
        enter = vertex_count + 2 * i
        leave = enter + 1
        net.add_arc(enter, leave, mult)
        for v in e:
            net.add_arc(v, enter, INF)
            net.add_arc(leave, v, INF)
    return int(net.max_flow(s, t))
