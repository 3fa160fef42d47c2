"""Quotient-based quantities: q_t, q*, k*, and brute-force opt.

The generic routines enumerate closed sets from an exhaustive value table and
are limited to small ground sets.  The family-specific solvers compute the
same numbers through flows, degrees or shortest paths.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass

import numpy as np

from .core import (
    MAX_TABLE_BITS,
    CapacityError,
    InputError,
    Polymatroid,
    closed_flags,
    popcounts,
)
from .flow import graph_min_cut, hypergraph_min_cut
from .instances import GraphInstance, HypergraphInstance, _UnionFind

MAX_OPT_ELEMENTS = 14
MAX_PARTITION_VERTICES = 10

METHODS = (
    "generic_bruteforce",
    "graphic_mincut",
    "coverage_mindegree",
    "connectivity_pairwise_mincut",
    "cographic_shortest_cycle",
)


@dataclass(frozen=True)
class EstimatorValue:
    value: int
    method: str

    def __post_init__(self):
        if self.value < 1:
            raise ValueError(f"estimator value must be positive, got {self.value}")
        if self.method not in METHODS:
            raise ValueError(f"unknown estimator method {self.method!r}")


def _guard(n: int, limit: int, what: str) -> None:
    if n > limit:
        raise CapacityError(f"{what}: ground set of {n} elements exceeds brute-force limit {limit}")


def min_quotient_from_table(values: np.ndarray, k: int, e: int) -> int:
    """Smallest quotient of the k-element function ``values`` that contains ``e``.

    Equals ``k - max{|C| : C closed, e not in C}``.
    """
    if values[1 << e] == 0:
        raise InputError(f"element {e} has zero value; no quotient contains it")
    closed = closed_flags(values, k)
    idx = np.arange(1 << k, dtype=np.int64)
    candidates = closed & ((idx >> e) & 1 == 0)
    return k - int(popcounts(k)[candidates].max())


def min_quotient_containing(f_t: Polymatroid, e_t: int) -> EstimatorValue:
    if not 0 <= e_t < f_t.n:
        raise InputError(f"element {e_t} outside ground set [0, {f_t.n})")
    _guard(f_t.n, MAX_TABLE_BITS, "min_quotient_containing")
    value = min_quotient_from_table(f_t.table(), f_t.n, e_t)
    return EstimatorValue(value, "generic_bruteforce")


class GenericQSolver:
    """q_t for the element arriving at index ``t`` of ``f`` (indices are arrival order).

    Only the prefix table ``f`` restricted to elements ``0..t`` is consulted.
    """

    method = "generic_bruteforce"

    def __init__(self, f: Polymatroid):
        self.f = f
        self._cache: dict[int, EstimatorValue] = {}

    def __call__(self, t: int) -> EstimatorValue:
        if t not in self._cache:
            _guard(t + 1, MAX_TABLE_BITS, "generic q_t")
            value = min_quotient_from_table(self.f.prefix_table(t + 1), t + 1, t)
            self._cache[t] = EstimatorValue(value, self.method)
        return self._cache[t]


def q_t_graphic(g: GraphInstance, t: int) -> EstimatorValue:
    u, v = g.edges[t]
    return EstimatorValue(graph_min_cut(g.vertex_count, g.edges[: t + 1], u, v), "graphic_mincut")


def q_t_coverage(h: HypergraphInstance, t: int) -> EstimatorValue:
    arrived = h.hyperedges[: t + 1]
    counts = Counter(v for e in arrived for v in e)
    return EstimatorValue(min(counts[u] for u in h.hyperedges[t]), "coverage_mindegree")


def q_t_connectivity(h: HypergraphInstance, t: int) -> EstimatorValue:
    e_t = h.hyperedges[t]
    if len(e_t) < 2:
        raise InputError(
            f"hyperedge {t} is a single vertex: it has zero value in the connectivity "
            "polymatroid and lies in no quotient"
        )
    arrived = h.hyperedges[: t + 1]
    # A cut separating some pair of e_t separates e_t[0] from some other member.
    anchor = e_t[0]
    best = min(hypergraph_min_cut(h.vertex_count, arrived, anchor, v) for v in e_t[1:])
    return EstimatorValue(best, "connectivity_pairwise_mincut")


def q_t_cographic(g: GraphInstance, t: int) -> EstimatorValue:
    """Shortest cycle through edge t in G with all not-yet-arrived edges contracted.

    Restricting the cographic matroid of G to the arrived edges gives the
    cographic matroid of that contraction.
    """
    n = g.vertex_count
    uf = _UnionFind(n)
    for a, b in g.edges[t + 1 :]:
        uf.union(a, b)
    u, v = (uf.find(x) for x in g.edges[t])
    if u == v:
        return EstimatorValue(1, "cographic_shortest_cycle")
    adj: dict[int, list[int]] = {}
    for a, b in g.edges[:t]:
        a, b = uf.find(a), uf.find(b)
        if a != b:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
    dist = {u: 0}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        for y in adj.get(x, ()):
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    if v not in dist:
        raise InputError(f"edge {t} is a bridge of the contracted graph; it has zero cographic value")
    return EstimatorValue(dist[v] + 1, "cographic_shortest_cycle")


class FamilyQSolver:
    """Bind one of the specialized q_t routines to an instance, memoizing per timestep."""

    def __init__(self, func, data):
        self.func = func
        self.data = data
        self._cache: dict[int, EstimatorValue] = {}

    def __call__(self, t: int) -> EstimatorValue:
        if t not in self._cache:
            self._cache[t] = self.func(self.data, t)
        return self._cache[t]


def specialized_q_solver(spec):
    """Specialized q_t solver for an InstanceSpec, or None if its family has none."""
    table = {
        "graphic": q_t_graphic,
        "coverage": q_t_coverage,
        "connectivity": q_t_connectivity,
        "cographic": q_t_cographic,
    }
    func = table.get(spec.kind)
    return None if func is None else FamilyQSolver(func, spec.data)


def min_nonempty_quotient(f: Polymatroid) -> int:
    _guard(f.n, MAX_TABLE_BITS, "min_nonempty_quotient")
    F = f.table()
    closed = closed_flags(F, f.n)
    closed[f.full_mask] = False
    if not closed.any():
        raise InputError("no non-empty quotient exists (every element has zero value)")
    return f.n - int(popcounts(f.n)[closed].max())


def _k_star_terms(F: np.ndarray, n: int) -> np.ndarray:
    """For every mask A, the sum over e of f(A+e) - f(A)."""
    idx = np.arange(1 << n, dtype=np.int64)
    total = np.zeros(1 << n, dtype=np.int64)
    for e in range(n):
        bit = 1 << e
        m = idx[(idx & bit) == 0]
        total[m] += F[m | bit] - F[m]
    return total


def k_star(f: Polymatroid, *, closed_only: bool = True) -> int:
    """min over A with f(A) < r of floor(sum_e f_A(e) / (r - f(A))).

    Closed sets suffice for the minimum; ``closed_only=False`` scans every
    subset and is kept as a cross-check.
    """
    r = f.rank
    if r < 1:
        raise InputError("k* needs rank >= 1")
    _guard(f.n, MAX_TABLE_BITS, "k_star")
    F = f.table()
    eligible = F < r
    if closed_only:
        eligible &= closed_flags(F, f.n)
    total = _k_star_terms(F, f.n)[eligible]
    return int((total // (r - F[eligible])).min())


def set_partitions(n: int):
    """Yield restricted-growth label tuples for every partition of ``range(n)``."""
    labels = [0] * n

    def rec(i, top):
        if i == n:
            yield tuple(labels)
            return
        for c in range(top + 2):
            labels[i] = c
            yield from rec(i + 1, max(top, c))

    if n == 0:
        yield ()
        return
    yield from rec(1, 0)


def k_star_partition(h: HypergraphInstance) -> int:
    """k* of the connectivity polymatroid via min over vertex partitions.

    For a connected hypergraph this is
    ``min_P floor(sum_e (parts hit by e - 1) / (|P| - 1))``; graphs are the
    2-uniform case (Nash-Williams/Tutte).
    """
    from .instances import components

    n = h.vertex_count
    if n < 2:
        raise InputError("need at least two vertices")
    if n > MAX_PARTITION_VERTICES:
        raise CapacityError(f"partition enumeration over {n} vertices exceeds {MAX_PARTITION_VERTICES}")
    if components(n, h.hyperedges) != 1:
        raise InputError("partition formula for k* requires a connected hypergraph")
    grouped = Counter(e for e in h.hyperedges if len(e) > 1)
    best = None
    for labels in set_partitions(n):
        parts = max(labels) + 1
        if parts < 2:
            continue
        cross = sum(mult * (len({labels[v] for v in e}) - 1) for e, mult in grouped.items())
        value = cross // (parts - 1)
        if best is None or value < best:
            best = value
    return best


def k_star_coverage(h: HypergraphInstance) -> int:
    """k* of a covering coverage function: the minimum vertex degree."""
    counts = Counter(v for e in h.hyperedges for v in e)
    if len(counts) < h.vertex_count:
        raise InputError("min-degree formula needs every vertex covered")
    return min(counts.values())


def opt_bruteforce(f: Polymatroid) -> int:
    """Maximum number of pairwise disjoint bases, by backtracking.

    Colors are tried downward from k*, which bounds opt from above.  Elements
    may stay uncolored; an element is never added to a color that is already a
    base or to which it adds no value.
    """
    n = f.n
    _guard(n, MAX_OPT_ELEMENTS, "opt_bruteforce")
    r = f.rank
    if r == 0:
        return n
    F = f.table()
    full = f.full_mask
    for k in range(k_star(f), 0, -1):
        if _packable(F, n, r, k, full):
            return k
    return 0


def _packable(F, n, r, k, full) -> bool:
    sets = [0] * k

    def rec(i: int, used: int) -> bool:
        if all(F[s] == r for s in sets):
            return True
        if i == n:
            return False
        rest = full & ~((1 << i) - 1)
        for j in range(used):
            if F[sets[j]] < r and F[sets[j] | rest] < r:
                return False
        if used < k and F[rest] < r:
            return False
        bit = 1 << i
        for j in range(min(used + 1, k)):
            s = sets[j]
            if F[s] == r or F[s | bit] == F[s]:
                continue
            sets[j] = s | bit
            found = rec(i + 1, max(used, j + 1))
            sets[j] = s
            if found:
                return True
        return rec(i + 1, used)

    return rec(0, 0)


def q_trace(f: Polymatroid) -> list[int]:
    """Generic q_t for every arrival of ``f``; every element must have positive value."""
    solver = GenericQSolver(f)
    return [solver(t).value for t in range(f.n)]


__all__ = [
    "EstimatorValue",
    "GenericQSolver",
    "FamilyQSolver",
    "min_quotient_containing",
    "q_t_graphic",
    "q_t_coverage",
    "q_t_connectivity",
    "q_t_cographic",
    "specialized_q_solver",
    "min_nonempty_quotient",
    "k_star",
    "k_star_partition",
    "k_star_coverage",
    "opt_bruteforce",
    "set_partitions",
    "q_trace",
]
