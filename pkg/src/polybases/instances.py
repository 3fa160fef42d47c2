"""Concrete polymatroid families, instance generators and the instance JSON format."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import ConfigurationError, InputError, Polymatroid


@dataclass(frozen=True)
class HypergraphInstance:
    vertex_count: int
    hyperedges: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        edges = tuple(tuple(sorted(set(int(v) for v in e))) for e in self.hyperedges)
        object.__setattr__(self, "hyperedges", edges)
        for e in edges:
            if not e:
                raise ConfigurationError("hyperedges must be non-empty")
            if e[0] < 0 or e[-1] >= self.vertex_count:
                raise ConfigurationError(f"hyperedge {e} has vertices outside [0, {self.vertex_count})")

    @property
    def m(self) -> int:
        return len(self.hyperedges)

    def prefix(self, t: int) -> HypergraphInstance:
        return HypergraphInstance(self.vertex_count, self.hyperedges[:t])

    def sub(self, indices) -> HypergraphInstance:
        return HypergraphInstance(self.vertex_count, tuple(self.hyperedges[i] for i in indices))


@dataclass(frozen=True)
class GraphInstance:
    vertex_count: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        for u, v in edges:
            if u == v:
                raise ConfigurationError(f"self-loop ({u}, {v}) is not allowed")
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise ConfigurationError(f"edge ({u}, {v}) has endpoints outside [0, {self.vertex_count})")

    @property
    def m(self) -> int:
        return len(self.edges)

    def as_hypergraph(self) -> HypergraphInstance:
        return HypergraphInstance(self.vertex_count, self.edges)

    def sub(self, indices) -> GraphInstance:
        return GraphInstance(self.vertex_count, tuple(self.edges[i] for i in indices))


@dataclass(frozen=True)
class MatrixInstance:
    rows: tuple[tuple[int, ...], ...]
    dimension: int
    modulus: int

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        if not _is_prime(self.modulus):
            raise ConfigurationError(f"modulus {self.modulus} is not prime")
        for row in rows:
            if len(row) != self.dimension:
                raise ConfigurationError(f"row {row} does not have {self.dimension} entries")
            if any(not 0 <= x < self.modulus for x in row):
                raise ConfigurationError(f"row {row} has entries outside [0, {self.modulus})")

    @property
    def m(self) -> int:
        return len(self.rows)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def merges(vertex_count: int, edges, mask: int) -> int:
    """Number of successful unions when the selected edges are added: n - c(V, A)."""
    uf = _UnionFind(vertex_count)
    done = 0
    i = 0
    while mask:
        if mask & 1:
            e = edges[i]
            first = e[0]
            for v in e[1:]:
                done += uf.union(first, v)
        mask >>= 1
        i += 1
    return done


def components(vertex_count: int, edges) -> int:
    return vertex_count - merges(vertex_count, edges, (1 << len(edges)) - 1)


def coverage_oracle(h: HypergraphInstance, *, allow_partial_cover: bool = False) -> Polymatroid:
    vmasks = [sum(1 << v for v in e) for e in h.hyperedges]
    covered = 0
    for vm in vmasks:
        covered |= vm
    if covered != (1 << h.vertex_count) - 1 and not allow_partial_cover:
        raise ConfigurationError("hyperedges do not cover every vertex")

    def func(mask: int) -> int:
        cov = 0
        i = 0
        while mask:
            if mask & 1:
                cov |= vmasks[i]
            mask >>= 1
            i += 1
        return cov.bit_count()

    if h.vertex_count <= 64:
        def table_fn(k: int) -> np.ndarray:
            cov = np.zeros(1 << k, dtype=np.uint64)
            for j in range(k):
                lo = 1 << j
                cov[lo : 2 * lo] = cov[:lo] | np.uint64(vmasks[j])
            return np.bitwise_count(cov).astype(np.int64)
    else:
        table_fn = None

    return Polymatroid(h.m, func, rank=covered.bit_count(), table_fn=table_fn, name="coverage")


def connectivity_oracle(h: HypergraphInstance) -> Polymatroid:
    edges = h.hyperedges
    n = h.vertex_count
    return Polymatroid(h.m, lambda mask: merges(n, edges, mask), name="connectivity")


def graphic_oracle(g: GraphInstance) -> Polymatroid:
    edges = g.edges
    n = g.vertex_count
    return Polymatroid(g.m, lambda mask: merges(n, edges, mask), name="graphic")


def cographic_oracle(g: GraphInstance) -> Polymatroid:
    edges = g.edges
    n = g.vertex_count
    m = g.m
    full = (1 << m) - 1
    base = components(n, edges)

    def func(mask: int) -> int:
        rest_components = n - merges(n, edges, full & ~mask)
        return mask.bit_count() + base - rest_components

    return Polymatroid(m, func, name="cographic")


def gfp_rank(rows, p: int) -> int:
    basis: dict[int, list[int]] = {}  # pivot column -> normalized row
    for row in rows:
        v = list(row)
        for col, b in basis.items():
            c = v[col]
            if c:
                v = [(x - c * y) % p for x, y in zip(v, b)]
        pivot = next((i for i, x in enumerate(v) if x), None)
        if pivot is None:
            continue
        inv = pow(v[pivot], p - 2, p)
        v = [(x * inv) % p for x in v]
        for col, b in basis.items():
            c = b[pivot]
            if c:
                basis[col] = [(x - c * y) % p for x, y in zip(b, v)]
        basis[pivot] = v
    return len(basis)


def linear_oracle(mat: MatrixInstance) -> Polymatroid:
    rows = mat.rows
    p = mat.modulus

    def func(mask: int) -> int:
        chosen = [rows[i] for i in range(len(rows)) if mask >> i & 1]
        return gfp_rank(chosen, p)

    return Polymatroid(mat.m, func, name="linear_gfp")


def setcover_to_connectivity(h: HypergraphInstance) -> HypergraphInstance:
    """Add a hub vertex to every hyperedge; covers of V become connected spanning subhypergraphs."""
    hub = h.vertex_count
    return HypergraphInstance(hub + 1, tuple(e + (hub,) for e in h.hyperedges))


def generate_random_hypergraph(seed: int, n: int, m: int, edge_size_range=(1, 3)) -> HypergraphInstance:
    lo, hi = edge_size_range
    if n < 1 or lo < 1 or hi < lo:
        raise ConfigurationError("need n >= 1 and 1 <= min size <= max size")
    rng = np.random.default_rng(seed)
    edges = []
    for _ in range(m):
        size = int(rng.integers(lo, min(hi, n), endpoint=True)) if lo <= n else n
        edges.append(tuple(int(v) for v in rng.choice(n, size=size, replace=False)))
    return HypergraphInstance(n, tuple(edges))


def generate_random_graph(seed: int, n: int, m: int, *, connected: bool = True) -> GraphInstance:
    """Random multigraph; with ``connected`` the first n-1 edges form a random spanning tree."""
    if n < 2:
        raise ConfigurationError("a graph needs at least two vertices")
    rng = np.random.default_rng(seed)
    edges = []
    if connected:
        perm = [int(x) for x in rng.permutation(n)]
        for i in range(1, n):
            edges.append((perm[int(rng.integers(i))], perm[i]))
    while len(edges) < m:
        u, v = (int(x) for x in rng.choice(n, size=2, replace=False))
        edges.append((u, v))
    order = rng.permutation(len(edges))
    return GraphInstance(n, tuple(edges[i] for i in order))


def generate_random_matrix(seed: int, count: int, dimension: int, modulus: int = 2) -> MatrixInstance:
    rng = np.random.default_rng(seed)
    rows = []
    while len(rows) < count:
        row = tuple(int(x) for x in rng.integers(0, modulus, size=dimension))
        if any(row):
            rows.append(row)
    return MatrixInstance(tuple(rows), dimension, modulus)


def generate_parallel_path(segments) -> GraphInstance:
    """Path v0-v1-...-vk where segment i carries ``segments[i]`` parallel edges.

    Arrival order interleaves the segments round-robin, skipping exhausted ones.
    """
    segments = [int(k) for k in segments]
    if not segments or any(k <= 0 for k in segments):
        raise ConfigurationError("every segment needs a positive multiplicity")
    edges = []
    for copy in range(max(segments)):
        for i, k in enumerate(segments):
            if copy < k:
                edges.append((i, i + 1))
    return GraphInstance(len(segments) + 1, tuple(edges))


def generate_dense_multigraph(seed: int, n: int, multiplicity_range=(150, 250)) -> GraphInstance:
    """Complete multigraph on n vertices with random pair multiplicities, shuffled arrival."""
    rng = np.random.default_rng(seed)
    lo, hi = multiplicity_range
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            edges.extend([(u, v)] * int(rng.integers(lo, hi, endpoint=True)))
    order = rng.permutation(len(edges))
    return GraphInstance(n, tuple(edges[i] for i in order))


KINDS = ("coverage", "connectivity", "graphic", "cographic", "linear_gfp")
_GRAPH_KEYS = {"kind", "vertex_count", "edges", "label"}
_MATRIX_KEYS = {"kind", "dimension", "modulus", "rows", "label"}


@dataclass(frozen=True)
class InstanceSpec:
    """A polymatroid family member plus a label; the arrival order is the edge/row order."""

    kind: str
    data: HypergraphInstance | GraphInstance | MatrixInstance
    label: str = ""
    options: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigurationError(f"unknown instance kind {self.kind!r}")
        expected = {
            "coverage": HypergraphInstance,
            "connectivity": HypergraphInstance,
            "graphic": GraphInstance,
            "cographic": GraphInstance,
            "linear_gfp": MatrixInstance,
        }[self.kind]
        if not isinstance(self.data, expected):
            raise ConfigurationError(f"{self.kind} instances need a {expected.__name__}")

    @property
    def ground_size(self) -> int:
        return self.data.m

    @property
    def is_hypergraph_like(self) -> bool:
        return self.kind in ("connectivity", "graphic")

    def hypergraph(self) -> HypergraphInstance:
        if isinstance(self.data, GraphInstance):
            return self.data.as_hypergraph()
        if isinstance(self.data, HypergraphInstance):
            return self.data
        raise ConfigurationError(f"{self.kind} instance has no hypergraph view")

    def oracle(self) -> Polymatroid:
        if self.kind == "coverage":
            return coverage_oracle(self.data, **self.options)
        if self.kind == "connectivity":
            return connectivity_oracle(self.data)
        if self.kind == "graphic":
            return graphic_oracle(self.data)
        if self.kind == "cographic":
            return cographic_oracle(self.data)
        return linear_oracle(self.data)

    def to_json(self) -> dict:
        if self.kind == "linear_gfp":
            return {
                "kind": self.kind,
                "dimension": self.data.dimension,
                "modulus": self.data.modulus,
                "rows": [list(r) for r in self.data.rows],
                "label": self.label,
            }
        edges = self.data.hyperedges if isinstance(self.data, HypergraphInstance) else self.data.edges
        return {
            "kind": self.kind,
            "vertex_count": self.data.vertex_count,
            "edges": [list(e) for e in edges],
            "label": self.label,
        }

    @classmethod
    def from_json(cls, obj: dict) -> InstanceSpec:
        if not isinstance(obj, dict) or "kind" not in obj:
            raise ConfigurationError("instance JSON must be an object with a 'kind'")
        kind = obj["kind"]
        allowed = _MATRIX_KEYS if kind == "linear_gfp" else _GRAPH_KEYS
        unknown = set(obj) - allowed
        if unknown:
            raise ConfigurationError(f"unknown instance fields: {sorted(unknown)}")
        missing = allowed - {"label"} - set(obj)
        if missing:
            raise ConfigurationError(f"missing instance fields: {sorted(missing)}")
        label = obj.get("label", "")
        if not isinstance(label, str):
            raise ConfigurationError("label must be a string")
        if kind == "linear_gfp":
            data = MatrixInstance(tuple(map(tuple, obj["rows"])), int(obj["dimension"]), int(obj["modulus"]))
        elif kind in ("coverage", "connectivity"):
            data = HypergraphInstance(int(obj["vertex_count"]), tuple(map(tuple, obj["edges"])))
        elif kind in ("graphic", "cographic"):
            if any(len(e) != 2 for e in obj["edges"]):
                raise ConfigurationError("graph edges must be vertex pairs")
            data = GraphInstance(int(obj["vertex_count"]), tuple(map(tuple, obj["edges"])))
        else:
            raise ConfigurationError(f"unknown instance kind {kind!r}")
        return cls(kind, data, label)


def load_instance(path) -> InstanceSpec:
    with open(path) as fh:
        return InstanceSpec.from_json(json.load(fh))


def save_instance(spec: InstanceSpec, path) -> None:
    Path(path).write_text(json.dumps(spec.to_json(), indent=2, sort_keys=True) + "\n")


def random_instance(rng: np.random.Generator, kind: str, max_elements: int = 12) -> InstanceSpec:
    """Small random member of ``kind`` with at most ``max_elements`` ground elements."""
    seed = int(rng.integers(2**63))
    m = int(rng.integers(1, max_elements, endpoint=True))
    if kind == "coverage":
        n = int(rng.integers(1, 6, endpoint=True))
        h = generate_random_hypergraph(seed, n, m, (1, 3))
        return InstanceSpec(kind, h, options={"allow_partial_cover": True})
    if kind == "connectivity":
        n = int(rng.integers(2, 6, endpoint=True))
        return InstanceSpec(kind, generate_random_hypergraph(seed, n, m, (1, 3)))
    if kind in ("graphic", "cographic"):
        n = int(rng.integers(2, 6, endpoint=True))
        return InstanceSpec(kind, generate_random_graph(seed, n, max(m, n - 1)))
    if kind == "linear_gfp":
        d = int(rng.integers(1, 4, endpoint=True))
        p = int(rng.choice([2, 3]))
        return InstanceSpec(kind, generate_random_matrix(seed, m, d, p))
    raise InputError(f"unknown kind {kind!r}")


def random_corpus(seed: int, count: int, kinds=KINDS, max_elements: int = 12) -> list[InstanceSpec]:
    rng = np.random.default_rng(seed)
    return [random_instance(rng, kinds[i % len(kinds)], max_elements) for i in range(count)]


def degree(h: HypergraphInstance, v: int) -> int:
    return sum(v in e for e in h.hyperedges)


__all__ = [
    "GraphInstance",
    "HypergraphInstance",
    "InstanceSpec",
    "MatrixInstance",
    "coverage_oracle",
    "connectivity_oracle",
    "graphic_oracle",
    "cographic_oracle",
    "linear_oracle",
    "setcover_to_connectivity",
    "generate_random_hypergraph",
    "generate_random_graph",
    "generate_random_matrix",
    "generate_parallel_path",
    "generate_dense_multigraph",
    "load_instance",
    "save_instance",
    "random_instance",
    "random_corpus",
]
