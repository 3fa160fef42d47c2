import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from polybases.core import ConfigurationError, InputError, is_quotient, validate_polymatroid
from polybases.instances import (
    KINDS,
    GraphInstance,
    HypergraphInstance,
    InstanceSpec,
    MatrixInstance,
    cographic_oracle,
    connectivity_oracle,
    coverage_oracle,
    generate_dense_multigraph,
    generate_parallel_path,
    generate_random_graph,
    generate_random_hypergraph,
    generate_random_matrix,
    gfp_rank,
    graphic_oracle,
    linear_oracle,
    load_instance,
    random_corpus,
    save_instance,
    setcover_to_connectivity,
)
from polybases.quotients import opt_bruteforce, set_partitions

import oracles

K3 = GraphInstance(3, ((0, 1), (1, 2), (0, 2)))
seeds = st.integers(0, 2**32)


def test_coverage_examples():
    f = coverage_oracle(HypergraphInstance(2, ((0,), (0, 1), (1,))))
    assert f({0, 2}) == 2
    assert f(set()) == 0
    assert f.rank == 2


def test_coverage_requires_cover_unless_overridden():
    h = HypergraphInstance(3, ((0,), (1,)))
    with pytest.raises(ConfigurationError):
        coverage_oracle(h)
    assert coverage_oracle(h, allow_partial_cover=True).rank == 2


def test_connectivity_examples():
    f = connectivity_oracle(K3.as_hypergraph())
    assert f({0}) == 1
    assert f(set()) == 0
    path = connectivity_oracle(HypergraphInstance(3, ((0, 1), (1, 2))))
    assert path.rank == 2
    disconnected = connectivity_oracle(HypergraphInstance(4, ((0, 1), (2, 3))))
    assert disconnected.rank == 2


def test_graphic_examples():
    f = graphic_oracle(K3)
    g = connectivity_oracle(K3.as_hypergraph())
    assert all(f.value(m) == g.value(m) for m in range(8))
    assert f(set()) == 0
    assert graphic_oracle(GraphInstance(2, ((0, 1), (0, 1)))).rank == 1


def test_cographic_examples():
    f = cographic_oracle(K3)
    assert f({0}) == 1
    assert f(set()) == 0
    assert f.rank == 1


def test_linear_examples():
    f = linear_oracle(MatrixInstance(((1, 0), (0, 1), (1, 1)), 2, 2))
    assert f.rank == 2
    assert f(set()) == 0
    assert linear_oracle(MatrixInstance(((1, 0), (1, 0)), 2, 2)).rank == 1


def test_linear_rejects_composite_modulus():
    with pytest.raises(ConfigurationError):
        MatrixInstance(((1, 0),), 2, 4)
    with pytest.raises(ConfigurationError):
        MatrixInstance(((1, 5),), 2, 3)


def test_invalid_instances():
    with pytest.raises(ConfigurationError):
        HypergraphInstance(2, ((),))
    with pytest.raises(ConfigurationError):
        HypergraphInstance(2, ((0, 2),))
    with pytest.raises(ConfigurationError):
        GraphInstance(2, ((1, 1),))


def test_setcover_reduction_examples():
    out = setcover_to_connectivity(HypergraphInstance(2, ((0,), (1,))))
    assert out.vertex_count == 3 and out.hyperedges == ((0, 2), (1, 2))
    empty = setcover_to_connectivity(HypergraphInstance(2, ()))
    assert empty.vertex_count == 3 and empty.hyperedges == ()
    h = HypergraphInstance(2, ((0,), (0, 1), (1,)))
    assert opt_bruteforce(connectivity_oracle(setcover_to_connectivity(h))) == 2


@given(seeds)
def test_setcover_reduction_preserves_opt(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 4, endpoint=True))
    h = generate_random_hypergraph(seed, n, int(rng.integers(n, 7, endpoint=True)), (1, 2))
    if len({v for e in h.hyperedges for v in e}) < n:
        return
    assert opt_bruteforce(coverage_oracle(h)) == opt_bruteforce(connectivity_oracle(setcover_to_connectivity(h)))


def test_parallel_path():
    g = generate_parallel_path([2, 2])
    assert g.edges == ((0, 1), (1, 2), (0, 1), (1, 2))
    assert generate_parallel_path([1]).edges == ((0, 1),)
    g = generate_parallel_path([3, 1])
    assert g.edges == ((0, 1), (1, 2), (0, 1), (0, 1))
    with pytest.raises(ConfigurationError):
        generate_parallel_path([2, 0])
    with pytest.raises(ConfigurationError):
        generate_parallel_path([])


def test_generators_are_deterministic():
    a = generate_random_hypergraph(1, 5, 8, (1, 3))
    b = generate_random_hypergraph(1, 5, 8, (1, 3))
    assert json.dumps(InstanceSpec("coverage", a, options={}).to_json()) == json.dumps(InstanceSpec("coverage", b).to_json())
    assert len(a.hyperedges) == 8 and all(1 <= len(e) <= 3 for e in a.hyperedges)
    assert generate_random_graph(3, 5, 9) == generate_random_graph(3, 5, 9)
    assert generate_random_matrix(3, 5, 3, 3) == generate_random_matrix(3, 5, 3, 3)
    assert generate_dense_multigraph(2, 4) == generate_dense_multigraph(2, 4)


def test_random_graph_is_connected():
    for seed in range(20):
        g = generate_random_graph(seed, 5, 6)
        assert oracles.component_count(5, g.edges) == 1


def test_json_round_trip(tmp_path):
    specs = [
        InstanceSpec("graphic", K3, "K3"),
        InstanceSpec("connectivity", HypergraphInstance(3, ((0, 1, 2), (1,))), "h"),
        InstanceSpec("linear_gfp", MatrixInstance(((1, 2), (0, 1)), 2, 3), "m"),
    ]
    for spec in specs:
        path = tmp_path / f"{spec.label}.json"
        save_instance(spec, path)
        assert load_instance(path) == spec
        assert set(json.loads(path.read_text())) <= {"kind", "vertex_count", "edges", "label", "dimension", "modulus", "rows"}


def test_json_rejects_unknown_and_missing_fields():
    good = {"kind": "graphic", "vertex_count": 3, "edges": [[0, 1]], "label": "x"}
    assert InstanceSpec.from_json(good).data.edges == ((0, 1),)
    with pytest.raises(ConfigurationError):
        InstanceSpec.from_json({**good, "weights": [1]})
    with pytest.raises(ConfigurationError):
        InstanceSpec.from_json({"kind": "graphic", "edges": [[0, 1]]})
    with pytest.raises(ConfigurationError):
        InstanceSpec.from_json({**good, "kind": "matroid"})
    with pytest.raises(ConfigurationError):
        InstanceSpec.from_json({**good, "edges": [[0, 1, 2]]})


def test_spec_kind_must_match_data():
    with pytest.raises(ConfigurationError):
        InstanceSpec("graphic", HypergraphInstance(2, ((0, 1),)))


@given(seeds, st.sampled_from(KINDS))
def test_family_oracles_are_polymatroids(seed, kind):
    spec = random_corpus(seed, 1, (kind,), max_elements=10)[0]
    assert validate_polymatroid(spec.oracle())


@given(seeds)
def test_oracles_match_definitions(seed):
    rng = np.random.default_rng(seed)
    h = generate_random_hypergraph(seed, 4, 6, (1, 3))
    g = generate_random_graph(seed, 4, 6)
    mat = generate_random_matrix(seed, 5, 3, int(rng.choice([2, 3])))
    cov = coverage_oracle(h, allow_partial_cover=True)
    con = connectivity_oracle(h)
    gra = graphic_oracle(g)
    cog = cographic_oracle(g)
    lin = linear_oracle(mat)
    base = oracles.component_count(4, g.edges)
    for m in range(1 << 6):
        assert cov.value(m) == oracles.coverage_value(h.hyperedges, m)
        assert con.value(m) == oracles.connectivity_value(4, h.hyperedges, m)
        assert gra.value(m) == oracles.connectivity_value(4, g.edges, m)
        rest = [g.edges[i] for i in range(6) if not m >> i & 1]
        assert cog.value(m) == bin(m).count("1") + base - oracles.component_count(4, rest)
    for m in range(1 << 5):
        assert lin.value(m) == oracles.span_size_rank(mat.rows, mat.modulus, m)
    # the vectorized tables agree with single evaluations
    for f in (cov, con, gra, cog, lin):
        fresh = type(f)(f.n, f._func)
        assert list(f.table()) == [fresh.value(m) for m in range(1 << f.n)]


def test_gfp_rank():
    assert gfp_rank([(1, 1), (2, 2)], 3) == 1
    assert gfp_rank([(1, 2), (2, 1)], 3) == 1  # (2, 1) = 2 * (1, 2)
    assert gfp_rank([(1, 1), (1, 2)], 3) == 2
    assert gfp_rank([], 2) == 0


def _edges_of(mask):
    return oracles.bits(mask)


@given(seeds)
def test_coverage_quotients_are_unions_of_vertex_cuts(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 5, endpoint=True))
    h = generate_random_hypergraph(seed, n, int(rng.integers(1, 8, endpoint=True)), (1, 3))
    f = coverage_oracle(h, allow_partial_cover=True)
    star = [sum(1 << i for i, e in enumerate(h.hyperedges) if v in e) for v in range(n)]
    unions = set()
    for U in range(1 << n):
        q = 0
        for v in oracles.bits(U):
            q |= star[v]
        unions.add(q)
    assert set(oracles.quotients(f)) == unions


@given(seeds, st.booleans())
def test_connectivity_quotients_are_partition_cuts(seed, graph):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 5, endpoint=True))
    m = int(rng.integers(1, 8, endpoint=True))
    if graph:
        edges = generate_random_graph(seed, n, max(m, n - 1), connected=False).edges
    else:
        edges = generate_random_hypergraph(seed, n, m, (1, 3)).hyperedges
    f = connectivity_oracle(HypergraphInstance(n, edges))
    cuts = set()
    for labels in set_partitions(n):
        cuts.add(sum(1 << i for i, e in enumerate(edges) if len({labels[v] for v in e}) > 1))
    assert set(oracles.quotients(f)) == cuts


@given(seeds)
def test_cographic_quotients_are_unions_of_cycles(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 5, endpoint=True))
    g = generate_random_graph(seed, n, int(rng.integers(n - 1, 8, endpoint=True)))
    f = cographic_oracle(g)
    for q in range(1 << g.m):
        chosen = _edges_of(q)
        # every chosen edge lies on a cycle inside the chosen edges
        on_cycles = all(
            oracles.component_count(n, [g.edges[j] for j in chosen if j != i])
            == oracles.component_count(n, [g.edges[j] for j in chosen])
            for i in chosen
        )
        assert is_quotient(f, q) == on_cycles


def test_random_corpus_covers_kinds():
    corpus = random_corpus(5, 10)
    assert [s.kind for s in corpus] == list(KINDS) * 2
    assert all(s.ground_size <= 12 for s in corpus)


def test_unknown_kind_rejected():
    with pytest.raises(ConfigurationError):
        InstanceSpec("matroid", K3)
    with pytest.raises(InputError):
        random_corpus(0, 1, ("matroid",))
