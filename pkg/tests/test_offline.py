import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from polybases.core import CapacityError, InputError, Polymatroid
from polybases.instances import (
    GraphInstance,
    HypergraphInstance,
    connectivity_oracle,
    generate_parallel_path,
    generate_random_graph,
    generate_random_hypergraph,
    graphic_oracle,
)
from polybases.offline import (
    ccv_offline,
    cut_size,
    global_min_cut,
    sampling_frequency,
    sampling_probability,
    sampling_trial,
    weak_partition_connectivity,
)
from polybases.online import count_base_colors, make_rng, mix64
from polybases.quotients import k_star_partition

import oracles

K3 = GraphInstance(3, ((0, 1), (1, 2), (0, 2)))
seeds = st.integers(0, 2**32)


def test_ccv_offline_examples():
    f = graphic_oracle(K3)
    out = ccv_offline(f, make_rng(0))
    assert out.colors == [1, 1, 1]
    assert count_base_colors(f, out) == 1
    g = graphic_oracle(generate_parallel_path([200, 200]))
    runs = [count_base_colors(g, ccv_offline(g, make_rng(mix64(0, i)), k_star=200)) for i in range(500)]
    assert np.mean(runs) >= 1
    assert ccv_offline(g, make_rng(4), 200).colors == ccv_offline(g, make_rng(4), 200).colors


def test_ccv_offline_capacity_propagates():
    f = Polymatroid(23, lambda m: min(bin(m).count("1"), 2))
    with pytest.raises(CapacityError):
        ccv_offline(f, make_rng(0))


def test_sampling_examples():
    f = graphic_oracle(K3)
    assert sampling_trial(f, make_rng(0), p=1.0)
    assert not sampling_trial(f, make_rng(0), p=0.0)
    g = graphic_oracle(generate_parallel_path([150, 150]))
    assert sampling_probability(g, 150) == pytest.approx(2 / 150)
    with pytest.raises(InputError):
        sampling_probability(graphic_oracle(GraphInstance(2, ((0, 1),))), 1)


def test_sampling_frequency_small():
    g = graphic_oracle(generate_parallel_path([40, 40]))
    freq = sampling_frequency(g, 2000, master_seed=3, k_star=40)
    assert freq >= 0.5 - 3 * math.sqrt(0.25 / 2000)
    assert freq == sampling_frequency(g, 2000, master_seed=3, k_star=40)


@given(seeds)
def test_sampling_lemma_on_random_graphs(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 5, endpoint=True))
    base = generate_random_graph(seed, n, n + 2)
    g = GraphInstance(n, base.edges * 12)
    f = graphic_oracle(g)
    p = sampling_probability(f, k_star_partition(g.as_hypergraph()))
    if p >= 1:
        return
    trials = 800
    assert sampling_frequency(f, trials, seed, p=p) >= 0.5 - 3 * math.sqrt(0.25 / trials)


def test_global_min_cut_examples():
    assert global_min_cut(K3.as_hypergraph()) == 2
    assert global_min_cut(HypergraphInstance(4, ((0, 1), (2, 3)))) == 0
    for k1, k2 in ((3, 5), (6, 2), (4, 4)):
        g = generate_parallel_path([k1, k2]).as_hypergraph()
        assert global_min_cut(g) == global_min_cut(g, "flow") == min(k1, k2)
    with pytest.raises(InputError):
        global_min_cut(HypergraphInstance(1, ((0,),)))
    with pytest.raises(InputError):
        global_min_cut(K3.as_hypergraph(), "guess")
    with pytest.raises(CapacityError):
        global_min_cut(HypergraphInstance(21, ((0, 1),)))


def test_cut_size():
    h = HypergraphInstance(3, ((0, 1, 2), (0,), (1, 2)))
    assert cut_size(h, 0b001) == 1
    assert cut_size(h, 0b010) == 2


@given(seeds)
def test_min_cut_methods_agree(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 7, endpoint=True))
    h = generate_random_hypergraph(seed, n, int(rng.integers(0, 12, endpoint=True)), (1, 4))
    expected = oracles.min_cut(n, h.hyperedges)
    assert global_min_cut(h, "enumerate") == global_min_cut(h, "flow") == expected


def test_weak_partition_connectivity_examples():
    assert weak_partition_connectivity(K3.as_hypergraph()) == 1
    assert weak_partition_connectivity(HypergraphInstance(2, ((0, 1),))) == 1


@given(seeds)
def test_weak_partition_connectivity_bracketed_by_min_cut(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 5, endpoint=True))
    h = generate_random_hypergraph(seed, n, int(rng.integers(n, 10, endpoint=True)), (2, 4))
    if oracles.component_count(n, h.hyperedges) != 1:
        return
    lam = global_min_cut(h)
    k = weak_partition_connectivity(h)
    assert math.ceil(lam / 2) <= k <= lam
    assert k == oracles.k_star(connectivity_oracle(h))
