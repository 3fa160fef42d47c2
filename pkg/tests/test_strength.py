import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from polybases.core import CapacityError, InputError, Polymatroid, is_closed, loops, restrict
from polybases.instances import HypergraphInstance, coverage_oracle
from polybases.quotients import min_quotient_containing
from polybases.strength import (
    SetFunction,
    check_decomposition,
    eta_estimate,
    exhaustive_minimizer,
    strength_decomposition,
    strength_decomposition_exhaustive,
    strength_ratio,
)

from conftest import small_instance
import oracles

seeds = st.integers(0, 2**32)
kinds = st.sampled_from(["coverage", "connectivity", "graphic", "cographic", "linear_gfp"])
DOUBLE_A = coverage_oracle(HypergraphInstance(2, ((0,), (0,), (1,))))


def loopless(f):
    return restrict(f, [e for e in range(f.n) if e not in loops(f)])


def test_strength_ratio_examples():
    free = Polymatroid(3, lambda m: bin(m).count("1"))
    assert strength_ratio(free, set(), {0, 1, 2}) == 1
    assert strength_ratio(free, {0}, {0}) == math.inf
    assert strength_ratio(DOUBLE_A, {0, 1}, {0, 1, 2}) == 1
    with pytest.raises(InputError):
        strength_ratio(free, {0, 1}, {0})


def test_decomposition_example():
    dec = strength_decomposition(DOUBLE_A)
    assert dec.chain == (frozenset({0, 1, 2}), frozenset({0, 1}), frozenset())
    assert dec.ratios == (1, 2)
    assert all(isinstance(r, Fraction) for r in dec.ratios)
    assert dec.values == (2, 1, 0)
    assert dec.level == (2, 2, 1)
    assert dec.depth == 2


def test_single_element():
    f = Polymatroid(1, lambda m: min(bin(m).count("1"), 1))
    dec = strength_decomposition(f)
    assert dec.chain == (frozenset({0}), frozenset())
    assert eta_estimate(f, dec, 0) == 1


def test_eta_example():
    dec = strength_decomposition(DOUBLE_A)
    assert eta_estimate(DOUBLE_A, dec, 2) == 1
    assert eta_estimate(DOUBLE_A, dec, 0) == Fraction(3, 2)
    with pytest.raises(InputError):
        eta_estimate(DOUBLE_A, dec, 3)


def test_requires_positive_elements():
    f = Polymatroid(2, lambda m: m & 1)
    with pytest.raises(InputError):
        strength_decomposition(f)
    with pytest.raises(InputError):
        strength_decomposition_exhaustive(f)


def test_empty_ground_set():
    dec = strength_decomposition(Polymatroid(0, lambda m: 0))
    assert dec.masks == (0,) and dec.ratios == ()


def test_minimizer_returns_minimal_minimizer():
    values = np.array([0, 0, 0, 0, 1, -1, -1, -1], dtype=np.int64)
    # minimizers are {0,2}, {1,2}, {0,1,2}; their meet {2} is not a minimizer
    with pytest.raises(ValueError):
        exhaustive_minimizer(SetFunction(3, None, values))
    values = np.array([0, -1, 0, -1, 0, -1, 0, -1], dtype=np.int64)
    assert exhaustive_minimizer(SetFunction(3, None, values)) == (-1, 1)
    lazy = SetFunction(2, lambda m: -bin(m).count("1"))
    assert exhaustive_minimizer(lazy) == (-2, 3)


def test_minimizer_capacity():
    with pytest.raises(CapacityError):
        exhaustive_minimizer(SetFunction(23, lambda m: 0))


def test_pluggable_minimizer_is_used():
    calls = []

    def spy(g):
        calls.append(g.k)
        return exhaustive_minimizer(g)

    strength_decomposition(DOUBLE_A, minimizer=spy)
    assert calls and calls[0] == 3


@given(seeds, kinds)
def test_chain_invariants(seed, kind):
    f = loopless(small_instance(seed, kind, max_elements=10).oracle())
    dec = strength_decomposition(f)
    assert check_decomposition(f, dec) == []
    assert all(b < a for a, b in zip(dec.values, dec.values[1:]))
    assert all(a <= b for a, b in zip(dec.ratios, dec.ratios[1:]))
    assert all(is_closed(f, m) for m in dec.masks)


@given(seeds, kinds)
def test_dinkelbach_matches_exhaustive(seed, kind):
    f = loopless(small_instance(seed, kind, max_elements=9).oracle())
    fast = strength_decomposition(f)
    slow = strength_decomposition_exhaustive(f)
    chain, ratios = oracles.strength_chain(f)
    assert fast.ratios == slow.ratios == tuple(ratios)
    assert fast.values == slow.values
    assert fast.masks == slow.masks == tuple(chain)


@given(seeds, kinds)
def test_each_step_minimizes_the_ratio(seed, kind):
    f = loopless(small_instance(seed, kind, max_elements=8).oracle())
    dec = strength_decomposition(f)
    for i in range(1, len(dec.masks)):
        S = dec.masks[i - 1]
        best = min(strength_ratio(f, X, S) for X in range(1 << f.n) if not X & ~S)
        assert dec.ratios[i - 1] == best


@given(seeds, kinds)
def test_eta_brackets_q(seed, kind):
    f = loopless(small_instance(seed, kind, max_elements=9).oracle())
    for t in range(f.n):
        f_t = restrict(f, range(t + 1))
        eta = eta_estimate(f_t, strength_decomposition(f_t), t)
        q = min_quotient_containing(f_t, t).value
        assert Fraction(q, f_t.rank) <= eta <= q


def test_check_decomposition_reports_problems():
    dec = strength_decomposition(DOUBLE_A)
    broken = type(dec)(dec.masks, (Fraction(2), Fraction(1)), dec.values, dec.level)
    problems = check_decomposition(DOUBLE_A, broken)
    assert any("ratio" in p for p in problems)
