"""Offline baselines: uniform random coloring with k* known, the sampling
experiment, and hypergraph connectivity references."""

from __future__ import annotations

import math

import numpy as np

from .core import CapacityError, InputError, Polymatroid
from .flow import hypergraph_min_cut
from .instances import HypergraphInstance, connectivity_oracle
from .online import ColorAssignment, Step, ccv_palette, make_rng, mix64
from .quotients import k_star as k_star_bruteforce

MAX_CUT_VERTICES = 20


def ccv_offline(f: Polymatroid, rng: np.random.Generator, k_star: int | None = None) -> ColorAssignment:
    """Color every element uniformly from a palette sized by k* and the rank."""
    k_star = k_star_bruteforce(f) if k_star is None else k_star
    k = ccv_palette(k_star, f.rank)
    out = ColorAssignment("ccv_offline")
    colors = rng.integers(1, k, endpoint=True, size=f.n)
    for t, c in enumerate(colors):
        out.assign(Step(t, int(c), palette=k))
    return out


def sampling_probability(f: Polymatroid, k_star: int) -> float:
    r = f.rank
    if r < 2:
        raise InputError("sampling probability is defined for rank >= 2")
    return min(1.0, 2 * math.log2(r) / k_star)


def sampling_trial(f: Polymatroid, rng: np.random.Generator, p: float | None = None, k_star: int | None = None) -> bool:
    """Keep each element independently with probability p; report whether the sample is a base."""
    if p is None:
        p = sampling_probability(f, k_star_bruteforce(f) if k_star is None else k_star)
    keep = rng.random(f.n) < p
    mask = 0
    for e in np.flatnonzero(keep):
        mask |= 1 << int(e)
    return f.value(mask) == f.rank


def sampling_frequency(f: Polymatroid, trials: int, master_seed: int = 0, p: float | None = None, k_star: int | None = None) -> float:
    if p is None:
        p = sampling_probability(f, k_star_bruteforce(f) if k_star is None else k_star)
    hits = sum(sampling_trial(f, make_rng(mix64(master_seed, i)), p) for i in range(trials))
    return hits / trials


def cut_size(h: HypergraphInstance, side: int) -> int:
    """Hyperedges with vertices on both sides of the vertex bitmask ``side``."""
    count = 0
    for e in h.hyperedges:
        inside = sum((side >> v) & 1 for v in e)
        count += 0 < inside < len(e)
    return count


def global_min_cut(h: HypergraphInstance, method: str = "enumerate") -> int:
    n = h.vertex_count
    if n < 2:
        raise InputError("global min cut needs at least two vertices")
    if method == "enumerate":
        if n > MAX_CUT_VERTICES:
            raise CapacityError(f"cut enumeration over {n} vertices exceeds {MAX_CUT_VERTICES}")
        # vertex n-1 stays outside, which visits every cut once
        return min(cut_size(h, side) for side in range(1, 1 << (n - 1)))
    if method == "flow":
        return min(hypergraph_min_cut(n, h.hyperedges, 0, v) for v in range(1, n))
    raise InputError(f"unknown min-cut method {method!r}")


def weak_partition_connectivity(h: HypergraphInstance) -> int:
    """k* of the connectivity polymatroid of ``h``."""
    return k_star_bruteforce(connectivity_oracle(h))

