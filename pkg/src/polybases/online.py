"""Online coloring algorithms for packing disjoint bases.

Every algorithm walks the ground set in index order (index = arrival time)
and fixes each element's color before looking at the next one.  Elements are
only ever evaluated together with earlier arrivals.

Randomness comes from a ``numpy.random.Generator`` (PCG64).  Independent
trials derive their seeds with :func:`mix64`, the SplitMix64 finalizer applied
to ``master_seed + (index + 1) * 0x9E3779B97F4A7C15`` modulo 2**64.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .core import ConfigurationError, Polymatroid, restrict
from .instances import HypergraphInstance
from .quotients import GenericQSolver
from .strength import eta_estimate, strength_decomposition

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    z = x & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def mix64(master_seed: int, index: int) -> int:
    return splitmix64(master_seed + (index + 1) * _GOLDEN)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed & _MASK64))


def ceil_log2(x: int | Fraction) -> int:
    """Smallest integer l with 2**l >= x, exact for integers and fractions."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("ceil_log2 needs a positive argument")
    num, den = x.numerator, x.denominator
    # 2**l >= num/den  <=>  (l >= 0 and den << l >= num) or (l < 0 and den >= num << -l)
    l = num.bit_length() - den.bit_length() - 1
    while not _pow2_at_least(l, num, den):
        l += 1
    return l


def _pow2_at_least(l: int, num: int, den: int) -> bool:
    return (den << l) >= num if l >= 0 else den >= (num << -l)


def palette_size(sample: int, denominator: float) -> int:
    """floor(2**sample / denominator), clamped to at least one color."""
    return max(1, math.floor(2.0**sample / denominator))


@dataclass
class Step:
    t: int
    color: int
    estimate: int | Fraction | None = None
    level: int | None = None
    sample: int | None = None
    palette: int | None = None
    pairs: int | None = None
    note: str = ""

    def to_json(self) -> dict:
        est = self.estimate
        if isinstance(est, Fraction):
            est = str(est) if est.denominator != 1 else est.numerator
        return {
            "t": self.t,
            "color": self.color,
            "estimate": est,
            "level": self.level,
            "sample": self.sample,
            "palette": self.palette,
            "pairs": self.pairs,
            "note": self.note,
        }


@dataclass
class ColorAssignment:
    algorithm: str
    colors: list[int] = field(default_factory=list)
    trace: list[Step] = field(default_factory=list)
    branch: str | None = None

    def assign(self, step: Step) -> None:
        if step.t != len(self.colors):
            raise RuntimeError("colors must be assigned in arrival order")
        if step.color < 1:
            raise RuntimeError("colors are positive integers")
        self.colors.append(step.color)
        self.trace.append(step)

    def classes(self) -> dict[int, int]:
        """Color -> bitmask of the elements carrying it."""
        out: dict[int, int] = {}
        for e, c in enumerate(self.colors):
            out[c] = out.get(c, 0) | (1 << e)
        return out


def count_base_colors(f: Polymatroid, assignment: ColorAssignment | list[int]) -> int:
    colors = assignment.colors if isinstance(assignment, ColorAssignment) else assignment
    if len(colors) > f.n:
        raise ValueError("more colors than elements")
    classes: dict[int, int] = {}
    for e, c in enumerate(colors):
        classes[c] = classes.get(c, 0) | (1 << e)
    r = f.rank
    return sum(f.value(mask) == r for mask in classes.values())


def _uniform(rng: np.random.Generator, lo: int, hi: int) -> int:
    return int(rng.integers(lo, hi, endpoint=True))


def greedy_single(f: Polymatroid, r: int | None = None) -> ColorAssignment:
    """Fill one color until it spans, then move to the next."""
    r = f.rank if r is None else r
    out = ColorAssignment("greedy")
    current, color = 0, 1
    for t in range(f.n):
        out.assign(Step(t, color))
        current |= 1 << t
        if f.value(current) == r:
            color += 1
            current = 0
    return out


def ccv_palette(k_star: int, r: int) -> int:
    if r < 2:
        return 1
    lg = math.log2(r)
    return max(1, math.floor(k_star / (lg + math.log2(lg)))) if lg > 1 else max(1, k_star)


def ccv_known_kstar(f: Polymatroid, k_star: int, rng: np.random.Generator, r: int | None = None) -> ColorAssignment:
    """Uniform colors from a palette sized by a k* value known up front."""
    r = f.rank if r is None else r
    k = ccv_palette(k_star, r)
    out = ColorAssignment("ccv_known")
    for t in range(f.n):
        out.assign(Step(t, _uniform(rng, 1, k), palette=k))
    return out


def _sampled_run(name, f, r, estimates, rng) -> ColorAssignment:
    """Shared sampler for the quotient-based algorithms.

    ``estimates(t)`` returns the estimate for arrival t, or None for an element
    with zero value, which is parked in color 1.
    """
    if r < 2:
        raise ConfigurationError(f"{name} needs r >= 2 (got {r}); use the combined variant")
    width = 3 * ceil_log2(r)
    denominator = 60 * math.log2(r) ** 2
    out = ColorAssignment(name)
    for t in range(f.n):
        est = estimates(t)
        if est is None:
            out.assign(Step(t, 1, note="zero-value"))
            continue
        level = ceil_log2(est)
        sample = _uniform(rng, level - width, level + width)
        palette = palette_size(sample, denominator)
        out.assign(Step(t, _uniform(rng, 1, palette), est, level, sample, palette))
    return out


def alg1(f: Polymatroid, r: int, q_solver=None, rng: np.random.Generator | None = None) -> ColorAssignment:
    """Quotient-size algorithm: estimate with q_t, sample a scale around it, color uniformly."""
    q_solver = GenericQSolver(f) if q_solver is None else q_solver
    rng = make_rng(0) if rng is None else rng

    def estimates(t):
        if f.value(1 << t) == 0:
            return None
        return q_solver(t).value

    return _sampled_run("alg1", f, r, estimates, rng)


class EtaEstimator:
    """eta_t from a strength decomposition of the arrived non-zero elements; memoized per t."""

    def __init__(self, f: Polymatroid, minimizer=None):
        self.f = f
        self.minimizer = minimizer
        self._cache: dict[int, Fraction] = {}

    def __call__(self, t: int) -> Fraction:
        if t not in self._cache:
            f = self.f
            active = [e for e in range(t + 1) if f.value(1 << e) > 0]
            f_t = restrict(f, active)
            kwargs = {} if self.minimizer is None else {"minimizer": self.minimizer}
            dec = strength_decomposition(f_t, **kwargs)
            self._cache[t] = eta_estimate(f_t, dec, active.index(t))
        return self._cache[t]


def alg2(f: Polymatroid, r: int, rng: np.random.Generator | None = None, eta=None) -> ColorAssignment:
    """Same sampler as :func:`alg1`, driven by the strength-decomposition estimate."""
    eta = EtaEstimator(f) if eta is None else eta
    rng = make_rng(0) if rng is None else rng

    def estimates(t):
        if f.value(1 << t) == 0:
            return None
        return eta(t)

    return _sampled_run("alg2", f, r, estimates, rng)


def alg3(h: HypergraphInstance, rng: np.random.Generator | None = None, n: int | None = None) -> ColorAssignment:
    """Pair-counter algorithm for connected spanning subhypergraphs.

    Each arrival bumps the counter of every vertex pair it contains (exactly
    |e|(|e|-1)/2 updates, recorded in ``Step.pairs``); its estimate is the
    smallest of those counters.  A single-vertex hyperedge has no pair and
    gets estimate 1.
    """
    n = h.vertex_count if n is None else n
    if n < 2:
        raise ConfigurationError("alg3 needs at least two vertices")
    rng = make_rng(0) if rng is None else rng
    width = 2 * ceil_log2(n)
    denominator = 40 * math.log2(n) ** 2
    counters: dict[tuple[int, int], int] = {}
    out = ColorAssignment("alg3")
    for t, e in enumerate(h.hyperedges):
        touched = 0
        eta = None
        for pair in combinations(e, 2):
            c = counters.get(pair, 0) + 1
            counters[pair] = c
            touched += 1
            eta = c if eta is None else min(eta, c)
        note = ""
        if eta is None:
            eta, note = 1, "single-vertex hyperedge"
        level = ceil_log2(eta)
        sample = _uniform(rng, level, level + width)
        palette = palette_size(sample, denominator)
        out.assign(Step(t, _uniform(rng, 1, palette), eta, level, sample, palette, touched, note))
    return out


def _all_ones(name, size, branch) -> ColorAssignment:
    out = ColorAssignment(name, branch=branch)
    for t in range(size):
        out.assign(Step(t, 1))
    return out


def _all_distinct(name, size, branch) -> ColorAssignment:
    out = ColorAssignment(name, branch=branch)
    for t in range(size):
        out.assign(Step(t, t + 1))
    return out


def _combined(name, inner, size, rng, r):
    branch = ("algorithm", "all_ones", "distinct")[int(rng.integers(3))]
    if branch == "algorithm":
        if r < 2:
            # The sampler's scale is undefined at r = 1; every color choice is then equivalent.
            out = _all_ones(name, size, branch)
        else:
            inner_out = inner()
            out = ColorAssignment(name, inner_out.colors, inner_out.trace, branch)
    elif branch == "all_ones":
        out = _all_ones(name, size, branch)
    else:
        out = _all_distinct(name, size, branch)
    return out


def combined_alg1(f: Polymatroid, r: int, rng: np.random.Generator, q_solver=None) -> ColorAssignment:
    """One fair three-way coin per run: alg1, everything color 1, or color t for arrival t."""
    return _combined("alg1_combined", lambda: alg1(f, r, q_solver, rng), f.n, rng, r)


def combined_alg2(f: Polymatroid, r: int, rng: np.random.Generator, eta=None) -> ColorAssignment:
    return _combined("alg2_combined", lambda: alg2(f, r, rng, eta), f.n, rng, r)


def combined_alg3(h: HypergraphInstance, rng: np.random.Generator, n: int | None = None) -> ColorAssignment:
    """One fair coin per run: alg3 or everything color 1."""
    if int(rng.integers(2)) == 0:
        inner = alg3(h, rng, n)
        return ColorAssignment("alg3_combined", inner.colors, inner.trace, "algorithm")
    return _all_ones("alg3_combined", h.m, "all_ones")
