"""Strength decompositions and the eta estimate derived from them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .core import (
    MAX_TABLE_BITS,
    CapacityError,
    InputError,
    Polymatroid,
    deposit,
    deposit_indices,
    members,
    popcounts,
    submasks,
    to_mask,
)

INFINITY = math.inf


def strength_ratio(f: Polymatroid, T, S) -> Fraction | float:
    """(|S| - |T|) / (f(S) - f(T)), with x/0 read as +inf."""
    t, s = to_mask(T, f.n), to_mask(S, f.n)
    if t & ~s:
        raise InputError("T must be a subset of S")
    gap = f.value(s) - f.value(t)
    if gap == 0:
        return INFINITY
    return Fraction(s.bit_count() - t.bit_count(), gap)


@dataclass(frozen=True)
class StrengthDecomposition:
    """Chain N = S_0 > S_1 > ... > S_w = {} stored as bitmasks.

    ``ratios[i]`` is the strength ratio of S_{i+1} in S_i and ``values[i]`` is
    f(S_i).  ``level[e]`` is the index i >= 1 with e in S_{i-1} minus S_i.
    """

    masks: tuple[int, ...]
    ratios: tuple[Fraction, ...]
    values: tuple[int, ...]
    level: tuple[int, ...]

    @property
    def chain(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(members(m)) for m in self.masks)

    @property
    def depth(self) -> int:
        return len(self.masks) - 1


class SetFunction:
    """Integer set function on ``k`` local elements handed to a minimizer.

    ``values`` optionally carries the full table of all 2**k values.
    """

    def __init__(self, k: int, func: Callable[[int], int], values: np.ndarray | None = None):
        self.k = k
        self._func = func
        self.values = values

    def __call__(self, mask: int) -> int:
        if self.values is not None:
            return int(self.values[mask])
        return int(self._func(mask))


def exhaustive_minimizer(g: SetFunction) -> tuple[int, int]:
    """Return (minimum, inclusion-minimal minimizer) of a submodular ``g``.

    Minimizers of a submodular function are closed under intersection, so the
    intersection of all of them is the unique minimal one.
    """
    if g.k > MAX_TABLE_BITS:
        raise CapacityError(f"exhaustive minimization over {g.k} elements exceeds {MAX_TABLE_BITS}")
    vals = g.values
    if vals is None:
        vals = np.array([g(m) for m in range(1 << g.k)], dtype=np.int64)
    best = int(vals.min())
    where = np.flatnonzero(vals == best)
    meet = int(np.bitwise_and.reduce(where))
    if vals[meet] != best:
        raise ValueError("minimizers are not closed under intersection; function is not submodular")
    return best, meet


Minimizer = Callable[[SetFunction], "tuple[int, int]"]


def _next_set_dinkelbach(F_sub: np.ndarray, k: int, f_S: int, minimizer: Minimizer) -> tuple[int, Fraction]:
    """Minimal minimizer of the strength ratio inside S, in local coordinates.

    For a candidate ratio lam = a/b, sets below lam are exactly the sets where
    b*(|S| - |X|) - a*(f(S) - f(X)) is negative.  This function of X is
    submodular, so each round is one minimization; lam drops to the ratio of
    the minimizer until the minimum reaches zero.
    """
    sizes = popcounts(k)
    lam = Fraction(k, f_S)
    while True:
        a, b = lam.numerator, lam.denominator
        h = b * (k - sizes) - a * (f_S - F_sub)
        low, X = minimizer(SetFunction(k, None, h))
        if low >= 0:
            return X, lam
        lam = Fraction(k - X.bit_count(), f_S - int(F_sub[X]))


def strength_decomposition(f: Polymatroid, *, minimizer: Minimizer = exhaustive_minimizer) -> StrengthDecomposition:
    n = f.n
    if n > MAX_TABLE_BITS:
        raise CapacityError(f"strength decomposition over {n} elements exceeds {MAX_TABLE_BITS}")
    F = f.table()
    if n and (F[1 << np.arange(n)] == 0).any():
        raise InputError("every element needs positive value")
    S = f.full_mask
    masks, ratios, values = [S], [], [int(F[S])]
    while S:
        positions = members(S)
        k = len(positions)
        F_sub = F[deposit_indices(positions)]
        X, lam = _next_set_dinkelbach(F_sub, k, int(F[S]), minimizer)
        S = deposit(X, positions)
        masks.append(S)
        ratios.append(lam)
        values.append(int(F[S]))
    return _finish(n, masks, ratios, values)


def strength_decomposition_exhaustive(f: Polymatroid) -> StrengthDecomposition:
    """Reference construction: scan every subset with exact ratios.

    Candidates are proper subsets with f(X) < f(S); ties go to smaller f(X),
    then smaller |X|, then the lower bitmask.
    """
    n = f.n
    if n > MAX_TABLE_BITS:
        raise CapacityError(f"strength decomposition over {n} elements exceeds {MAX_TABLE_BITS}")
    if any(f.value(1 << e) == 0 for e in range(n)):
        raise InputError("every element needs positive value")
    S = f.full_mask
    masks, ratios, values = [S], [], [f.value(S)]
    while S:
        f_S, size = f.value(S), S.bit_count()
        best_key, best = None, None
        for X in submasks(S):
            f_X = f.value(X)
            if X == S or f_X == f_S:
                continue
            key = (Fraction(size - X.bit_count(), f_S - f_X), f_X, X.bit_count(), X)
            if best_key is None or key < best_key:
                best_key, best = key, X
        S = best
        masks.append(S)
        ratios.append(best_key[0])
        values.append(f.value(S))
    return _finish(n, masks, ratios, values)


def _finish(n, masks, ratios, values) -> StrengthDecomposition:
    level = [0] * n
    for i in range(1, len(masks)):
        for e in members(masks[i - 1] & ~masks[i]):
            level[e] = i
    return StrengthDecomposition(tuple(masks), tuple(ratios), tuple(values), tuple(level))


def eta_estimate(f_t: Polymatroid, decomposition: StrengthDecomposition, e_t: int) -> Fraction:
    """|N_t minus S_i| / (f(N_t) - f(S_i)) for the level i holding e_t."""
    if not 0 <= e_t < f_t.n:
        raise InputError(f"element {e_t} outside ground set [0, {f_t.n})")
    i = decomposition.level[e_t]
    S_i = decomposition.masks[i]
    return Fraction(f_t.n - S_i.bit_count(), decomposition.values[0] - decomposition.values[i])


def check_decomposition(f: Polymatroid, dec: StrengthDecomposition) -> list[str]:
    """List every violated chain property (empty when the chain is valid)."""
    from .core import span_mask

    problems = []
    if dec.masks[0] != f.full_mask or dec.masks[-1] != 0:
        problems.append("chain must run from the ground set to the empty set")
    for i in range(1, len(dec.masks)):
        if dec.masks[i] & ~dec.masks[i - 1] or dec.masks[i] == dec.masks[i - 1]:
            problems.append(f"S_{i} is not a proper subset of S_{i - 1}")
        if dec.values[i] >= dec.values[i - 1]:
            problems.append(f"values not strictly decreasing at {i}")
        if strength_ratio(f, dec.masks[i], dec.masks[i - 1]) != dec.ratios[i - 1]:
            problems.append(f"stored ratio at {i} does not match the sets")
    for i in range(1, len(dec.ratios)):
        if dec.ratios[i] < dec.ratios[i - 1]:
            problems.append(f"ratios decrease at {i}")
    for i, m in enumerate(dec.masks):
        if span_mask(f, m) != m:
            problems.append(f"S_{i} is not closed")
    return problems
