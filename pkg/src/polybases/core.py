"""Polymatroid oracles and the elementary set operations built on them.

Elements are dense indices ``0..n-1``. Subsets are passed around internally as
integer bitmasks (bit ``i`` set means element ``i`` is present); the public
helpers also accept any iterable of indices and return ``frozenset`` results.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable
from functools import lru_cache

import numpy as np

# Exhaustive tables above this size are refused rather than attempted.
MAX_TABLE_BITS = 22
MAX_VALIDATE_BITS = 16
_MEMO_LIMIT = 1 << 20


class InputError(ValueError):
    """An argument refers to elements or sets the oracle does not have."""


class ConfigurationError(ValueError):
    """An instance or experiment is described inconsistently."""


class CapacityError(RuntimeError):
    """A brute-force routine was asked to enumerate a ground set that is too large."""


def to_mask(elements: Iterable[int] | int, n: int) -> int:
    if isinstance(elements, (int, np.integer)) and not isinstance(elements, bool):
        mask = int(elements)
        if mask < 0 or mask >> n:
            raise InputError(f"bitmask {mask:#x} has bits outside [0, {n})")
        return mask
    mask = 0
    for e in elements:
        e = int(e)
        if not 0 <= e < n:
            raise InputError(f"element {e} outside ground set [0, {n})")
        if mask >> e & 1:
            raise InputError(f"element {e} listed twice")
        mask |= 1 << e
    return mask


def members(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def submasks(mask: int):
    """Yield every submask of ``mask`` (including ``mask`` and 0), descending."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


@lru_cache(maxsize=None)
def popcounts(k: int) -> np.ndarray:
    """Popcount of every integer in ``range(2**k)`` as an int64 array."""
    return np.bitwise_count(np.arange(1 << k, dtype=np.uint64)).astype(np.int64)


def deposit_indices(positions: tuple[int, ...]) -> np.ndarray:
    """Map each local mask over ``positions`` to the parent mask it denotes."""
    k = len(positions)
    local = np.arange(1 << k, dtype=np.int64)
    out = np.zeros(1 << k, dtype=np.int64)
    for j, p in enumerate(positions):
        out |= ((local >> j) & 1) << p
    return out


def deposit(mask: int, positions: tuple[int, ...]) -> int:
    out = 0
    j = 0
    while mask:
        if mask & 1:
            out |= 1 << positions[j]
        mask >>= 1
        j += 1
    return out


class Polymatroid:
    """Evaluation oracle for an integer-valued monotone submodular function.

    ``func`` maps a bitmask over ``range(ground_size)`` to a nonnegative
    integer.  Values are memoized per oracle; the cache is a plain dict, which
    is safe for concurrent reads and inserts under the GIL.

    ``table_fn(k)``, when supplied, must return the values of all ``2**k``
    subsets of the first ``k`` elements as an integer array; families with a
    vectorized rank formula use it to skip the per-mask Python loop.
    """

    def __init__(
        self,
        ground_size: int,
        func: Callable[[int], int],
        *,
        rank: int | None = None,
        table_fn: Callable[[int], np.ndarray] | None = None,
        name: str = "polymatroid",
    ):
        if ground_size < 0:
            raise InputError("ground_size must be nonnegative")
        self.ground_size = int(ground_size)
        self.name = name
        self._func = func
        self._table_fn = table_fn
        self._memo: dict[int, int] = {}
        self._table: np.ndarray | None = None
        self._rank = rank

    def __repr__(self):
        return f"<{self.name} n={self.ground_size}>"

    @property
    def n(self) -> int:
        return self.ground_size

    @property
    def full_mask(self) -> int:
        return (1 << self.ground_size) - 1

    @property
    def rank(self) -> int:
        if self._rank is None:
            self._rank = self.value(self.full_mask)
        return self._rank

    def value(self, mask: int) -> int:
        cached = self._memo.get(mask)
        if cached is not None:
            return cached
        if mask < 0 or mask >> self.ground_size:
            raise InputError(f"bitmask {mask:#x} has bits outside [0, {self.ground_size})")
        if self._table is not None and mask < len(self._table):
            return int(self._table[mask])
        v = int(self._func(mask))
        if len(self._memo) < _MEMO_LIMIT:
            self._memo[mask] = v
        return v

    def __call__(self, elements: Iterable[int] | int) -> int:
        return self.value(to_mask(elements, self.ground_size))

    eval = __call__

    def prefix_table(self, k: int) -> np.ndarray:
        """Values of every subset of elements ``0..k-1``, indexed by bitmask."""
        if k > self.ground_size:
            raise InputError(f"prefix {k} longer than ground set {self.ground_size}")
        if k > MAX_TABLE_BITS:
            raise CapacityError(
                f"{self.name}: exhaustive table over {k} elements exceeds {MAX_TABLE_BITS}"
            )
        have = -1 if self._table is None else len(self._table).bit_length() - 1
        if have < k:
            if self._table_fn is not None:
                table = np.asarray(self._table_fn(k), dtype=np.int64)
            else:
                table = np.empty(1 << k, dtype=np.int64)
                if have >= 0:
                    table[: len(self._table)] = self._table
                else:
                    table[0] = self._func(0)
                    have = 0
                for j in range(have, k):
                    lo = 1 << j
                    func = self._func
                    table[lo : 2 * lo] = [func(m) for m in range(lo, 2 * lo)]
            self._table = table
        return self._table[: 1 << k]

    def table(self) -> np.ndarray:
        return self.prefix_table(self.ground_size)


def marginal(f: Polymatroid, A: Iterable[int] | int, e: int) -> int:
    if not 0 <= e < f.n:
        raise InputError(f"element {e} outside ground set [0, {f.n})")
    a = to_mask(A, f.n)
    return f.value(a | (1 << e)) - f.value(a)


def restrict(f: Polymatroid, S: Iterable[int] | int) -> Polymatroid:
    """Restriction of ``f`` to ``S``; local element ``j`` is the j-th smallest of ``S``."""
    positions = members(to_mask(S, f.n))
    return _reindexed(f, positions, "restrict")


def permute(f: Polymatroid, order: Iterable[int]) -> Polymatroid:
    """Re-index ``f`` so that local element ``i`` is ``order[i]`` (a new arrival order)."""
    positions = tuple(int(e) for e in order)
    if sorted(positions) != list(range(f.n)):
        raise InputError("order must be a permutation of the ground set")
    return _reindexed(f, positions, "permute")


def _reindexed(f: Polymatroid, positions: tuple[int, ...], how: str) -> Polymatroid:
    k = len(positions)

    def func(mask: int) -> int:
        return f.value(deposit(mask, positions))

    def table_fn(j: int) -> np.ndarray:
        sub = positions[:j]
        top = max(sub, default=-1) + 1
        # Pull from the parent's table only when it is not much larger than ours.
        parent_ready = f._table is not None and len(f._table) >= (1 << top)
        if parent_ready or top <= j + 3:
            return f.prefix_table(top)[deposit_indices(sub)]
        return np.array([func(m) for m in range(1 << j)], dtype=np.int64)

    rank = f.rank if how == "permute" else None
    return Polymatroid(k, func, rank=rank, table_fn=table_fn, name=f"{how}({f.name})")


def span_mask(f: Polymatroid, mask: int) -> int:
    base = f.value(mask)
    out = mask
    for e in range(f.n):
        bit = 1 << e
        if not mask & bit and f.value(mask | bit) == base:
            out |= bit
    return out


def span(f: Polymatroid, S: Iterable[int] | int) -> frozenset[int]:
    return frozenset(members(span_mask(f, to_mask(S, f.n))))


def is_closed(f: Polymatroid, S: Iterable[int] | int) -> bool:
    mask = to_mask(S, f.n)
    return span_mask(f, mask) == mask


def is_quotient(f: Polymatroid, Q: Iterable[int] | int) -> bool:
    """Every element of ``Q`` adds value on top of the complement of ``Q``."""
    q = to_mask(Q, f.n)
    rest = f.full_mask & ~q
    base = f.value(rest)
    return all(f.value(rest | (1 << e)) > base for e in members(q))


def is_quotient_via_span(f: Polymatroid, Q: Iterable[int] | int) -> bool:
    q = to_mask(Q, f.n)
    rest = f.full_mask & ~q
    return span_mask(f, rest) == rest


def is_base(f: Polymatroid, S: Iterable[int] | int) -> bool:
    return f.value(to_mask(S, f.n)) == f.rank


def loops(f: Polymatroid) -> frozenset[int]:
    """Elements with ``f({e}) == 0``; they lie in every closed set."""
    return frozenset(e for e in range(f.n) if f.value(1 << e) == 0)


def closed_flags(values: np.ndarray, k: int) -> np.ndarray:
    """Boolean array marking which of the ``2**k`` masks are closed sets."""
    idx = np.arange(1 << k, dtype=np.int64)
    closed = np.ones(1 << k, dtype=bool)
    for e in range(k):
        bit = 1 << e
        m = idx[(idx & bit) == 0]
        closed[m] &= values[m | bit] > values[m]
    return closed


def validate_polymatroid(f: Polymatroid) -> bool:
    """Exhaustively check normalization, monotonicity and submodularity.

    Submodularity is checked through the equivalent local form
    ``f(S+a) + f(S+b) >= f(S+a+b) + f(S)`` over all ``S`` and ``a, b`` not in
    ``S``, which covers every pair of subsets.
    """
    n = f.n
    if n > MAX_VALIDATE_BITS:
        raise CapacityError(f"validation enumerates 2**{n} subsets; limit is 2**{MAX_VALIDATE_BITS}")
    F = f.table()
    if F[0] != 0 or (F < 0).any() or F[-1] != f.rank:
        return False
    idx = np.arange(1 << n, dtype=np.int64)
    for a in range(n):
        abit = 1 << a
        without_a = idx[(idx & abit) == 0]
        if (F[without_a | abit] < F[without_a]).any():
            return False
        for b in range(a + 1, n):
            bbit = 1 << b
            m = without_a[(without_a & bbit) == 0]
            if (F[m | abit] + F[m | bbit] < F[m | abit | bbit] + F[m]).any():
                return False
    return True
