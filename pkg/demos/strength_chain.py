"""Strength decomposition of a random coverage function, checked against exhaustive search."""
from polybases.core import members
from polybases.instances import coverage_oracle, generate_random_hypergraph
from polybases.strength import check_decomposition, strength_decomposition, strength_decomposition_exhaustive

h = generate_random_hypergraph(0, 6, 9, (1, 3))
f = coverage_oracle(h, allow_partial_cover=True)
fast = strength_decomposition(f)
slow = strength_decomposition_exhaustive(f)
for mask, ratio in zip(fast.masks, fast.ratios):
    print(f"{members(mask)}  ratio {ratio}")
print("matches exhaustive:", fast.masks == slow.masks and fast.ratios == slow.ratios)
print("invariant problems:", check_decomposition(f, fast) or "none")
