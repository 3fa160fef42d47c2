"""Walk through the triangle K3: closed sets, quotients, k* and a greedy coloring."""
from polybases.core import is_closed, members
from polybases.instances import GraphInstance, graphic_oracle
from polybases.online import count_base_colors, greedy_single
from polybases.quotients import k_star, opt_bruteforce, q_trace
from polybases.strength import strength_decomposition

g = GraphInstance(3, ((0, 1), (1, 2), (0, 2)))
f = graphic_oracle(g)
print("rank:", f.rank)
print("closed sets:", [members(m) for m in range(1 << f.n) if is_closed(f, m)])
print("k* =", k_star(f), " opt =", opt_bruteforce(f))
print("q_t trace:", q_trace(f))
coloring = greedy_single(f)
print("greedy colors:", coloring.colors, "bases:", count_base_colors(f, coloring))
dec = strength_decomposition(f)
print("strength chain:", dec.chain, "ratios:", dec.ratios)
