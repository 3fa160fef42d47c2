"""Run the quotient-estimating online algorithm on two bundles of parallel edges."""
import numpy as np

from polybases.instances import InstanceSpec, generate_parallel_path, graphic_oracle
from polybases.online import alg1, count_base_colors, make_rng, mix64
from polybases.quotients import specialized_q_solver

g = generate_parallel_path([120, 120])
f = graphic_oracle(g)
solver = specialized_q_solver(InstanceSpec("graphic", g))
counts = []
for i in range(200):
    run = alg1(f, f.rank, solver, make_rng(mix64(2024, i)))
    counts.append(count_base_colors(f, run))
last = run.trace[-1]
print(f"last step: estimate={last.estimate} level={last.level} sample={last.sample} palette={last.palette}")
print(f"k* = 120, mean base colors over 200 runs = {np.mean(counts):.2f}, min = {min(counts)}")
