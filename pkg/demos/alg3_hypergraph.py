"""Combined pair-counting algorithm on a dense multigraph, reported through the harness."""
from polybases.harness import ExperimentConfig, run_experiment

config = ExperimentConfig(
    {"generator": "dense_multigraph", "seed": 7, "n": 3},
    "alg3_combined",
    trials=300,
    master_seed=1,
    reference="kstar",
    include_trace=False,
)
report = run_experiment(config)
agg = report["aggregate"]
print("lambda =", report["references"]["lambda"])
print("branches:", agg["branches"])
print(f"mean base colors = {agg['mean_base_colors']:.2f} (min {agg['min_base_colors']}, max {agg['max_base_colors']})")
diag = report["diagnostics"]
print(f"timesteps: {diag['good']} good, {diag['bad_small']} bad_small, {diag['bad_large']} bad_large")
