"""Online packing of disjoint polymatroid bases."""

from .core import (
    CapacityError,
    ConfigurationError,
    InputError,
    Polymatroid,
    is_base,
    is_closed,
    is_quotient,
    is_quotient_via_span,
    marginal,
    restrict,
    span,
    validate_polymatroid,
)
from .harness import ExperimentConfig, classify_timesteps, run_experiment
from .instances import (
    GraphInstance,
    HypergraphInstance,
    InstanceSpec,
    MatrixInstance,
    cographic_oracle,
    connectivity_oracle,
    coverage_oracle,
    generate_parallel_path,
    generate_random_hypergraph,
    graphic_oracle,
    linear_oracle,
    load_instance,
    setcover_to_connectivity,
)
from .offline import ccv_offline, global_min_cut, sampling_trial, weak_partition_connectivity
from .online import (
    ColorAssignment,
    alg1,
    alg2,
    alg3,
    ccv_known_kstar,
    combined_alg1,
    combined_alg2,
    combined_alg3,
    count_base_colors,
    greedy_single,
    make_rng,
    mix64,
)
from .quotients import (
    EstimatorValue,
    k_star,
    min_nonempty_quotient,
    min_quotient_containing,
    opt_bruteforce,
    q_t_coverage,
    q_t_connectivity,
    q_t_graphic,
)
from .strength import StrengthDecomposition, eta_estimate, strength_decomposition, strength_ratio

__version__ = "0.1.0"
