"""Experiment runner and command-line interface.

A run resolves an instance, executes independent trials of one algorithm
with per-trial seeds ``mix64(master_seed, i)``, optionally computes
reference quantities (k*, opt, q*, lambda), and classifies every estimator
step as good or bad against those references.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import statistics
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from pathlib import Path

from .core import MAX_TABLE_BITS, CapacityError, ConfigurationError, Polymatroid
from .instances import (
    GraphInstance,
    HypergraphInstance,
    InstanceSpec,
    components,
    generate_dense_multigraph,
    generate_parallel_path,
    generate_random_graph,
    generate_random_hypergraph,
    generate_random_matrix,
    load_instance,
)
from .offline import MAX_CUT_VERTICES, ccv_offline, global_min_cut
from .online import (
    ColorAssignment,
    EtaEstimator,
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
    MAX_OPT_ELEMENTS,
    MAX_PARTITION_VERTICES,
    GenericQSolver,
    k_star,
    k_star_coverage,
    k_star_partition,
    min_nonempty_quotient,
    opt_bruteforce,
    specialized_q_solver,
)

ALGORITHMS = (
    "greedy",
    "ccv_known",
    "ccv_offline",
    "alg1",
    "alg2",
    "alg3",
    "alg1_combined",
    "alg2_combined",
    "alg3_combined",
)
Q_SOLVERS = ("generic", "specialized", "auto")
REFERENCE_LEVELS = ("none", "kstar", "full")
CSV_COLUMNS = (
    "trial",
    "algorithm",
    "seed",
    "branch",
    "base_colors",
    "opt_ref",
    "k_star_ref",
    "lambda_ref",
    "good_count",
    "bad_count",
)
_HYPERGRAPH_ALGORITHMS = ("alg3", "alg3_combined")
_QUOTIENT_ALGORITHMS = ("alg1", "alg2", "alg1_combined", "alg2_combined")
_MASK64 = (1 << 64) - 1


@dataclass
class ExperimentConfig:
    """``instance`` is a path to instance JSON, an inline instance object, or a
    generator object such as ``{"generator": "parallel_path", "segments": [150, 150]}``."""

    instance: str | dict
    algorithm: str = "greedy"
    trials: int = 1
    master_seed: int = 0
    q_solver: str = "auto"
    reference: str = "none"
    include_trace: bool = True
    workers: int = 1

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigurationError(f"unknown algorithm {self.algorithm!r}; choose from {', '.join(ALGORITHMS)}")
        if self.q_solver not in Q_SOLVERS:
            raise ConfigurationError(f"unknown q-solver mode {self.q_solver!r}")
        if self.reference not in REFERENCE_LEVELS:
            raise ConfigurationError(f"unknown reference level {self.reference!r}")
        if int(self.trials) < 1:
            raise ConfigurationError("trials must be at least 1")
        if not 0 <= int(self.master_seed) <= _MASK64:
            raise ConfigurationError("master seed must be an unsigned 64-bit integer")
        if int(self.workers) < 1:
            raise ConfigurationError("workers must be at least 1")

    @classmethod
    def from_json(cls, obj: dict) -> ExperimentConfig:
        known = {f.name for f in fields(cls)}
        unknown = set(obj) - known
        if unknown:
            raise ConfigurationError(f"unknown config fields: {sorted(unknown)}")
        return cls(**obj)

    def to_json(self) -> dict:
        out = asdict(self)
        out.pop("workers")  # scheduling never changes the report
        return out


_GENERATORS = {
    "parallel_path": (lambda o: generate_parallel_path(o["segments"]), "graphic"),
    "dense_multigraph": (
        lambda o: generate_dense_multigraph(o["seed"], o["n"], tuple(o.get("multiplicity_range", (150, 250)))),
        "graphic",
    ),
    "random_graph": (lambda o: generate_random_graph(o["seed"], o["n"], o["m"], connected=o.get("connected", True)), "graphic"),
    "random_hypergraph": (
        lambda o: generate_random_hypergraph(o["seed"], o["n"], o["m"], tuple(o.get("edge_size_range", (1, 3)))),
        "connectivity",
    ),
    "random_matrix": (
        lambda o: generate_random_matrix(o["seed"], o["count"], o["dimension"], o.get("modulus", 2)),
        "linear_gfp",
    ),
}


def resolve_instance(source, base_dir: Path | None = None) -> InstanceSpec:
    if isinstance(source, InstanceSpec):
        return source
    if isinstance(source, (str, Path)):
        path = Path(source)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        return load_instance(path)
    if isinstance(source, dict) and "generator" in source:
        name = source["generator"]
        if name not in _GENERATORS:
            raise ConfigurationError(f"unknown generator {name!r}")
        make, default_kind = _GENERATORS[name]
        try:
            data = make(source)
        except KeyError as exc:
            raise ConfigurationError(f"generator {name!r} needs field {exc.args[0]!r}") from None
        kind = source.get("kind", default_kind)
        if kind in ("coverage", "connectivity") and isinstance(data, GraphInstance):
            data = data.as_hypergraph()
        if kind in ("graphic", "cographic") and isinstance(data, HypergraphInstance):
            raise ConfigurationError(f"generator {name!r} cannot produce a {kind} instance")
        return InstanceSpec(kind, data, source.get("label", name))
    if isinstance(source, dict):
        return InstanceSpec.from_json(source)
    raise ConfigurationError(f"cannot interpret instance source {source!r}")


# ---------------------------------------------------------------- references


def _capacity(name: str, exc: CapacityError) -> CapacityError:
    return CapacityError(f"reference {name} could not be computed: {exc}")


def _connected_hypergraph(spec: InstanceSpec) -> HypergraphInstance | None:
    if spec.kind not in ("graphic", "connectivity"):
        return None
    h = spec.hypergraph()
    if h.vertex_count < 2 or components(h.vertex_count, h.hyperedges) != 1:
        return None
    return h


def reference_k_star(spec: InstanceSpec, f: Polymatroid) -> tuple[int, str]:
    h = _connected_hypergraph(spec)
    try:
        if h is not None and h.vertex_count <= MAX_PARTITION_VERTICES:
            return k_star_partition(h), "vertex_partitions"
        if spec.kind == "coverage" and not spec.options.get("allow_partial_cover"):
            return k_star_coverage(spec.data), "min_degree"
        return k_star(f), "closed_set_enumeration"
    except CapacityError as exc:
        raise _capacity("k_star", exc) from None


def reference_lambda(spec: InstanceSpec) -> tuple[int, str]:
    h = spec.hypergraph()
    if h.vertex_count <= MAX_CUT_VERTICES:
        return global_min_cut(h, "enumerate"), "cut_enumeration"
    return global_min_cut(h, "flow"), "pairwise_flow"


def reference_opt(spec: InstanceSpec, f: Polymatroid, k: int | None) -> tuple[int, str]:
    if f.n <= MAX_OPT_ELEMENTS:
        return opt_bruteforce(f), "backtracking"
    if spec.kind in ("graphic", "cographic", "linear_gfp") and k is not None:
        # for matroid rank functions the maximum packing equals k*
        return k, "matroid_packing_equals_k_star"
    raise CapacityError(f"reference opt could not be computed: {f.n} elements exceed backtracking limit {MAX_OPT_ELEMENTS}")


def reference_q_star(spec: InstanceSpec, f: Polymatroid, lam: int | None) -> tuple[int, str]:
    if _connected_hypergraph(spec) is not None and spec.kind == "graphic" and lam is not None:
        return lam, "global_min_cut"
    if spec.kind == "coverage" and not spec.options.get("allow_partial_cover"):
        return k_star_coverage(spec.data), "min_degree"
    try:
        return min_nonempty_quotient(f), "closed_set_enumeration"
    except CapacityError as exc:
        raise _capacity("q_star", exc) from None


def compute_references(spec: InstanceSpec, f: Polymatroid, level: str, need_lambda: bool = False) -> dict:
    refs: dict = {"rank": f.rank, "methods": {}}
    if level == "none" and not need_lambda:
        return refs
    if spec.is_hypergraph_like:
        refs["lambda"], refs["methods"]["lambda"] = reference_lambda(spec)
    if level == "none":
        return refs
    if f.rank >= 1:
        refs["k_star"], refs["methods"]["k_star"] = reference_k_star(spec, f)
    if level == "full":
        refs["opt"], refs["methods"]["opt"] = reference_opt(spec, f, refs.get("k_star"))
        if f.rank >= 1:
            refs["q_star"], refs["methods"]["q_star"] = reference_q_star(spec, f, refs.get("lambda"))
    return refs


# ---------------------------------------------------------------- diagnostics


def classify_timesteps(
    trace,
    *,
    k_star: int | None = None,
    rank: int | None = None,
    lam: int | None = None,
    vertex_count: int | None = None,
) -> list[str | None]:
    """Label each estimator step ``good``, ``bad_small`` or ``bad_large``.

    With ``k_star`` and ``rank`` the good window is k*/(2r) < q < 2rk*; with
    ``lam`` and ``vertex_count`` it is lam/n^2 <= eta <= lam.  Steps without
    an estimate (zero-value elements) are labelled None.
    """
    if k_star is not None and rank is not None:
        low, high, closed = Fraction(k_star, 2 * rank), Fraction(2 * rank * k_star), False
    elif lam is not None and vertex_count is not None:
        low, high, closed = Fraction(lam, vertex_count**2), Fraction(lam), True
    else:
        raise ConfigurationError("classification needs k_star and rank, or lambda and vertex_count")
    labels: list[str | None] = []
    for step in trace:
        est = step.estimate
        if est is None:
            labels.append(None)
            continue
        if closed:
            labels.append("bad_small" if est < low else "bad_large" if est > high else "good")
        else:
            labels.append("bad_small" if est <= low else "bad_large" if est >= high else "good")
    return labels


def good_subset(labels) -> list[int]:
    return [t for t, label in enumerate(labels) if label == "good"]


def _classify(config: ExperimentConfig, refs: dict, spec: InstanceSpec, trace) -> list | None:
    if config.algorithm in _HYPERGRAPH_ALGORITHMS:
        if "lambda" not in refs:
            return None
        return classify_timesteps(trace, lam=refs["lambda"], vertex_count=spec.hypergraph().vertex_count)
    if config.algorithm in _QUOTIENT_ALGORITHMS and "k_star" in refs:
        return classify_timesteps(trace, k_star=refs["k_star"], rank=refs["rank"])
    return None


# ---------------------------------------------------------------- runner


def _estimate_json(value):
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else str(value)
    return value


class _Runner:
    def __init__(self, config: ExperimentConfig, spec: InstanceSpec, f: Polymatroid, refs: dict):
        self.config = config
        self.spec = spec
        self.f = f
        self.refs = refs
        algo = config.algorithm
        self.q_solver = None
        self.eta = None
        if algo in ("alg1", "alg1_combined"):
            self.q_solver = self._pick_q_solver()
        if algo in ("alg2", "alg2_combined"):
            _table_guard(f, "strength-decomposition estimator")
            self.eta = EtaEstimator(f)
        if algo in ("ccv_known", "ccv_offline"):
            self.k_star = refs["k_star"] if "k_star" in refs else reference_k_star(spec, f)[0]

    def _pick_q_solver(self):
        mode = self.config.q_solver
        special = specialized_q_solver(self.spec)
        if mode == "specialized":
            if special is None:
                raise ConfigurationError(f"no specialized q_t solver for {self.spec.kind} instances")
            return special
        if mode == "auto" and special is not None:
            return special
        _table_guard(self.f, "generic q_t solver")
        return GenericQSolver(self.f)

    def run(self, trial: int) -> tuple[dict, ColorAssignment]:
        seed = mix64(self.config.master_seed, trial)
        rng = make_rng(seed)
        f, r, algo = self.f, self.refs["rank"], self.config.algorithm
        if algo == "greedy":
            out = greedy_single(f, r)
        elif algo == "ccv_known":
            out = ccv_known_kstar(f, self.k_star, rng, r)
        elif algo == "ccv_offline":
            out = ccv_offline(f, rng, self.k_star)
        elif algo == "alg1":
            out = alg1(f, r, self.q_solver, rng)
        elif algo == "alg2":
            out = alg2(f, r, rng, self.eta)
        elif algo == "alg1_combined":
            out = combined_alg1(f, r, rng, self.q_solver)
        elif algo == "alg2_combined":
            out = combined_alg2(f, r, rng, self.eta)
        elif algo == "alg3":
            out = alg3(self.spec.hypergraph(), rng)
        else:
            out = combined_alg3(self.spec.hypergraph(), rng)
        record = {
            "trial": trial,
            "algorithm": algo,
            "seed": seed,
            "branch": out.branch,
            "base_colors": count_base_colors(f, out),
            "opt_ref": self.refs.get("opt"),
            "k_star_ref": self.refs.get("k_star"),
            "lambda_ref": self.refs.get("lambda"),
            "good_count": None,
            "bad_count": None,
        }
        labels = _classify(self.config, self.refs, self.spec, out.trace)
        if labels is not None and any(label is not None for label in labels):
            record["good_count"] = sum(label == "good" for label in labels)
            record["bad_count"] = sum(label in ("bad_small", "bad_large") for label in labels)
        if self.config.include_trace:
            record["trace"] = [
                {**step.to_json(), "estimate": _estimate_json(step.estimate), "label": None if labels is None else labels[step.t]}
                for step in out.trace
            ]
        return record, out


def _table_guard(f: Polymatroid, what: str) -> None:
    # fail before any trial instead of after building tables for every shorter prefix
    if f.n > MAX_TABLE_BITS:
        raise CapacityError(f"{what}: {f.n} elements exceed the exhaustive limit {MAX_TABLE_BITS}")


def _check_compatible(config: ExperimentConfig, spec: InstanceSpec, r: int) -> None:
    if config.algorithm in _HYPERGRAPH_ALGORITHMS:
        if spec.kind not in ("graphic", "connectivity"):
            raise ConfigurationError(f"{config.algorithm} needs a graphic or connectivity instance, got {spec.kind}")
        if spec.hypergraph().vertex_count < 2:
            raise ConfigurationError(f"{config.algorithm} needs at least two vertices")
    if config.algorithm in ("alg1", "alg2") and r < 2:
        raise ConfigurationError(f"{config.algorithm} needs rank >= 2 (got {r}); use {config.algorithm}_combined")


def run_experiment(config: ExperimentConfig, base_dir: Path | None = None) -> dict:
    spec = resolve_instance(config.instance, base_dir)
    f = spec.oracle()
    r = f.rank
    _check_compatible(config, spec, r)
    refs = compute_references(spec, f, config.reference, need_lambda=config.algorithm in _HYPERGRAPH_ALGORITHMS)
    runner = _Runner(config, spec, f, refs)

    trials = range(int(config.trials))
    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(runner.run, trials))
    else:
        results = [runner.run(i) for i in trials]
    per_trial = [record for record, _ in sorted(results, key=lambda item: item[0]["trial"])]

    counts = [rec["base_colors"] for rec in per_trial]
    mean = statistics.fmean(counts)
    aggregate = {
        "trials": len(counts),
        "mean_base_colors": mean,
        "min_base_colors": min(counts),
        "max_base_colors": max(counts),
        "std_base_colors": statistics.stdev(counts) if len(counts) > 1 else 0.0,
        "branches": _branch_counts(per_trial),
    }
    if "opt" in refs:
        aggregate["competitive_ratio"] = refs["opt"] / mean if mean > 0 else math.inf

    return {
        "config": config.to_json(),
        "per_trial": per_trial,
        "aggregate": aggregate,
        "references": {k: v for k, v in refs.items()},
        "diagnostics": _diagnostics(config, refs, spec, results),
    }


def _branch_counts(per_trial) -> dict:
    out: dict[str, int] = {}
    for rec in per_trial:
        if rec["branch"] is not None:
            out[rec["branch"]] = out.get(rec["branch"], 0) + 1
    return dict(sorted(out.items()))


def _diagnostics(config, refs, spec, results) -> dict:
    """Estimates are deterministic per timestep, so one algorithm trace fixes every flag."""
    for rec, out in sorted(results, key=lambda item: item[0]["trial"]):
        if any(step.estimate is not None for step in out.trace):
            labels = _classify(config, refs, spec, out.trace)
            if labels is None:
                break
            return {
                "source_trial": rec["trial"],
                "flags": labels,
                "good": labels.count("good"),
                "bad_small": labels.count("bad_small"),
                "bad_large": labels.count("bad_large"),
            }
    return {"source_trial": None, "flags": None, "good": None, "bad_small": None, "bad_large": None}


# ---------------------------------------------------------------- output


def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, default=_json_default) + "\n"


def _json_default(value):
    if isinstance(value, Fraction):
        return str(value)
    raise TypeError(f"cannot serialize {type(value).__name__}")


def render_csv(report: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in report["per_trial"]:
        writer.writerow(["" if rec[c] is None else rec[c] for c in CSV_COLUMNS])
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="polybases", description="Run online base-packing experiments.")
    p.add_argument("--config", metavar="PATH", help="JSON config file; other flags override its fields")
    p.add_argument("--instance", metavar="PATH", help="instance JSON file")
    p.add_argument("--algorithm", metavar="NAME", choices=ALGORITHMS)
    p.add_argument("--trials", metavar="N", type=int)
    p.add_argument("--seed", metavar="U64", type=int, dest="master_seed")
    p.add_argument("--q-solver", metavar="MODE", choices=Q_SOLVERS, dest="q_solver")
    p.add_argument("--reference", metavar="LEVEL", choices=REFERENCE_LEVELS)
    p.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--workers", type=int, help="thread pool size for trials")
    p.add_argument("--no-trace", action="store_true", help="omit per-step traces from the JSON report")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    settings: dict = {}
    base_dir = None
    if args.config:
        config_path = Path(args.config)
        settings = json.loads(config_path.read_text())
        base_dir = config_path.parent
    for name in ("instance", "algorithm", "trials", "master_seed", "q_solver", "reference", "workers"):
        value = getattr(args, name)
        if value is not None:
            settings[name] = value
    if args.instance:
        base_dir = None
    if args.no_trace:
        settings["include_trace"] = False
    if "instance" not in settings:
        parser.error("an instance is required (--instance or a config file)")
    try:
        config = ExperimentConfig.from_json(settings)
        report = run_experiment(config, base_dir)
    except (ConfigurationError, CapacityError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = render_json(report) if args.format == "json" else render_csv(report)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0
