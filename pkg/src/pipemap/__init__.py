"""Interval mappings of linear pipeline workflows onto heterogeneous platforms.

The package models bi-criteria (period, latency) costs of contiguous-interval
mappings, provides six greedy splitting heuristics and exact exhaustive
oracles, generates seeded random and reduction-based instances, validates the
cost model against a rendezvous simulation, and runs deterministic experiment
sweeps with delimited and rendered outputs.
"""

from .errors import (
    AlwaysFails,
    DuplicateProcessor,
    IndexOutOfRange,
    Infeasible,
    InstanceTooLarge,
    MappingInvalid,
    NeverFails,
    NonContiguousIntervals,
    NoSplitPossible,
)
from .gen import (
    ExperimentConfig,
    NmwtsInstance,
    Xorshift64Star,
    build_reduction_instance,
    generate,
    generate_batch,
)
from .harness import (
    FailurePoint,
    SweepRow,
    SweepSpec,
    aggregate_plot_data,
    default_grid,
    failure_point,
    failure_threshold,
    failure_threshold_details,
    geometric_grid,
    read_csv,
    run_sweep,
    write_csv,
    write_plot_data,
)
from .heuristics import (
    CANONICAL_NAMES,
    BicriteriaTarget,
    HeuristicState,
    SplitCandidate,
    canonical_name,
    enumerate_2splits,
    enumerate_3splits,
    fixed_latency,
    fixed_period,
    h1_sp_mono_p,
    h2a_explo3_mono,
    h2b_explo3_bi,
    h3_sp_bi_p,
    h4_sp_mono_l,
    h5_sp_bi_l,
    initial_state,
    native_mode,
    run_heuristic,
)
from .model import (
    CostReport,
    IntervalMapping,
    PipelineApp,
    Platform,
    evaluate,
    interval_cycle_time,
    interval_latency_term,
    stage_work,
    validate,
    within_limit,
)
from .oracle import (
    Hetero1DInstance,
    ParetoPoint,
    brute_force_min_period,
    fastest_processor,
    hetero_1d_partition_decide,
    min_latency_given_period,
    min_period_given_latency,
    optimal_latency,
    optimal_latency_mapping,
    pareto_front,
)
from .sim import SimReport, simulate
from .textio import (
    format_instance,
    format_mapping,
    load_instance,
    parse_instance,
    parse_mapping,
    save_instance,
)

__version__ = "0.1.0"
