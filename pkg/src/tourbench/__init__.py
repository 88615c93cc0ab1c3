"""Instrumented constructive tour heuristics with exact oracles and
growth-bound reports."""

from .bounds import (
    BoundReport,
    HarmonicLogSweep,
    PrSumResult,
    build_report,
    harmonic,
    harmonic_vs_log,
    pr_sum,
)
from .heuristics import (
    CHEAPEST_INSERTION,
    GREEDY,
    HEURISTICS,
    NN,
    cheapest_insertion,
    greedy_edge,
    nearest_neighbor,
)
from .instance import (
    Arc,
    Instance,
    InstanceError,
    arc,
    arc_weight,
    euclidean_from_points,
    is_metric,
    make_instance,
)
from .oracle import (
    BRUTE_LIMIT,
    HELD_KARP_LIMIT,
    OracleResult,
    UnsupportedSizeError,
    brute_force_opt,
    held_karp_opt,
    optimum,
    tour_weight,
)
from .trace import (
    AvArcVerdict,
    ConstructionStep,
    PartialSolution,
    StepError,
    Trace,
    TraceMismatchError,
    Violation,
    apply_step,
    check_avarc,
    step_ratio,
    validate_trace,
)
from .tsplib import (
    TraceJsonError,
    TsplibError,
    emit_euc2d,
    emit_tsplib,
    gen_random_euclidean,
    gen_random_metric,
    parse_tsplib,
    trace_from_json,
    trace_to_json,
)

__version__ = "0.1.0"
