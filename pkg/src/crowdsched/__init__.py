"""Scheduling benchmark library for expert crowdsourcing workloads."""

from .algorithms import (
    ALGORITHMS,
    DayView,
    JobState,
    SchedulerConfig,
    run_scheduler,
    step_online_greedy,
    step_random,
    step_random_egoistic,
    step_random_egoistic_filter,
    step_tas_online,
)
from .errors import GenerationError, SizeLimitError
from .experiment import (
    BenchmarkSpec,
    PerDayRow,
    ResultRow,
    SweepRow,
    SweepSpec,
    benchmark_spec_from_dict,
    result_hash,
    run_benchmark,
    run_sweep,
    sweep_spec_from_dict,
    write_rows_csv,
)
from .knapsack import PackItem, Packing, brute_force_cover, min_cost_cover, upper_bound
from .matching import (
    BipartiteGraph,
    MatchingResult,
    brute_force_matching,
    graph_from_edges,
    max_weight_matching,
)
from .model import (
    TOLERANCE,
    Instance,
    Job,
    MetricsReport,
    Schedule,
    Violation,
    Worker,
    flow_time,
    job_cost,
    job_quality,
    metrics,
    objective,
    read_instance,
    read_schedule,
    validate,
    write_instance,
    write_schedule,
)
from .simgen import (
    GenParams,
    ThreeDMInstance,
    brute_force_3dm,
    exhaustive_tas,
    generate,
    reduce_3dm,
    scale_instance,
)

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "BenchmarkSpec",
    "BipartiteGraph",
    "DayView",
    "GenParams",
    "GenerationError",
    "Instance",
    "Job",
    "JobState",
    "MatchingResult",
    "MetricsReport",
    "PackItem",
    "Packing",
    "PerDayRow",
    "ResultRow",
    "Schedule",
    "SchedulerConfig",
    "SizeLimitError",
    "SweepRow",
    "SweepSpec",
    "ThreeDMInstance",
    "TOLERANCE",
    "Violation",
    "Worker",
    "brute_force_3dm",
    "brute_force_cover",
    "brute_force_matching",
    "exhaustive_tas",
    "flow_time",
    "generate",
    "graph_from_edges",
    "job_cost",
    "job_quality",
    "max_weight_matching",
    "metrics",
    "min_cost_cover",
    "objective",
    "read_instance",
    "read_schedule",
    "reduce_3dm",
    "result_hash",
    "benchmark_spec_from_dict",
    "run_benchmark",
    "run_scheduler",
    "run_sweep",
    "sweep_spec_from_dict",
    "scale_instance",
    "step_online_greedy",
    "step_random",
    "step_random_egoistic",
    "step_random_egoistic_filter",
    "step_tas_online",
    "upper_bound",
    "validate",
    "write_instance",
    "write_rows_csv",
    "write_schedule",
]
