"""Benchmark and sweep runners with delimited output.

A benchmark runs every configured algorithm over every seed of a
workload and returns flat result rows, one per (algorithm, seed), plus
per-day trajectory rows.  A sweep repeats that along one axis: thinning
the worker pool, or rescaling everyone's expertise.

Row order is deterministic (grid order, then seed order, then algorithm
order) and independent of worker-process count, so two runs of the same
spec agree byte for byte once the timing column is dropped;
:func:`result_hash` implements exactly that comparison.
"""
from __future__ import annotations

import csv
import hashlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from functools import partial
from math import isfinite
from pathlib import Path
from time import perf_counter

from .algorithms import ALGORITHMS, SchedulerConfig, run_scheduler
from .knapsack import upper_bound
from .model import Instance, metrics, read_instance
from .simgen import GenParams, generate, scale_instance

RESULT_COLUMNS = (
    "algorithm",
    "seed",
    "completed",
    "pct_of_bound",
    "avg_workers",
    "avg_flow_time",
    "budget_pct",
    "quality_pct",
    "wall_time_ms",
)
PER_DAY_COLUMNS = ("algorithm", "seed", "day", "completed", "quality_pct")
SWEEP_COLUMNS = ("axis", "value") + RESULT_COLUMNS

SWEEP_AXES = ("worker_fraction", "expertise_multiplier")


@dataclass(frozen=True)
class ResultRow:
    algorithm: str
    seed: int
    completed: int
    pct_of_bound: float
    avg_workers: float
    avg_flow_time: float
    budget_pct: float
    quality_pct: float
    wall_time_ms: float

    COLUMNS = RESULT_COLUMNS


@dataclass(frozen=True)
class PerDayRow:
    algorithm: str
    seed: int
    day: int
    completed: int
    quality_pct: float

    COLUMNS = PER_DAY_COLUMNS


@dataclass(frozen=True)
class SweepRow:
    axis: str
    value: float
    algorithm: str
    seed: int
    completed: int
    pct_of_bound: float
    avg_workers: float
    avg_flow_time: float
    budget_pct: float
    quality_pct: float
    wall_time_ms: float

    COLUMNS = SWEEP_COLUMNS


@dataclass(frozen=True)
class BenchmarkSpec:
    """What to run: algorithms x seeds over one workload source.

    Exactly one of ``gen_params`` (fresh instance per seed) and
    ``instance_path`` (one fixed instance, seeds vary only the policy
    randomness) must be set.
    """

    algorithms: tuple[str, ...]
    seeds: tuple[int, ...]
    gen_params: GenParams | None = None
    instance_path: str | None = None
    resolution: float = 1e-3
    factor: float = 0.3
    lookahead: int | None = None
    minavail: int = 1

    def __post_init__(self) -> None:
        if not self.algorithms:
            raise ValueError("benchmark needs at least one algorithm")
        for name in self.algorithms:
            if name not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {name!r}")
        if len(set(self.algorithms)) != len(self.algorithms):
            raise ValueError("algorithm list contains duplicates")
        if not self.seeds:
            raise ValueError("benchmark needs at least one seed")
        if (self.gen_params is None) == (self.instance_path is None):
            raise ValueError("set exactly one of gen_params and instance_path")
        # Per-run knob validation lives in SchedulerConfig; constructing one
        # here surfaces bad values before any work is scheduled.
        SchedulerConfig(
            algorithm=self.algorithms[0],
            factor=self.factor,
            lookahead=self.lookahead,
            minavail=self.minavail,
            resolution=self.resolution,
        )


@dataclass(frozen=True)
class SweepSpec:
    """One axis, a grid of points, and the benchmark to run at each point."""

    axis: str
    grid: tuple[float, ...]
    base: BenchmarkSpec

    def __post_init__(self) -> None:
        if self.axis not in SWEEP_AXES:
            raise ValueError(f"unknown sweep axis {self.axis!r}, expected one of {SWEEP_AXES}")
        if not self.grid:
            raise ValueError("sweep needs a non-empty grid")
        if list(self.grid) != sorted(set(self.grid)):
            raise ValueError("sweep grid must be strictly ascending")
        for v in self.grid:
            if not isfinite(v):
                raise ValueError(f"sweep grid value {v} is not finite")
            if self.axis == "worker_fraction" and not 0.0 < v <= 1.0:
                raise ValueError(f"worker fraction {v} outside (0, 1]")
            if self.axis == "expertise_multiplier" and v <= 0.0:
                raise ValueError(f"expertise multiplier {v} must be positive")
        if self.axis == "expertise_multiplier" and 1.0 not in self.grid:
            raise ValueError("a multiplier sweep needs the baseline point 1.0 in its grid")


def _materialize(spec: BenchmarkSpec, seed: int) -> Instance:
    if spec.gen_params is not None:
        return generate(replace(spec.gen_params, seed=seed))
    return read_instance(spec.instance_path)


def _scheduler_config(spec: BenchmarkSpec, algorithm: str, seed: int) -> SchedulerConfig:
    return SchedulerConfig(
        algorithm=algorithm,
        seed=seed,
        factor=spec.factor,
        lookahead=spec.lookahead,
        minavail=spec.minavail,
        resolution=spec.resolution,
    )


def _run_point(
    spec: BenchmarkSpec, instance: Instance, seed: int
) -> tuple[list[ResultRow], list[PerDayRow]]:
    bound = upper_bound(instance, spec.resolution)
    rows: list[ResultRow] = []
    days: list[PerDayRow] = []
    for name in spec.algorithms:
        start = perf_counter()
        schedule = run_scheduler(instance, _scheduler_config(spec, name, seed))
        elapsed_ms = (perf_counter() - start) * 1000.0
        report = metrics(instance, schedule, bound)
        rows.append(
            ResultRow(
                algorithm=name,
                seed=seed,
                completed=report.completed,
                pct_of_bound=report.pct_of_bound,
                avg_workers=report.avg_workers,
                avg_flow_time=report.avg_flow_time,
                budget_pct=report.budget_pct,
                quality_pct=report.quality_pct,
                wall_time_ms=elapsed_ms,
            )
        )
        days.extend(
            PerDayRow(
                algorithm=name,
                seed=seed,
                day=d,
                completed=report.per_day_completed[d],
                quality_pct=report.per_day_quality_pct[d],
            )
            for d in range(instance.t)
        )
    return rows, days


def _bench_seed(spec: BenchmarkSpec, seed: int) -> tuple[list[ResultRow], list[PerDayRow]]:
    return _run_point(spec, _materialize(spec, seed), seed)


def _sweep_task(spec: SweepSpec, task: tuple[float, int]) -> list[SweepRow]:
    value, seed = task
    base = spec.base
    if spec.axis == "worker_fraction":
        instance = scale_instance(_materialize(base, seed), 1.0, value, seed)
    else:
        instance = scale_instance(_materialize(base, seed), value, 1.0, seed)
    rows, _ = _run_point(base, instance, seed)
    return [
        SweepRow(axis=spec.axis, value=value, **{c: getattr(r, c) for c in RESULT_COLUMNS})
        for r in rows
    ]


def _map_tasks(fn, tasks, jobs: int):
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
        return list(pool.map(fn, tasks))


def run_benchmark(
    spec: BenchmarkSpec, jobs: int = 1
) -> tuple[list[ResultRow], list[PerDayRow]]:
    """All (algorithm, seed) results plus per-day trajectories."""
    outputs = _map_tasks(partial(_bench_seed, spec), list(spec.seeds), jobs)
    rows: list[ResultRow] = []
    days: list[PerDayRow] = []
    for r, d in outputs:
        rows.extend(r)
        days.extend(d)
    return rows, days


def run_sweep(spec: SweepSpec, jobs: int = 1) -> list[SweepRow]:
    tasks = [(value, seed) for value in spec.grid for seed in spec.base.seeds]
    outputs = _map_tasks(partial(_sweep_task, spec), tasks, jobs)
    return [row for chunk in outputs for row in chunk]


# --- delimited output -------------------------------------------------------


def _cell(value) -> str:
    if value is None:
        return ""
    return str(value)  # str() of a float round-trips in full precision


def write_rows_csv(rows, path: str | Path) -> None:
    """Write dataclass rows as CSV; the row type supplies the header."""
    if not rows:
        raise ValueError("refusing to write an empty result file")
    columns = rows[0].COLUMNS
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(getattr(row, col)) for col in columns])


def result_hash(rows) -> str:
    """Content digest of result rows with the timing column masked out.

    Two runs of one spec must agree on this digest no matter how many
    worker processes they used.
    """
    digest = hashlib.sha256()
    for row in rows:
        stable = [_cell(getattr(row, col)) for col in row.COLUMNS if col != "wall_time_ms"]
        digest.update("|".join(stable).encode())
        digest.update(b"\n")
    return digest.hexdigest()


# --- config-file parsing ----------------------------------------------------


def _gen_params_from_dict(data: dict) -> GenParams:
    allowed = set(GenParams.__dataclass_fields__)
    unknown = set(data) - allowed
    if unknown:
        raise ValueError(f"unknown generator keys: {', '.join(sorted(unknown))}")
    return GenParams(**data)


def benchmark_spec_from_dict(data: dict) -> BenchmarkSpec:
    data = dict(data)
    gen = data.pop("gen", None)
    kwargs = {
        "algorithms": tuple(data.pop("algorithms", ALGORITHMS)),
        "seeds": tuple(int(s) for s in data.pop("seeds", (0,))),
        "gen_params": _gen_params_from_dict(gen) if gen is not None else None,
        "instance_path": data.pop("instance", None),
    }
    for key in ("resolution", "factor", "lookahead", "minavail"):
        if key in data:
            kwargs[key] = data.pop(key)
    if data:
        raise ValueError(f"unknown benchmark keys: {', '.join(sorted(data))}")
    return BenchmarkSpec(**kwargs)


def sweep_spec_from_dict(data: dict) -> SweepSpec:
    data = dict(data)
    try:
        axis = data.pop("axis")
        grid = tuple(float(v) for v in data.pop("grid"))
    except KeyError as exc:
        raise ValueError(f"sweep config is missing {exc}") from exc
    return SweepSpec(axis=axis, grid=grid, base=benchmark_spec_from_dict(data))
