"""Core data model: instances, schedules, feasibility checking and metrics.

An :class:`Instance` couples a worker pool with a job list over a fixed
horizon of ``t`` timeslots.  Each worker carries per-domain expertise and
wage vectors plus a per-slot availability calendar; each job names a
domain, a quality threshold, a cost budget and a release day.  A
:class:`Schedule` stores one worker id (or ``None``) per job per slot, so
a job can never hold two workers in the same slot by construction.

Worker and job ids are positional: index 0 in the respective list is id 0.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from math import isfinite
from pathlib import Path

#: Absolute tolerance for every threshold comparison on real quantities.
TOLERANCE = 1e-9


@dataclass
class Worker:
    """One worker: expertise and wage per domain, availability per slot."""

    expertise: list[float]
    wage: list[float]
    availability: list[bool]

    def __post_init__(self) -> None:
        # Normalize the containers so value equality does not depend on
        # whether a caller handed in lists, tuples or numpy rows.
        self.expertise = [float(v) for v in self.expertise]
        self.wage = [float(v) for v in self.wage]
        self.availability = [bool(v) for v in self.availability]


@dataclass
class Job:
    """One job: its domain, quality threshold, cost budget and release day."""

    domain: int
    quality: float
    cost: float
    release: int


@dataclass
class Instance:
    t: int
    num_domains: int
    workers: list[Worker]
    jobs: list[Job]

    def __post_init__(self) -> None:
        _check_instance(self)

    @property
    def num_workers(self) -> int:
        return len(self.workers)

    @property
    def num_jobs(self) -> int:
        return len(self.jobs)


@dataclass
class Schedule:
    """Per job: a vector of t entries, each a worker id or None."""

    assignments: list[list[int | None]]


@dataclass(frozen=True)
class Violation:
    """One feasibility breach found by :func:`validate`."""

    rule: str
    job: int | None
    worker: int | None
    slot: int | None
    message: str

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return f"{self.rule}: {self.message}"


@dataclass
class MetricsReport:
    completed: int
    pct_of_bound: float | None
    avg_workers: float
    avg_flow_time: float
    budget_pct: float
    quality_pct: float
    per_day_completed: list[int]
    per_day_quality_pct: list[float]

    def to_dict(self) -> dict:
        return {
            "completed": self.completed,
            "pct_of_bound": self.pct_of_bound,
            "avg_workers": self.avg_workers,
            "avg_flow_time": self.avg_flow_time,
            "budget_pct": self.budget_pct,
            "quality_pct": self.quality_pct,
            "per_day_completed": list(self.per_day_completed),
            "per_day_quality_pct": list(self.per_day_quality_pct),
        }


def _check_instance(inst: Instance) -> None:
    if inst.t < 1:
        raise ValueError(f"horizon must be at least 1 slot, got {inst.t}")
    if inst.num_domains < 1:
        raise ValueError(f"need at least one domain, got {inst.num_domains}")
    for i, w in enumerate(inst.workers):
        if len(w.expertise) != inst.num_domains or len(w.wage) != inst.num_domains:
            raise ValueError(f"worker {i}: expertise/wage vectors must have {inst.num_domains} entries")
        if len(w.availability) != inst.t:
            raise ValueError(f"worker {i}: availability must have {inst.t} entries")
        for k in range(inst.num_domains):
            e, c = w.expertise[k], w.wage[k]
            if not (isfinite(e) and e >= 0.0) or not (isfinite(c) and c >= 0.0):
                raise ValueError(f"worker {i}: expertise and wage must be finite and non-negative")
            if e > 0.0 and c <= 0.0:
                # A positive-expertise domain with zero wage would make the
                # profit ratio blow up; the model forbids free skilled work.
                raise ValueError(f"worker {i}: positive expertise in domain {k} requires a positive wage")
    for j, job in enumerate(inst.jobs):
        if not 0 <= job.domain < inst.num_domains:
            raise ValueError(f"job {j}: domain {job.domain} out of range")
        if not (isfinite(job.quality) and job.quality > 0.0):
            raise ValueError(f"job {j}: quality threshold must be positive")
        if not (isfinite(job.cost) and job.cost > 0.0):
            raise ValueError(f"job {j}: cost budget must be positive")
        if not 0 <= job.release < inst.t:
            raise ValueError(f"job {j}: release {job.release} outside horizon")


def _check_shape(inst: Instance, sched: Schedule) -> None:
    if len(sched.assignments) != inst.num_jobs:
        raise ValueError(
            f"schedule covers {len(sched.assignments)} jobs, instance has {inst.num_jobs}"
        )
    for j, row in enumerate(sched.assignments):
        if len(row) != inst.t:
            raise ValueError(f"job {j}: schedule row has {len(row)} slots, horizon is {inst.t}")
        for d, entry in enumerate(row):
            if entry is not None and not 0 <= entry < inst.num_workers:
                raise ValueError(f"job {j} slot {d}: worker id {entry} out of range")


def job_quality(inst: Instance, sched: Schedule, job_id: int) -> float:
    """Sum of assigned workers' expertise in the job's domain."""
    if not 0 <= job_id < inst.num_jobs:
        raise ValueError(f"unknown job id {job_id}")
    k = inst.jobs[job_id].domain
    return sum(inst.workers[i].expertise[k] for i in sched.assignments[job_id] if i is not None)


def job_cost(inst: Instance, sched: Schedule, job_id: int) -> float:
    """Sum of assigned workers' wages in the job's domain."""
    if not 0 <= job_id < inst.num_jobs:
        raise ValueError(f"unknown job id {job_id}")
    k = inst.jobs[job_id].domain
    return sum(inst.workers[i].wage[k] for i in sched.assignments[job_id] if i is not None)


def objective(inst: Instance, sched: Schedule) -> int:
    """Number of jobs whose accumulated quality reaches their threshold."""
    _check_shape(inst, sched)
    done = 0
    for j, job in enumerate(inst.jobs):
        if job_quality(inst, sched, j) >= job.quality - TOLERANCE:
            done += 1
    return done


def flow_time(inst: Instance, sched: Schedule, job_id: int) -> int:
    """Slots from release through the last worked slot, inclusive; 0 if idle."""
    if not 0 <= job_id < inst.num_jobs:
        raise ValueError(f"unknown job id {job_id}")
    row = sched.assignments[job_id]
    last = max((d for d, entry in enumerate(row) if entry is not None), default=None)
    if last is None:
        return 0
    return last - inst.jobs[job_id].release + 1


def validate(inst: Instance, sched: Schedule) -> list[Violation]:
    """Check a schedule against every feasibility rule.

    Returns one :class:`Violation` per breach, in a deterministic order.
    The one-entry-per-slot schedule layout already rules out a job using
    two workers in the same slot, so that rule needs no check here.
    Malformed shapes raise ``ValueError`` instead of reporting violations.
    """
    _check_shape(inst, sched)
    out: list[Violation] = []

    # A worker may serve at most one job per slot.
    for d in range(inst.t):
        seen: dict[int, int] = {}
        for j in range(inst.num_jobs):
            i = sched.assignments[j][d]
            if i is None:
                continue
            if i in seen:
                out.append(
                    Violation(
                        "worker_overlap", j, i, d,
                        f"worker {i} serves jobs {seen[i]} and {j} in slot {d}",
                    )
                )
            else:
                seen[i] = j

    for j, job in enumerate(inst.jobs):
        row = sched.assignments[j]
        used: dict[int, int] = {}
        for d, i in enumerate(row):
            if i is None:
                continue
            if i in used:
                out.append(
                    Violation(
                        "repeated_worker", j, i, d,
                        f"worker {i} appears twice on job {j} (slots {used[i]} and {d})",
                    )
                )
            else:
                used[i] = d
            if not inst.workers[i].availability[d]:
                out.append(
                    Violation(
                        "unavailable", j, i, d,
                        f"worker {i} is not available in slot {d}",
                    )
                )
            if d < job.release:
                out.append(
                    Violation(
                        "before_release", j, i, d,
                        f"job {j} is worked in slot {d} before its release {job.release}",
                    )
                )
        cost = job_cost(inst, sched, j)
        if cost > job.cost + TOLERANCE:
            out.append(
                Violation(
                    "over_budget", j, None, None,
                    f"job {j} spends {cost:.6g}, budget is {job.cost:.6g}",
                )
            )
    return out


def _completion_day(inst: Instance, sched: Schedule, job_id: int) -> int | None:
    """First day on which the job's accumulated quality crosses its threshold."""
    job = inst.jobs[job_id]
    k = job.domain
    q = 0.0
    for d, i in enumerate(sched.assignments[job_id]):
        if i is not None:
            q += inst.workers[i].expertise[k]
            if q >= job.quality - TOLERANCE:
                return d
    return None


def metrics(inst: Instance, sched: Schedule, upper_bound: int | None = None) -> MetricsReport:
    """Summary statistics of a schedule.

    Averages run over all jobs, completed or not.  ``quality_pct`` is not
    capped at 100, so overshooting jobs raise the mean.  When an upper
    bound is supplied, ``pct_of_bound`` reports completed jobs relative to
    it (0.0 for an empty bound).
    """
    _check_shape(inst, sched)
    n = inst.num_jobs
    completed = 0
    workers_total = 0
    flow_total = 0
    budget_sum = 0.0
    quality_sum = 0.0
    per_day_completed = [0] * inst.t
    per_day_quality = [0.0] * inst.t

    for j, job in enumerate(inst.jobs):
        row = sched.assignments[j]
        q = job_quality(inst, sched, j)
        c = job_cost(inst, sched, j)
        if q >= job.quality - TOLERANCE:
            completed += 1
        workers_total += sum(1 for i in row if i is not None)
        flow_total += flow_time(inst, sched, j)
        budget_sum += 100.0 * c / job.cost
        quality_sum += 100.0 * q / job.quality

        day = _completion_day(inst, sched, j)
        if day is not None:
            for d in range(day, inst.t):
                per_day_completed[d] += 1
        k = job.domain
        prefix = 0.0
        for d, i in enumerate(row):
            if i is not None:
                prefix += inst.workers[i].expertise[k]
            per_day_quality[d] += 100.0 * prefix / job.quality

    if upper_bound is None:
        pct = None
    elif upper_bound == 0:
        pct = 0.0
    else:
        pct = 100.0 * completed / upper_bound

    return MetricsReport(
        completed=completed,
        pct_of_bound=pct,
        avg_workers=workers_total / n if n else 0.0,
        avg_flow_time=flow_total / n if n else 0.0,
        budget_pct=budget_sum / n if n else 0.0,
        quality_pct=quality_sum / n if n else 0.0,
        per_day_completed=per_day_completed,
        per_day_quality_pct=[s / n if n else 0.0 for s in per_day_quality],
    )


# --- serialization ---------------------------------------------------------
#
# Instances and schedules travel as JSON.  Ids stay positional, reals keep
# full precision through repr-based float formatting in the json module.


def instance_to_dict(inst: Instance) -> dict:
    return {
        "t": inst.t,
        "num_domains": inst.num_domains,
        "workers": [
            {
                "expertise": list(w.expertise),
                "wage": list(w.wage),
                "availability": [1 if a else 0 for a in w.availability],
            }
            for w in inst.workers
        ],
        "jobs": [
            {"domain": j.domain, "quality": j.quality, "cost": j.cost, "release": j.release}
            for j in inst.jobs
        ],
    }


def instance_from_dict(data: dict) -> Instance:
    try:
        workers = [
            Worker(
                expertise=[float(x) for x in w["expertise"]],
                wage=[float(x) for x in w["wage"]],
                availability=[bool(a) for a in w["availability"]],
            )
            for w in data["workers"]
        ]
        jobs = [
            Job(
                domain=int(j["domain"]),
                quality=float(j["quality"]),
                cost=float(j["cost"]),
                release=int(j["release"]),
            )
            for j in data["jobs"]
        ]
        return Instance(t=int(data["t"]), num_domains=int(data["num_domains"]), workers=workers, jobs=jobs)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed instance document: {exc}") from exc


def schedule_to_dict(sched: Schedule) -> dict:
    return {"assignments": [list(row) for row in sched.assignments]}


def schedule_from_dict(data: dict) -> Schedule:
    try:
        rows = [[None if x is None else int(x) for x in row] for row in data["assignments"]]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed schedule document: {exc}") from exc
    return Schedule(assignments=rows)


def write_instance(inst: Instance, path: str | Path) -> None:
    Path(path).write_text(json.dumps(instance_to_dict(inst)) + "\n")


def read_instance(path: str | Path) -> Instance:
    return instance_from_dict(json.loads(Path(path).read_text()))


def write_schedule(sched: Schedule, path: str | Path) -> None:
    Path(path).write_text(json.dumps(schedule_to_dict(sched)) + "\n")


def read_schedule(path: str | Path) -> Schedule:
    return schedule_from_dict(json.loads(Path(path).read_text()))
