"""Schedulers: five per-day online policies plus an offline planner.

Online policies are plain functions over an immutable :class:`DayView`,
so a policy can only ever see the current day: which jobs are released
and unfinished, who is available right now, and the static worker
catalog.  The driver owns all mutation and replays decisions into the
schedule.  Randomized policies draw from one ``random.Random`` seeded
from the config, and draws depend only on the view content, which keeps
full runs reproducible and makes prefix decisions invariant to edits of
later days.

``run_scheduler`` dispatches by ``config.algorithm``:

* ``tas_online``: per day, a maximum-weight matching of available
  workers to open jobs under profit weights (expertise over wage).
* ``random``: workers in shuffled order each pick a uniformly random
  feasible job.
* ``random_egoistic``: like ``random``, but each worker stays inside
  the domains they are best at, preferring the best-paying one that has
  any feasible job.
* ``random_egoistic_filter``: egoistic, additionally refusing jobs the
  worker's expertise barely dents (below a configurable fraction of the
  job's threshold).
* ``online_greedy``: shuffled workers each take the feasible job where
  their expertise overshoots the accumulated quality the most.
* ``tas_offline``: plans the whole horizon up front; per job (release
  order) it buys a cheapest covering crew and books each member into
  the latest open slot inside the job's window.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from math import isfinite

from .knapsack import PackItem, min_cost_cover
from .matching import graph_from_edges, max_weight_matching
from .model import TOLERANCE, Instance, Schedule, Worker

ALGORITHMS = (
    "tas_online",
    "random",
    "random_egoistic",
    "random_egoistic_filter",
    "online_greedy",
    "tas_offline",
)


@dataclass(frozen=True)
class SchedulerConfig:
    algorithm: str
    seed: int = 0
    #: random_egoistic_filter: refuse jobs where expertise < factor * threshold.
    factor: float = 0.3
    #: tas_offline: window length beyond the release day; None means the full horizon.
    lookahead: int | None = None
    #: tas_offline: free slots a worker needs inside the window to be considered.
    minavail: int = 1
    #: cost grid for the offline covering step.
    resolution: float = 1e-3

    def __post_init__(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ValueError(
                f"unknown algorithm {self.algorithm!r}, expected one of {', '.join(ALGORITHMS)}"
            )
        if not (isfinite(self.factor) and 0.0 < self.factor < 1.0):
            raise ValueError(f"filter factor must lie strictly between 0 and 1, got {self.factor}")
        if self.lookahead is not None and self.lookahead < 0:
            raise ValueError(f"lookahead must be non-negative, got {self.lookahead}")
        if self.minavail < 1:
            raise ValueError(f"minavail must be at least 1, got {self.minavail}")
        if not (isfinite(self.resolution) and self.resolution > 0.0):
            raise ValueError(f"resolution must be positive, got {self.resolution}")


@dataclass(frozen=True)
class JobState:
    """Snapshot of one released, unfinished job as a policy may see it."""

    job_id: int
    domain: int
    quality: float
    cost: float
    release: int
    quality_done: float
    cost_spent: float
    used_workers: frozenset[int]

    @property
    def remaining_budget(self) -> float:
        return self.cost - self.cost_spent


@dataclass(frozen=True)
class DayView:
    """Everything a per-day policy is allowed to look at."""

    day: int
    num_domains: int
    workers: tuple[Worker, ...]
    active: tuple[JobState, ...]
    available_workers: tuple[int, ...]


def _can_serve(worker: Worker, worker_id: int, state: JobState) -> bool:
    k = state.domain
    return (
        worker_id not in state.used_workers
        and worker.expertise[k] > 0.0
        and worker.wage[k] <= state.remaining_budget + TOLERANCE
    )


def step_tas_online(view: DayView, rng: random.Random, config: SchedulerConfig) -> dict[int, int]:
    """Profit matching: weight expertise/wage, exact matcher, no randomness."""
    edges = []
    for li, i in enumerate(view.available_workers):
        worker = view.workers[i]
        for rj, state in enumerate(view.active):
            if _can_serve(worker, i, state):
                edges.append((li, rj, worker.expertise[state.domain] / worker.wage[state.domain]))
    result = max_weight_matching(
        graph_from_edges(len(view.available_workers), len(view.active), edges)
    )
    return {view.active[rj].job_id: view.available_workers[li] for li, rj in result.pairs}


def _shuffled(view: DayView, rng: random.Random) -> list[int]:
    order = list(view.available_workers)
    rng.shuffle(order)
    return order


def step_random(view: DayView, rng: random.Random, config: SchedulerConfig) -> dict[int, int]:
    taken: dict[int, int] = {}
    for i in _shuffled(view, rng):
        worker = view.workers[i]
        feasible = [
            s for s in view.active if s.job_id not in taken and _can_serve(worker, i, s)
        ]
        if feasible:
            taken[feasible[rng.randrange(len(feasible))].job_id] = i
    return taken


def _egoistic_pick(
    view: DayView,
    rng: random.Random,
    worker_id: int,
    taken: dict[int, int],
    keep,
) -> JobState | None:
    """Uniform choice inside the best-paying of the worker's own domains.

    A worker's own domains are those of peak expertise (every domain
    tied at the maximum).  They are scanned in decreasing wage order,
    ties broken by ascending index, and the first one holding a feasible
    job wins.  Domains the worker is weaker in are never considered: the
    self-interested policies stay inside their specialty rather than
    chasing wages into work they would botch.
    """
    worker = view.workers[worker_id]
    best = max(worker.expertise)
    if best <= 0.0:
        return None
    by_domain: dict[int, list[JobState]] = {}
    for s in view.active:
        if s.job_id not in taken and _can_serve(worker, worker_id, s) and keep(worker, s):
            by_domain.setdefault(s.domain, []).append(s)
    own = [k for k in range(view.num_domains) if worker.expertise[k] == best]
    for k in sorted(own, key=lambda k: (-worker.wage[k], k)):
        group = by_domain.get(k)
        if group:
            return group[rng.randrange(len(group))]
    return None


def step_random_egoistic(view: DayView, rng: random.Random, config: SchedulerConfig) -> dict[int, int]:
    taken: dict[int, int] = {}
    for i in _shuffled(view, rng):
        pick = _egoistic_pick(view, rng, i, taken, lambda w, s: True)
        if pick is not None:
            taken[pick.job_id] = i
    return taken


def step_random_egoistic_filter(
    view: DayView, rng: random.Random, config: SchedulerConfig
) -> dict[int, int]:
    # Keep a job only when the worker moves it by at least factor * threshold;
    # exact equality stays in.
    def keep(worker: Worker, s: JobState) -> bool:
        return worker.expertise[s.domain] >= s.quality * config.factor - TOLERANCE

    taken: dict[int, int] = {}
    for i in _shuffled(view, rng):
        pick = _egoistic_pick(view, rng, i, taken, keep)
        if pick is not None:
            taken[pick.job_id] = i
    return taken


def step_online_greedy(view: DayView, rng: random.Random, config: SchedulerConfig) -> dict[int, int]:
    """Each worker takes the job their expertise overshoots the most."""
    taken: dict[int, int] = {}
    for i in _shuffled(view, rng):
        worker = view.workers[i]
        feasible = [
            s for s in view.active if s.job_id not in taken and _can_serve(worker, i, s)
        ]
        if feasible:
            best = max(
                feasible,
                key=lambda s: (worker.expertise[s.domain] - s.quality_done, -s.job_id),
            )
            taken[best.job_id] = i
    return taken


STEP_FUNCTIONS = {
    "tas_online": step_tas_online,
    "random": step_random,
    "random_egoistic": step_random_egoistic,
    "random_egoistic_filter": step_random_egoistic_filter,
    "online_greedy": step_online_greedy,
}


def run_scheduler(instance: Instance, config: SchedulerConfig) -> Schedule:
    """Run the configured policy over the full horizon."""
    if config.algorithm == "tas_offline":
        return _run_offline(instance, config)
    step = STEP_FUNCTIONS[config.algorithm]
    rng = random.Random(config.seed)
    t, n = instance.t, instance.num_jobs
    assignments: list[list[int | None]] = [[None] * t for _ in range(n)]
    quality_done = [0.0] * n
    cost_spent = [0.0] * n
    used: list[set[int]] = [set() for _ in range(n)]

    for d in range(t):
        # The view must not reveal anything about the future, so worker
        # availability past the current day is blanked before policies see it.
        catalog = tuple(
            Worker(
                expertise=w.expertise,
                wage=w.wage,
                availability=tuple(w.availability[: d + 1]) + (False,) * (t - d - 1),
            )
            for w in instance.workers
        )
        active = tuple(
            JobState(
                job_id=j,
                domain=job.domain,
                quality=job.quality,
                cost=job.cost,
                release=job.release,
                quality_done=quality_done[j],
                cost_spent=cost_spent[j],
                used_workers=frozenset(used[j]),
            )
            for j, job in enumerate(instance.jobs)
            if job.release <= d and quality_done[j] < job.quality - TOLERANCE
        )
        available = tuple(
            i for i, w in enumerate(instance.workers) if w.availability[d]
        )
        view = DayView(
            day=d,
            num_domains=instance.num_domains,
            workers=catalog,
            active=active,
            available_workers=available,
        )
        decisions = step(view, rng, config)
        _apply_day(instance, d, decisions, assignments, quality_done, cost_spent, used)
    return Schedule(assignments=assignments)


def _apply_day(
    instance: Instance,
    day: int,
    decisions: dict[int, int],
    assignments: list[list[int | None]],
    quality_done: list[float],
    cost_spent: list[float],
    used: list[set[int]],
) -> None:
    # Guards here trip only on a policy bug, never on user input.
    booked: set[int] = set()
    for job_id in sorted(decisions):
        worker_id = decisions[job_id]
        job = instance.jobs[job_id]
        worker = instance.workers[worker_id]
        if worker_id in booked:
            raise RuntimeError(f"policy booked worker {worker_id} twice on day {day}")
        if not worker.availability[day] or worker_id in used[job_id] or day < job.release:
            raise RuntimeError(
                f"policy made an infeasible assignment: worker {worker_id}, "
                f"job {job_id}, day {day}"
            )
        booked.add(worker_id)
        assignments[job_id][day] = worker_id
        quality_done[job_id] += worker.expertise[job.domain]
        cost_spent[job_id] += worker.wage[job.domain]
        used[job_id].add(worker_id)


def _run_offline(instance: Instance, config: SchedulerConfig) -> Schedule:
    """Plan with full knowledge: cheapest covering crew, latest-slot booking.

    Jobs are handled in release order (ties by id).  For each job the
    workers with any free slot budgeted inside the job's window feed a
    covering knapsack; the chosen crew is booked highest expertise first,
    each into the latest slot still free for both worker and job.  Booked
    slots are consumed globally, and a crew member with no slot left is
    dropped, which can leave the job short.
    """
    t = instance.t
    lookahead = config.lookahead if config.lookahead is not None else t - 1
    free = [list(w.availability) for w in instance.workers]
    assignments: list[list[int | None]] = [[None] * t for _ in range(instance.num_jobs)]

    for j in sorted(range(instance.num_jobs), key=lambda j: (instance.jobs[j].release, j)):
        job = instance.jobs[j]
        lo, hi = job.release, min(job.release + lookahead, t - 1)
        items = []
        for i, worker in enumerate(instance.workers):
            if worker.expertise[job.domain] <= 0.0:
                continue
            open_slots = sum(1 for d in range(lo, hi + 1) if free[i][d])
            if open_slots >= config.minavail:
                items.append(
                    PackItem(
                        item_id=i,
                        value=worker.expertise[job.domain],
                        cost=worker.wage[job.domain],
                    )
                )
        packing = min_cost_cover(items, job.quality, job.cost, config.resolution)
        if packing is None:
            continue
        row = assignments[j]
        crew = sorted(
            packing.item_ids,
            key=lambda i: (-instance.workers[i].expertise[job.domain], i),
        )
        for i in crew:
            slot = next(
                (d for d in range(hi, lo - 1, -1) if free[i][d] and row[d] is None),
                None,
            )
            if slot is None:
                continue
            row[slot] = i
            free[i][slot] = False
    return Schedule(assignments=assignments)
