"""Instance generation, exact reference solving, and hardness reductions.

All randomness flows through one numpy Generator seeded explicitly, and
the draw order is part of the contract: expertise, wages, availability,
job domains, qualities, releases.  Reordering draws silently changes
every downstream benchmark, so treat the sequence as frozen.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from math import ceil, isfinite

import numpy as np

from .errors import GenerationError, SizeLimitError
from .model import TOLERANCE, Instance, Job, Schedule, Worker

#: Default visited-node allowance for the exhaustive solver.
SEARCH_NODE_BUDGET = 2_000_000

#: Largest universe size brute_force_3dm will enumerate.
MATCHING_ENUM_LIMIT = 5


@dataclass(frozen=True)
class GenParams:
    """Knobs for synthetic instances; defaults give the standard workload.

    ``domain_affinity`` and ``home_concentration`` shape how strongly
    workers specialize.  At affinity 1.0 (the default) expertise is
    drawn independently per (worker, domain) cell and no specialization
    exists.  Below 1.0 each worker gets a home domain and keeps only
    that fraction of their drawn expertise everywhere else, so the pool
    splits into specialists with weak cross-domain skills.  The home
    domain is drawn with probability proportional to
    (domain index + 1) ** -home_concentration: 0.0 spreads homes
    uniformly, larger values crowd workers into low-index domains while
    job demand stays uniform, which starves the high-index domains.
    """

    t: int = 30
    num_domains: int = 10
    num_workers: int = 1000
    num_jobs: int = 600
    lambda_workers: float = 200.0
    mu_jobs: float = 20.0
    expertise_mean: float = 0.5
    expertise_spread: float = 0.15
    wage_mean: float = 0.5
    wage_spread: float = 0.2
    quality_alpha: float = 5.0
    quality_beta: float = 1.0
    cost_slope: float = 3.0
    domain_affinity: float = 1.0
    home_concentration: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        _check_params(self)


def _check_params(p: GenParams) -> None:
    if p.t < 1:
        raise ValueError(f"horizon must be at least 1, got {p.t}")
    if p.num_domains < 1:
        raise ValueError(f"need at least one domain, got {p.num_domains}")
    if p.num_workers < 1:
        raise ValueError(f"need at least one worker, got {p.num_workers}")
    if p.num_jobs < 0:
        raise ValueError(f"job count must be non-negative, got {p.num_jobs}")
    for name in ("lambda_workers", "mu_jobs"):
        v = getattr(p, name)
        if not (isfinite(v) and v > 0.0):
            raise ValueError(f"{name} must be positive, got {v}")
    for name in ("expertise_spread", "wage_spread", "quality_alpha", "quality_beta", "cost_slope"):
        v = getattr(p, name)
        if not (isfinite(v) and v > 0.0):
            raise ValueError(f"{name} must be positive, got {v}")
    for name in ("expertise_mean", "wage_mean"):
        v = getattr(p, name)
        if not (isfinite(v) and 0.0 < v <= 1.0):
            raise ValueError(f"{name} must lie in (0, 1], got {v}")
    if not (isfinite(p.domain_affinity) and 0.0 < p.domain_affinity <= 1.0):
        raise ValueError(
            f"domain_affinity must lie in (0, 1], got {p.domain_affinity}"
        )
    if not (isfinite(p.home_concentration) and p.home_concentration >= 0.0):
        raise ValueError(
            f"home_concentration must be non-negative, got {p.home_concentration}"
        )
    if p.mu_jobs * p.t < p.num_jobs:
        raise GenerationError(
            f"arrival rate {p.mu_jobs} over {p.t} days averages fewer "
            f"arrivals than the {p.num_jobs} jobs requested"
        )


def _truncated_normal(rng: np.random.Generator, mean: float, sd: float, shape) -> np.ndarray:
    """Normal draws resampled until every entry lands in (0, 1]."""
    out = rng.normal(mean, sd, shape)
    bad = (out <= 0.0) | (out > 1.0)
    while bad.any():
        out[bad] = rng.normal(mean, sd, int(bad.sum()))
        bad = (out <= 0.0) | (out > 1.0)
    return out


def generate(params: GenParams) -> Instance:
    """Sample a synthetic instance; identical params give identical output."""
    rng = np.random.default_rng(params.seed)
    U, K, t, J = params.num_workers, params.num_domains, params.t, params.num_jobs

    expertise = _truncated_normal(rng, params.expertise_mean, params.expertise_spread, (U, K))
    wage = _truncated_normal(rng, params.wage_mean, params.wage_spread, (U, K))

    avail = np.zeros((U, t), dtype=bool)
    for d in range(t):
        n = min(int(rng.poisson(params.lambda_workers)), U)
        if n > 0:
            avail[rng.choice(U, size=n, replace=False), d] = True

    domains = rng.integers(0, K, J)
    quality = np.maximum(rng.beta(params.quality_alpha, params.quality_beta, J), 1e-12)
    cost = params.cost_slope * quality

    releases = np.full(J, t - 1, dtype=int)
    assigned = 0
    for d in range(t):
        if assigned >= J:
            break
        n = min(int(rng.poisson(params.mu_jobs)), J - assigned)
        releases[assigned : assigned + n] = d
        assigned += n
    # Jobs the arrival draws never reached spill onto the last day.

    if params.domain_affinity < 1.0:
        # Specialization draws come after everything above so that
        # affinity 1.0 instances stay byte-identical across versions
        # that lack the knob entirely.
        weights = np.arange(1, K + 1, dtype=float) ** -params.home_concentration
        homes = rng.choice(K, size=U, p=weights / weights.sum())
        off = np.ones((U, K), dtype=float) * params.domain_affinity
        off[np.arange(U), homes] = 1.0
        expertise = expertise * off

    workers = [
        Worker(
            expertise=tuple(float(x) for x in expertise[i]),
            wage=tuple(float(x) for x in wage[i]),
            availability=tuple(bool(b) for b in avail[i]),
        )
        for i in range(U)
    ]
    jobs = [
        Job(
            domain=int(domains[j]),
            quality=float(quality[j]),
            cost=float(cost[j]),
            release=int(releases[j]),
        )
        for j in range(J)
    ]
    return Instance(t=t, num_domains=K, workers=workers, jobs=jobs)


def scale_instance(
    instance: Instance,
    expertise_multiplier: float = 1.0,
    worker_fraction: float = 1.0,
    seed: int = 0,
) -> Instance:
    """Rescale the labor supply of an existing instance.

    Every expertise entry is multiplied by ``expertise_multiplier`` and
    clamped at 1.0, then a uniform sample of ``worker_fraction`` of the
    pool (rounded up) is kept, renumbered in ascending original order.
    Both knobs at 1.0 return the instance unchanged with no draw
    consumed, so a sweep's baseline point is the input itself.
    """
    if not (isfinite(expertise_multiplier) and expertise_multiplier > 0.0):
        raise ValueError(
            f"expertise multiplier must be positive, got {expertise_multiplier}"
        )
    if not (isfinite(worker_fraction) and 0.0 < worker_fraction <= 1.0):
        raise ValueError(
            f"worker fraction must lie in (0, 1], got {worker_fraction}"
        )
    workers = instance.workers
    if expertise_multiplier != 1.0:
        workers = [
            Worker(
                expertise=tuple(
                    min(1.0, e * expertise_multiplier) for e in w.expertise
                ),
                wage=w.wage,
                availability=w.availability,
            )
            for w in workers
        ]
    if worker_fraction != 1.0:
        U = len(workers)
        m = max(1, ceil(worker_fraction * U - TOLERANCE))
        rng = np.random.default_rng(seed)
        keep = np.sort(rng.choice(U, size=m, replace=False))
        workers = [workers[i] for i in keep]
    if workers is instance.workers:
        return instance
    return replace(instance, workers=workers)


# --- three-dimensional matching ---------------------------------------


@dataclass(frozen=True)
class ThreeDMInstance:
    """Matching universe of size u per axis plus the allowed triples."""

    u: int
    triples: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        if self.u < 1:
            raise ValueError(f"universe size must be at least 1, got {self.u}")
        seen = set()
        for tr in self.triples:
            if len(tr) != 3:
                raise ValueError(f"triple {tr} must have exactly three entries")
            if any(not 0 <= x < self.u for x in tr):
                raise ValueError(f"triple {tr} out of range for universe {self.u}")
            if tr in seen:
                raise ValueError(f"duplicate triple {tr}")
            seen.add(tr)


def reduce_3dm(tdm: ThreeDMInstance) -> Instance:
    """Encode a matching instance as a three-day scheduling instance.

    One domain and one job per triple, with quality and budget 3.  Each
    universe element becomes a worker available on exactly one day (axis
    one on day 0, axis two on day 1, axis three on day 2), with unit
    expertise in precisely the domains of the triples containing it.
    The instance admits a schedule completing u jobs iff the matching
    instance has a perfect matching.
    """
    u = tdm.u
    n_domains = max(len(tdm.triples), 1)
    day_of_axis = ((True, False, False), (False, True, False), (False, False, True))

    expertise = [[0.0] * n_domains for _ in range(3 * u)]
    for m, (x, y, z) in enumerate(tdm.triples):
        expertise[x][m] = 1.0
        expertise[u + y][m] = 1.0
        expertise[2 * u + z][m] = 1.0

    workers = [
        Worker(
            expertise=tuple(expertise[i]),
            wage=tuple(1.0 for _ in range(n_domains)),
            availability=day_of_axis[i // u],
        )
        for i in range(3 * u)
    ]
    jobs = [
        Job(domain=m, quality=3.0, cost=3.0, release=0)
        for m in range(len(tdm.triples))
    ]
    return Instance(t=3, num_domains=n_domains, workers=workers, jobs=jobs)


def brute_force_3dm(tdm: ThreeDMInstance) -> int:
    """Largest set of pairwise disjoint triples, by exhaustive search."""
    if tdm.u > MATCHING_ENUM_LIMIT:
        raise SizeLimitError(
            f"matching enumeration caps at universe {MATCHING_ENUM_LIMIT}, got {tdm.u}"
        )
    triples = tdm.triples
    best = 0

    def walk(idx: int, used_x: int, used_y: int, used_z: int, count: int) -> None:
        nonlocal best
        if count > best:
            best = count
        if idx == len(triples) or count + (len(triples) - idx) <= best:
            return
        x, y, z = triples[idx]
        if not (used_x >> x & 1 or used_y >> y & 1 or used_z >> z & 1):
            walk(idx + 1, used_x | 1 << x, used_y | 1 << y, used_z | 1 << z, count + 1)
        walk(idx + 1, used_x, used_y, used_z, count)

    walk(0, 0, 0, 0, 0)
    return best


# --- exhaustive scheduling --------------------------------------------


def exhaustive_tas(
    instance: Instance, node_budget: int = SEARCH_NODE_BUDGET
) -> tuple[int, Schedule]:
    """Exact optimum by depth-first search over job-slot cells.

    Cells are visited job-major, days ascending from each release.  At a
    cell the branches are the feasible workers in ascending id order and
    then the empty assignment; workers with zero expertise in the job's
    domain are never tried since they can only burn budget.  Search
    effort is metered by visited cells against ``node_budget``.
    """
    t = instance.t
    jobs = instance.jobs
    workers = instance.workers
    n_jobs = len(jobs)

    # possible[j]: ignoring other jobs, could j conceivably finish alone?
    from .knapsack import upper_bound  # local import to avoid a cycle

    possible = [
        upper_bound(replace(instance, jobs=[job])) == 1 for job in jobs
    ]
    suffix_possible = [0] * (n_jobs + 1)
    for j in range(n_jobs - 1, -1, -1):
        suffix_possible[j] = suffix_possible[j + 1] + (1 if possible[j] else 0)

    slot_used: list[set[int]] = [set() for _ in range(t)]
    assign = [[None] * t for _ in range(n_jobs)]  # type: list[list[int | None]]
    best_count = -1
    best_assign: list[list[int | None]] = []
    visited = 0

    def place(j: int, d: int, completed: int, q: float, c: float) -> None:
        nonlocal best_count, best_assign, visited
        if j == n_jobs:
            if completed > best_count:
                best_count = completed
                best_assign = [row.copy() for row in assign]
            return
        if completed + 1 + suffix_possible[j + 1] <= best_count:
            return
        job = jobs[j]
        if d == t:
            done = 1 if q >= job.quality - TOLERANCE else 0
            place(j + 1, jobs[j + 1].release if j + 1 < n_jobs else 0, completed + done, 0.0, 0.0)
            return

        visited += 1
        if visited > node_budget:
            raise SizeLimitError(
                f"exhaustive search exceeded its node budget of {node_budget}"
            )

        row = assign[j]
        finished = q >= job.quality - TOLERANCE
        if not finished:
            for i, w in enumerate(workers):
                if (
                    w.expertise[job.domain] > 0.0
                    and w.availability[d]
                    and i not in slot_used[d]
                    and i not in row
                    and w.wage[job.domain] <= job.cost - c + TOLERANCE
                ):
                    row[d] = i
                    slot_used[d].add(i)
                    place(j, d + 1, completed, q + w.expertise[job.domain], c + w.wage[job.domain])
                    slot_used[d].remove(i)
                    row[d] = None
        place(j, d + 1, completed, q, c)

    place(0, jobs[0].release if n_jobs else 0, 0, 0.0, 0.0)
    schedule = Schedule(assignments=[[x for x in row] for row in best_assign] or [[None] * t for _ in range(n_jobs)])
    return best_count if best_count >= 0 else 0, schedule
