"""Shared fixtures: the worked example, a fuzz generator, acceptance reporting."""

from __future__ import annotations

import random

import pytest

from crowdsched import Instance, Job, Schedule, Worker


@pytest.fixture
def paper_example() -> Instance:
    """Two jobs, three workers, three days, one domain.

    Worker 0 is the expensive expert (only day 2), worker 1 the strong
    mid-price one (only day 1), worker 2 the cheap generalist (days 0
    and 2).  The optimum completes both jobs; day-by-day profit chasing
    completes only one.
    """
    return Instance(
        t=3,
        num_domains=1,
        workers=[
            Worker(expertise=(2.0,), wage=(3.0,), availability=(False, False, True)),
            Worker(expertise=(3.0,), wage=(2.0,), availability=(False, True, False)),
            Worker(expertise=(2.0,), wage=(1.0,), availability=(True, False, True)),
        ],
        jobs=[
            Job(domain=0, quality=5.0, cost=5.0, release=0),
            Job(domain=0, quality=4.0, cost=4.0, release=0),
        ],
    )


@pytest.fixture
def closing_schedule() -> Schedule:
    # job 0: worker 1 on day 1 plus worker 2 on day 2; job 1: worker 2 then worker 0
    return Schedule(assignments=[[None, 1, 2], [2, None, 0]])


def build_random_instance(
    rng: random.Random,
    max_t: int = 10,
    max_domains: int = 3,
    max_workers: int = 30,
    max_jobs: int = 15,
) -> Instance:
    """Small arbitrary-but-valid instance for fuzzing the schedulers."""
    t = rng.randint(1, max_t)
    k = rng.randint(1, max_domains)
    num_workers = rng.randint(1, max_workers)
    num_jobs = rng.randint(1, max_jobs)
    workers = []
    for _ in range(num_workers):
        expertise = tuple(
            0.0 if rng.random() < 0.3 else rng.uniform(0.05, 1.0) for _ in range(k)
        )
        wage = tuple(rng.uniform(0.05, 1.0) for _ in range(k))
        availability = tuple(rng.random() < 0.5 for _ in range(t))
        workers.append(Worker(expertise=expertise, wage=wage, availability=availability))
    jobs = [
        Job(
            domain=rng.randrange(k),
            quality=rng.uniform(0.1, 2.5),
            cost=rng.uniform(0.1, 3.0),
            release=rng.randrange(t),
        )
        for _ in range(num_jobs)
    ]
    return Instance(t=t, num_domains=k, workers=workers, jobs=jobs)


@pytest.fixture
def make_random_instance():
    return build_random_instance


def mutate_after_day(inst: Instance, day: int, rng: random.Random) -> Instance:
    """Arbitrary rewrite of everything after `day`: calendars and unreleased jobs.

    The revealed prefix is untouched: worker availability up to `day`,
    and every job released by `day`, are copied as they are.
    """
    workers = [
        Worker(
            expertise=w.expertise,
            wage=w.wage,
            availability=[
                a if d <= day else rng.random() < 0.5
                for d, a in enumerate(w.availability)
            ],
        )
        for w in inst.workers
    ]
    jobs = []
    for job in inst.jobs:
        if job.release <= day:
            jobs.append(job)
        else:
            jobs.append(
                Job(
                    domain=rng.randrange(inst.num_domains),
                    quality=rng.uniform(0.1, 2.5),
                    cost=rng.uniform(0.1, 3.0),
                    release=rng.randint(day + 1, inst.t - 1),
                )
            )
    return Instance(t=inst.t, num_domains=inst.num_domains, workers=workers, jobs=jobs)


# Acceptance tests push one line per criterion here; the summary hook
# replays them after the run so they are visible even under capture.
_criterion_lines: list[str] = []


@pytest.fixture(scope="session")
def criterion_report():
    def _report(num: int, title: str, ok: bool, detail: str) -> None:
        line = f"criterion {num:02d} [{title}] {'PASS' if ok else 'FAIL'}: {detail}"
        _criterion_lines.append(line)
        print(line)

    return _report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _criterion_lines:
        terminalreporter.section("acceptance criteria")
        for line in _criterion_lines:
            terminalreporter.line(line)
