"""Scheduler behavior: single-day steps, full runs, feasibility, online purity."""

from __future__ import annotations

import random

import pytest

from crowdsched import (
    DayView,
    JobState,
    SchedulerConfig,
    Worker,
    exhaustive_tas,
    objective,
    run_scheduler,
    step_online_greedy,
    step_random,
    step_random_egoistic,
    step_random_egoistic_filter,
    step_tas_online,
    upper_bound,
    validate,
)
from crowdsched.algorithms import ALGORITHMS, STEP_FUNCTIONS
from conftest import build_random_instance, mutate_after_day

ONLINE = tuple(a for a in ALGORITHMS if a != "tas_offline")


def day_view(workers, states, day=0, num_domains=None, available=None):
    k = num_domains if num_domains is not None else len(workers[0].expertise)
    avail = tuple(range(len(workers))) if available is None else tuple(available)
    return DayView(
        day=day,
        num_domains=k,
        workers=tuple(workers),
        active=tuple(states),
        available_workers=avail,
    )


def fresh_state(job_id, domain, quality, cost, release=0):
    return JobState(
        job_id=job_id,
        domain=domain,
        quality=quality,
        cost=cost,
        release=release,
        quality_done=0.0,
        cost_spent=0.0,
        used_workers=frozenset(),
    )


# --- single-day steps -------------------------------------------------


def test_profit_matching_prefers_lower_job_id_on_ties(paper_example):
    # day 0 of the worked example: both open jobs reach worker 2 at profit 2
    states = [fresh_state(0, 0, 5.0, 5.0), fresh_state(1, 0, 4.0, 4.0)]
    view = day_view(paper_example.workers, states, available=[2])
    picked = step_tas_online(view, random.Random(0), SchedulerConfig("tas_online"))
    assert picked == {0: 2}


def test_profit_matching_no_workers():
    states = [fresh_state(0, 0, 1.0, 1.0)]
    view = day_view([Worker((1.0,), (1.0,), (True,))], states, available=[])
    assert step_tas_online(view, random.Random(0), SchedulerConfig("tas_online")) == {}


def test_exact_remaining_budget_keeps_the_edge():
    worker = Worker((1.0,), (2.0,), (True,))
    state = fresh_state(0, 0, 3.0, 2.0)
    view = day_view([worker], [state])
    assert step_tas_online(view, random.Random(0), SchedulerConfig("tas_online")) == {0: 0}


def test_over_budget_edge_is_dropped():
    worker = Worker((1.0,), (2.0,), (True,))
    state = fresh_state(0, 0, 3.0, 1.9)
    view = day_view([worker], [state])
    assert step_tas_online(view, random.Random(0), SchedulerConfig("tas_online")) == {}


def test_random_skips_worker_with_nothing_feasible():
    worker = Worker((0.0, 0.5), (0.3, 0.3), (True,))
    state = fresh_state(0, 0, 1.0, 1.0)  # domain 0, where expertise is zero
    view = day_view([worker], [state])
    assert step_random(view, random.Random(5), SchedulerConfig("random")) == {}


def test_random_is_uniform_over_feasible_jobs(paper_example):
    states = [fresh_state(0, 0, 5.0, 5.0), fresh_state(1, 0, 4.0, 4.0)]
    view = day_view(paper_example.workers, states, available=[2])
    config = SchedulerConfig("random")
    counts = {0: 0, 1: 0}
    runs = 10_000
    for seed in range(runs):
        picked = step_random(view, random.Random(seed), config)
        assert picked and picked[next(iter(picked))] == 2
        counts[next(iter(picked))] += 1
    assert abs(counts[0] / runs - 0.5) <= 0.02
    assert abs(counts[1] / runs - 0.5) <= 0.02


def test_egoistic_falls_back_to_lower_paying_own_domain():
    worker = Worker((0.5, 0.5), (0.9, 0.2), (True,))
    state = fresh_state(0, 1, 1.0, 1.0)  # only feasible work sits in domain 1
    view = day_view([worker], [state])
    picked = step_random_egoistic(view, random.Random(0), SchedulerConfig("random_egoistic"))
    assert picked == {0: 0}


def test_egoistic_prefers_best_paying_domain():
    worker = Worker((0.5, 0.5), (0.9, 0.2), (True,))
    states = [fresh_state(0, 1, 1.0, 1.0), fresh_state(1, 0, 1.0, 1.0)]
    view = day_view([worker], states)
    picked = step_random_egoistic(view, random.Random(0), SchedulerConfig("random_egoistic"))
    assert picked == {1: 0}


def test_egoistic_equal_wages_take_lower_domain_index():
    worker = Worker((0.5, 0.5), (0.4, 0.4), (True,))
    states = [fresh_state(0, 1, 1.0, 1.0), fresh_state(1, 0, 1.0, 1.0)]
    view = day_view([worker], states)
    picked = step_random_egoistic(view, random.Random(0), SchedulerConfig("random_egoistic"))
    assert picked == {1: 0}


def test_egoistic_stays_inside_specialty():
    # wages tempt toward domain 1, but the worker is best in domain 0
    worker = Worker((0.9, 0.1), (0.1, 0.9), (True,))
    state = fresh_state(0, 1, 1.0, 1.0)
    view = day_view([worker], [state])
    picked = step_random_egoistic(view, random.Random(0), SchedulerConfig("random_egoistic"))
    assert picked == {}


def test_egoistic_zero_expertise_everywhere_sits_out():
    worker = Worker((0.0, 0.0), (0.5, 0.5), (True,))
    view = day_view([worker], [fresh_state(0, 0, 1.0, 1.0)])
    picked = step_random_egoistic(view, random.Random(0), SchedulerConfig("random_egoistic"))
    assert picked == {}


def test_filter_drops_job_below_fraction_of_threshold():
    config = SchedulerConfig("random_egoistic_filter", factor=0.3)
    weak = Worker((0.25,), (0.2,), (True,))
    view = day_view([weak], [fresh_state(0, 0, 1.0, 1.0)])
    assert step_random_egoistic_filter(view, random.Random(0), config) == {}


def test_filter_keeps_job_at_exact_fraction():
    config = SchedulerConfig("random_egoistic_filter", factor=0.3)
    worker = Worker((0.30,), (0.2,), (True,))
    view = day_view([worker], [fresh_state(0, 0, 1.0, 1.0)])
    assert step_random_egoistic_filter(view, random.Random(0), config) == {0: 0}


def test_factor_bounds_enforced():
    with pytest.raises(ValueError):
        SchedulerConfig("random_egoistic_filter", factor=0.0)
    with pytest.raises(ValueError):
        SchedulerConfig("random_egoistic_filter", factor=1.0)


def test_greedy_takes_largest_overshoot():
    worker = Worker((0.5,), (0.1,), (True,))
    low = JobState(0, 0, 1.0, 1.0, 0, 0.1, 0.0, frozenset())
    high = JobState(1, 0, 1.0, 1.0, 0, 0.4, 0.0, frozenset())
    view = day_view([worker], [low, high])
    picked = step_online_greedy(view, random.Random(0), SchedulerConfig("online_greedy"))
    assert picked == {0: 0}


def test_greedy_takes_lone_job_even_at_negative_margin():
    worker = Worker((0.2,), (0.1,), (True,))
    state = JobState(0, 0, 1.0, 1.0, 0, 0.5, 0.0, frozenset())
    view = day_view([worker], [state])
    picked = step_online_greedy(view, random.Random(0), SchedulerConfig("online_greedy"))
    assert picked == {0: 0}


def test_greedy_equal_margin_takes_lowest_job_id():
    worker = Worker((0.5,), (0.1,), (True,))
    states = [fresh_state(1, 0, 1.0, 1.0), fresh_state(0, 0, 1.0, 1.0)]
    view = day_view([worker], states)
    picked = step_online_greedy(view, random.Random(0), SchedulerConfig("online_greedy"))
    assert picked == {0: 0}


# --- full runs on the worked example ----------------------------------


def test_online_profit_chasing_completes_one(paper_example):
    sched = run_scheduler(paper_example, SchedulerConfig("tas_online"))
    assert sched.assignments == [[2, 1, None], [None, None, 2]]
    assert objective(paper_example, sched) == 1
    assert validate(paper_example, sched) == []


def test_offline_planner_completes_both(paper_example, closing_schedule):
    config = SchedulerConfig("tas_offline", lookahead=2, minavail=1)
    sched = run_scheduler(paper_example, config)
    assert sched.assignments == closing_schedule.assignments
    assert objective(paper_example, sched) == 2


def test_offline_defaults_cover_whole_horizon(paper_example, closing_schedule):
    # lookahead None means t-1, which on this instance equals the pinned run
    sched = run_scheduler(paper_example, SchedulerConfig("tas_offline"))
    assert sched.assignments == closing_schedule.assignments


def test_offline_zero_lookahead_degenerates(paper_example):
    config = SchedulerConfig("tas_offline", lookahead=0)
    sched = run_scheduler(paper_example, config)
    assert objective(paper_example, sched) == 0


def test_unknown_algorithm_rejected():
    with pytest.raises(ValueError):
        SchedulerConfig("simulated_annealing")


# --- cross-cutting properties -----------------------------------------


def test_every_scheduler_is_feasible_on_fuzzed_instances():
    rng = random.Random(2024)
    for _ in range(40):
        inst = build_random_instance(rng)
        bound = upper_bound(inst)
        for name in ALGORITHMS:
            sched = run_scheduler(inst, SchedulerConfig(name, seed=rng.randrange(1 << 30)))
            assert validate(inst, sched) == [], name
            assert objective(inst, sched) <= bound


def test_no_scheduler_beats_the_exhaustive_optimum():
    rng = random.Random(99)
    for _ in range(12):
        inst = build_random_instance(rng, max_t=4, max_domains=2, max_workers=5, max_jobs=3)
        best, best_sched = exhaustive_tas(inst)
        assert validate(inst, best_sched) == []
        assert objective(inst, best_sched) == best
        for name in ALGORITHMS:
            sched = run_scheduler(inst, SchedulerConfig(name, seed=3))
            assert objective(inst, sched) <= best


def test_identical_seed_replays_identically():
    rng = random.Random(5)
    inst = build_random_instance(rng)
    for name in ALGORITHMS:
        config = SchedulerConfig(name, seed=77)
        first = run_scheduler(inst, config)
        second = run_scheduler(inst, config)
        assert first.assignments == second.assignments


def test_online_decisions_ignore_the_future():
    rng = random.Random(31337)
    checked = 0
    while checked < 15:
        inst = build_random_instance(rng, max_t=8)
        if inst.t < 3:
            continue
        day = inst.t // 2
        mutated = mutate_after_day(inst, day, rng)
        for name in ONLINE:
            config = SchedulerConfig(name, seed=9)
            a = run_scheduler(inst, config)
            b = run_scheduler(mutated, config)
            for j in range(inst.num_jobs):
                assert a.assignments[j][: day + 1] == b.assignments[j][: day + 1], name
        checked += 1


def test_day_view_hides_future_availability(paper_example, monkeypatch):
    """Policies receive calendars blanked past the current day."""
    seen: list[DayView] = []
    original = STEP_FUNCTIONS["random"]

    def spy(view, rng, config):
        seen.append(view)
        return original(view, rng, config)

    monkeypatch.setitem(STEP_FUNCTIONS, "random", spy)
    run_scheduler(paper_example, SchedulerConfig("random", seed=1))
    assert len(seen) == paper_example.t
    for view in seen:
        for worker in view.workers:
            assert not any(worker.availability[view.day + 1 :])
        for state in view.active:
            assert state.release <= view.day
