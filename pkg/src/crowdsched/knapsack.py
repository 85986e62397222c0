"""Covering knapsack: cheapest item set whose total value clears a threshold.

Costs are discretized onto a configurable grid before the dynamic
program runs.  Rounding is asymmetric on purpose: item costs round up
and the budget rounds down, so a packing reported as affordable is
affordable in exact arithmetic too.  The same DP backs both the
per-job packing of the offline scheduler and the global upper bound.

Tie policy for :func:`min_cost_cover`, in order: minimal discretized
cost, then maximal total value, then the lexicographically smallest id
set.  Reconstruction walks a suffix table so the id tie-break is global,
not a per-step heuristic.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import ceil, floor, isfinite

import numpy as np

from .errors import SizeLimitError
from .model import TOLERANCE, Instance

#: Largest item count brute_force_cover will enumerate.
BRUTE_FORCE_LIMIT = 15


@dataclass(frozen=True)
class PackItem:
    """One selectable unit: id, the value it adds, the cost it incurs."""

    item_id: int
    value: float
    cost: float

    def __post_init__(self) -> None:
        if not (isfinite(self.value) and self.value >= 0.0):
            raise ValueError(f"item {self.item_id}: value must be finite and non-negative")
        if not (isfinite(self.cost) and self.cost > 0.0):
            raise ValueError(f"item {self.item_id}: cost must be finite and positive")


@dataclass(frozen=True)
class Packing:
    item_ids: tuple[int, ...]
    total_value: float
    total_cost: float


def _check_inputs(items, quality_need: float, budget: float, resolution: float) -> None:
    if not (isfinite(resolution) and resolution > 0.0):
        raise ValueError(f"resolution must be positive, got {resolution}")
    if not (isfinite(budget) and budget > 0.0):
        raise ValueError(f"budget must be positive, got {budget}")
    if not (isfinite(quality_need) and quality_need >= 0.0):
        raise ValueError(f"quality threshold must be non-negative, got {quality_need}")
    seen: set[int] = set()
    for item in items:
        if not (isfinite(item.value) and item.value >= 0.0):
            raise ValueError(f"item {item.item_id}: value must be finite and non-negative")
        if not (isfinite(item.cost) and item.cost > 0.0):
            raise ValueError(f"item {item.item_id}: cost must be finite and positive")
        if item.item_id in seen:
            raise ValueError(f"duplicate item id {item.item_id}")
        seen.add(item.item_id)


def _cost_units(cost: float, resolution: float) -> int:
    # Round up, with a fuzz term so grid-exact costs do not jump a unit.
    return max(1, ceil(cost / resolution - TOLERANCE))


def _budget_units(budget: float, resolution: float) -> int:
    return floor(budget / resolution + TOLERANCE)


def min_cost_cover(
    items,
    quality_need: float,
    budget: float,
    resolution: float = 1e-3,
    stats: dict | None = None,
) -> Packing | None:
    """Cheapest subset reaching ``quality_need`` within ``budget``, or None.

    ``stats``, when given, receives the DP table dimensions under
    ``dp_rows``/``dp_cols`` (items+1 by budget_units+1).
    """
    items = list(items)
    _check_inputs(items, quality_need, budget, resolution)
    items.sort(key=lambda it: it.item_id)

    max_units = _budget_units(budget, resolution)
    usable = [(it, _cost_units(it.cost, resolution)) for it in items]
    usable = [(it, cu) for it, cu in usable if cu <= max_units]
    n = len(usable)
    if stats is not None:
        stats["dp_rows"] = n + 1
        stats["dp_cols"] = max_units + 1

    # suffix[i][c] = best value over subsets of items i.. with discretized
    # cost exactly c; -inf where no subset lands on c.
    suffix = np.full((n + 1, max_units + 1), -np.inf)
    suffix[n, 0] = 0.0
    for i in range(n - 1, -1, -1):
        item, cu = usable[i]
        row = suffix[i + 1].copy()
        row[cu:] = np.maximum(row[cu:], suffix[i + 1, : max_units + 1 - cu] + item.value)
        suffix[i] = row

    reachable = np.nonzero(suffix[0] >= quality_need - TOLERANCE)[0]
    if len(reachable) == 0:
        return None
    best_units = int(reachable[0])

    chosen: list[int] = []
    remaining = best_units
    target = suffix[0, best_units]
    for i in range(n):
        item, cu = usable[i]
        if cu <= remaining and item.value + suffix[i + 1, remaining - cu] >= target - TOLERANCE:
            chosen.append(item.item_id)
            remaining -= cu
            target = suffix[i + 1, remaining]
        else:
            target = suffix[i + 1, remaining]

    by_id = {it.item_id: it for it, _ in usable}
    return Packing(
        item_ids=tuple(chosen),
        total_value=float(sum(by_id[i].value for i in chosen)),
        total_cost=float(sum(by_id[i].cost for i in chosen)),
    )


def brute_force_cover(items, quality_need: float, budget: float) -> Packing | None:
    """Reference cover by full subset scan, exact arithmetic on given costs.

    Same tie policy as :func:`min_cost_cover`; caps at BRUTE_FORCE_LIMIT
    items.
    """
    items = list(items)
    _check_inputs(items, quality_need, budget, resolution=1.0)
    if len(items) > BRUTE_FORCE_LIMIT:
        raise SizeLimitError(
            f"brute force cover caps at {BRUTE_FORCE_LIMIT} items, got {len(items)}"
        )
    items.sort(key=lambda it: it.item_id)

    best: tuple[float, float, tuple[int, ...]] | None = None  # (cost, -value, ids)
    n = len(items)
    for mask in range(1 << n):
        value = 0.0
        cost = 0.0
        ids: list[int] = []
        for i in range(n):
            if mask >> i & 1:
                value += items[i].value
                cost += items[i].cost
                ids.append(items[i].item_id)
        if cost > budget + TOLERANCE or value < quality_need - TOLERANCE:
            continue
        key = (cost, -value, tuple(ids))
        if best is None or _cover_key_less(key, best):
            best = key
    if best is None:
        return None
    return Packing(item_ids=best[2], total_value=-best[1], total_cost=best[0])


def _cover_key_less(a: tuple[float, float, tuple[int, ...]], b) -> bool:
    if a[0] < b[0] - TOLERANCE:
        return True
    if a[0] > b[0] + TOLERANCE:
        return False
    if a[1] < b[1] - TOLERANCE:
        return True
    if a[1] > b[1] + TOLERANCE:
        return False
    return a[2] < b[2]


def upper_bound(instance: Instance, resolution: float = 1e-3) -> int:
    """Jobs completable in isolation: contention between jobs is ignored.

    A worker is eligible for a job when their expertise in its domain is
    positive and they have at least one available slot at or after the
    release day.  Each job then reduces to a feasibility check of the
    covering knapsack over its eligible workers.
    """
    if not (isfinite(resolution) and resolution > 0.0):
        raise ValueError(f"resolution must be positive, got {resolution}")
    count = 0
    last_free = _last_free_slot(instance)
    for job in instance.jobs:
        k = job.domain
        values = []
        units = []
        max_units = _budget_units(job.cost, resolution)
        for i, w in enumerate(instance.workers):
            if w.expertise[k] <= 0.0 or last_free[i] < job.release:
                continue
            cu = _cost_units(w.wage[k], resolution)
            if cu <= max_units:
                values.append(w.expertise[k])
                units.append(cu)
        if _coverable(values, units, max_units, job.quality):
            count += 1
    return count


def _last_free_slot(instance: Instance) -> list[int]:
    out = []
    for w in instance.workers:
        free = [d for d, a in enumerate(w.availability) if a]
        out.append(free[-1] if free else -1)
    return out


def _coverable(values: list[float], units: list[int], max_units: int, need: float) -> bool:
    if need <= TOLERANCE:
        return True
    if not values:
        return False
    best = np.zeros(max_units + 1)
    for value, cu in zip(values, units):
        best[cu:] = np.maximum(best[cu:], best[: max_units + 1 - cu] + value)
        if best[-1] >= need - TOLERANCE:
            return True
    return bool(best[-1] >= need - TOLERANCE)
