"""Figure rendering for benchmark and sweep results.

Everything draws through the Agg backend into PNG files next to the
delimited output; nothing here ever opens a window.
"""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_AXIS_LABEL = {
    "worker_fraction": "worker fraction kept",
    "expertise_multiplier": "expertise multiplier",
}


def _algorithm_order(rows) -> list[str]:
    order: list[str] = []
    for row in rows:
        if row.algorithm not in order:
            order.append(row.algorithm)
    return order


def _series_by_algorithm(rows, x_attr: str, y_attr: str):
    """Mean of y per (algorithm, x), x ascending."""
    out = {}
    for name in _algorithm_order(rows):
        buckets: dict[float, list[float]] = {}
        for row in rows:
            if row.algorithm == name:
                buckets.setdefault(getattr(row, x_attr), []).append(getattr(row, y_attr))
        xs = sorted(buckets)
        ys = [float(np.mean(buckets[x])) for x in xs]
        out[name] = (xs, ys)
    return out


def _line_figure(series, xlabel: str, ylabel: str, path: Path, vline: float | None = None) -> None:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for name, (xs, ys) in series.items():
        ax.plot(xs, ys, marker="o", markersize=3, label=name)
    if vline is not None:
        ax.axvline(vline, color="grey", linestyle=":", linewidth=1)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def render_benchmark_figures(rows, per_day_rows, out_dir: str | Path) -> list[Path]:
    """Three PNGs: completions over time, quality over time, final completions."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []

    p = out / "completion_over_time.png"
    _line_figure(
        _series_by_algorithm(per_day_rows, "day", "completed"),
        "day", "jobs completed (mean over seeds)", p,
    )
    paths.append(p)

    p = out / "quality_over_time.png"
    _line_figure(
        _series_by_algorithm(per_day_rows, "day", "quality_pct"),
        "day", "accumulated quality, % of threshold (mean over seeds)", p,
    )
    paths.append(p)

    p = out / "completed_by_algorithm.png"
    order = _algorithm_order(rows)
    means = []
    spreads = []
    for name in order:
        vals = [row.completed for row in rows if row.algorithm == name]
        means.append(float(np.mean(vals)))
        spreads.append(float(np.std(vals)))
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.bar(range(len(order)), means, yerr=spreads, capsize=3)
    ax.set_xticks(range(len(order)))
    ax.set_xticklabels(order, rotation=20, ha="right", fontsize=8)
    ax.set_ylabel("jobs completed (mean over seeds)")
    fig.tight_layout()
    fig.savefig(p)
    plt.close(fig)
    paths.append(p)

    return paths


def render_sweep_figures(rows, out_dir: str | Path) -> list[Path]:
    """Two PNGs: completions and crew size against the sweep axis."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    axis = rows[0].axis if rows else "worker_fraction"
    xlabel = _AXIS_LABEL.get(axis, axis)
    vline = 1.0 if axis == "expertise_multiplier" else None
    paths = []

    p = out / "sweep_completed.png"
    _line_figure(
        _series_by_algorithm(rows, "value", "completed"),
        xlabel, "jobs completed (mean over seeds)", p, vline,
    )
    paths.append(p)

    p = out / "sweep_avg_workers.png"
    _line_figure(
        _series_by_algorithm(rows, "value", "avg_workers"),
        xlabel, "workers per job (mean over seeds)", p, vline,
    )
    paths.append(p)

    return paths
