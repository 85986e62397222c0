"""Benchmark runner: specs, rows, CSV output, hashing, parallel determinism."""

from __future__ import annotations

import csv

import pytest

from crowdsched import (
    BenchmarkSpec,
    GenParams,
    SweepSpec,
    benchmark_spec_from_dict,
    result_hash,
    run_benchmark,
    run_sweep,
    sweep_spec_from_dict,
    write_instance,
    write_rows_csv,
)
from crowdsched.experiment import PER_DAY_COLUMNS, RESULT_COLUMNS, SWEEP_COLUMNS

TINY = GenParams(
    t=5,
    num_domains=2,
    num_workers=12,
    num_jobs=6,
    lambda_workers=6.0,
    mu_jobs=1.5,
)


@pytest.fixture(scope="module")
def tiny_run():
    spec = BenchmarkSpec(
        algorithms=("tas_online", "random"), seeds=(0, 1, 2), gen_params=TINY
    )
    return spec, run_benchmark(spec)


def test_row_counts(tiny_run):
    spec, (rows, day_rows) = tiny_run
    assert len(rows) == 6
    assert len(day_rows) == 6 * TINY.t
    assert {(r.algorithm, r.seed) for r in rows} == {
        (a, s) for a in spec.algorithms for s in spec.seeds
    }


def test_rows_stay_under_the_bound(tiny_run):
    _, (rows, _) = tiny_run
    for row in rows:
        assert 0.0 <= row.pct_of_bound <= 100.0
        assert row.wall_time_ms >= 0.0
        assert 0 <= row.completed <= TINY.num_jobs


def test_per_day_series_is_cumulative(tiny_run):
    _, (rows, day_rows) = tiny_run
    final = {(r.algorithm, r.seed): r.completed for r in rows}
    for algorithm, seed in final:
        series = [
            r.completed
            for r in sorted(
                (r for r in day_rows if (r.algorithm, r.seed) == (algorithm, seed)),
                key=lambda r: r.day,
            )
        ]
        assert series == sorted(series)
        assert series[-1] == final[(algorithm, seed)]


def test_benchmark_spec_from_dict_round_trip():
    spec = benchmark_spec_from_dict(
        {
            "algorithms": ["tas_online"],
            "seeds": [3, 4],
            "gen": {"t": 5, "num_workers": 12, "num_jobs": 6, "mu_jobs": 1.5,
                    "lambda_workers": 6.0, "num_domains": 2},
            "lookahead": 4,
            "minavail": 2,
        }
    )
    assert spec.algorithms == ("tas_online",)
    assert spec.seeds == (3, 4)
    assert spec.gen_params.t == 5
    assert spec.lookahead == 4 and spec.minavail == 2


def test_benchmark_spec_rejects_unknown_keys():
    with pytest.raises(ValueError):
        benchmark_spec_from_dict({"algorithms": ["random"], "turbo": True})
    with pytest.raises(ValueError):
        benchmark_spec_from_dict({"gen": {"t": 5, "warp": 9}})


def test_benchmark_spec_needs_exactly_one_source(tmp_path):
    with pytest.raises(ValueError):
        BenchmarkSpec(algorithms=("random",), seeds=(0,))
    inst_path = tmp_path / "inst.json"
    from crowdsched import generate

    write_instance(generate(TINY), inst_path)
    with pytest.raises(ValueError):
        BenchmarkSpec(
            algorithms=("random",),
            seeds=(0,),
            gen_params=TINY,
            instance_path=str(inst_path),
        )
    spec = BenchmarkSpec(algorithms=("random",), seeds=(0,), instance_path=str(inst_path))
    rows, _ = run_benchmark(spec)
    assert len(rows) == 1


def test_sweep_spec_from_dict():
    spec = sweep_spec_from_dict(
        {
            "axis": "worker_fraction",
            "grid": [0.5, 1.0],
            "algorithms": ["tas_online"],
            "seeds": [0],
            "gen": {"t": 5, "num_workers": 12, "num_jobs": 6, "mu_jobs": 1.5,
                    "lambda_workers": 6.0, "num_domains": 2},
        }
    )
    assert spec.axis == "worker_fraction"
    assert spec.grid == (0.5, 1.0)


def test_sweep_grid_validation():
    base = BenchmarkSpec(algorithms=("tas_online",), seeds=(0,), gen_params=TINY)
    with pytest.raises(ValueError):
        SweepSpec(axis="worker_fraction", grid=(1.0, 0.5), base=base)
    with pytest.raises(ValueError):
        SweepSpec(axis="worker_fraction", grid=(0.5, 0.5, 1.0), base=base)
    with pytest.raises(ValueError):
        SweepSpec(axis="worker_fraction", grid=(0.0, 1.0), base=base)
    with pytest.raises(ValueError):
        SweepSpec(axis="worker_fraction", grid=(), base=base)
    with pytest.raises(ValueError):
        SweepSpec(axis="expertise_multiplier", grid=(0.8, 1.2), base=base)
    with pytest.raises(ValueError):
        SweepSpec(axis="availability", grid=(0.5, 1.0), base=base)


def test_sweep_unit_point_matches_plain_benchmark(tiny_run):
    _, (rows, _) = tiny_run
    base = BenchmarkSpec(algorithms=("tas_online", "random"), seeds=(0, 1, 2), gen_params=TINY)
    sweep_rows = run_sweep(SweepSpec(axis="worker_fraction", grid=(0.5, 1.0), base=base))
    assert len(sweep_rows) == 2 * 6
    at_one = {
        (r.algorithm, r.seed): r.completed for r in sweep_rows if r.value == 1.0
    }
    for row in rows:
        assert at_one[(row.algorithm, row.seed)] == row.completed


def test_result_hash_ignores_wall_time(tiny_run):
    import dataclasses

    _, (rows, _) = tiny_run
    jittered = [dataclasses.replace(r, wall_time_ms=r.wall_time_ms + 5.0) for r in rows]
    assert result_hash(jittered) == result_hash(rows)
    changed = [dataclasses.replace(rows[0], completed=rows[0].completed + 1)] + rows[1:]
    assert result_hash(changed) != result_hash(rows)


def test_parallel_and_serial_agree(tiny_run):
    spec, (rows, day_rows) = tiny_run
    rows2, day_rows2 = run_benchmark(spec, jobs=3)
    assert result_hash(rows2) == result_hash(rows)
    assert result_hash(day_rows2) == result_hash(day_rows)


def test_csv_output(tiny_run, tmp_path):
    _, (rows, day_rows) = tiny_run
    rpath = tmp_path / "results.csv"
    dpath = tmp_path / "per_day.csv"
    write_rows_csv(rows, rpath)
    write_rows_csv(day_rows, dpath)
    with open(rpath, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        body = list(reader)
    assert header == list(RESULT_COLUMNS)
    assert len(body) == len(rows)
    assert body[0][0] == rows[0].algorithm
    with open(dpath, newline="") as fh:
        assert next(csv.reader(fh)) == list(PER_DAY_COLUMNS)


def test_sweep_csv_columns(tmp_path):
    base = BenchmarkSpec(algorithms=("random",), seeds=(0,), gen_params=TINY)
    sweep_rows = run_sweep(SweepSpec(axis="worker_fraction", grid=(1.0,), base=base))
    path = tmp_path / "sweep.csv"
    write_rows_csv(sweep_rows, path)
    with open(path, newline="") as fh:
        assert next(csv.reader(fh)) == list(SWEEP_COLUMNS)
