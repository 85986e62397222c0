"""Command line front end.

Subcommands: gen, run, bench, sweep, bound, reduce3dm, validate, oracle.
Exit codes: 0 on success, 2 on bad input or configuration, 3 when a
scheduler hands back a schedule that fails feasibility checking (an
internal bug, but one worth a distinct signal in automation).

The default seed for gen and run comes from the TAS_SEED environment
variable when set.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .algorithms import ALGORITHMS, SchedulerConfig, run_scheduler
from .experiment import (
    benchmark_spec_from_dict,
    result_hash,
    run_benchmark,
    run_sweep,
    sweep_spec_from_dict,
    write_rows_csv,
)
from .knapsack import upper_bound
from .model import (
    metrics,
    read_instance,
    read_schedule,
    validate,
    write_instance,
    write_schedule,
)
from .plots import render_benchmark_figures, render_sweep_figures
from .simgen import (
    GenParams,
    ThreeDMInstance,
    exhaustive_tas,
    generate,
    reduce_3dm,
)


def _env_seed() -> int:
    return int(os.environ.get("TAS_SEED", "0"))


def _parse_seeds(text: str) -> list[int]:
    """Either a comma list ("0,3,7") or a half-open range ("0:20")."""
    if ":" in text:
        lo, hi = text.split(":", 1)
        return list(range(int(lo), int(hi)))
    return [int(part) for part in text.split(",") if part.strip()]


def _parse_algorithms(text: str) -> list[str]:
    names = [part.strip() for part in text.split(",") if part.strip()]
    for name in names:
        if name not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {name!r}")
    return names


def _parse_grid(text: str) -> list[float]:
    return [float(part) for part in text.split(",") if part.strip()]


def _add_scheduler_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--factor", type=float, default=None, help="expertise filter fraction")
    sub.add_argument("--lookahead", type=int, default=None, help="offline planning window")
    sub.add_argument("--minavail", type=int, default=None, help="offline free-slot requirement")
    sub.add_argument("--resolution", type=float, default=None, help="cost grid step")


def _scheduler_kwargs(args) -> dict:
    out = {}
    for key in ("factor", "lookahead", "minavail", "resolution"):
        value = getattr(args, key)
        if value is not None:
            out[key] = value
    return out


def cmd_gen(args) -> int:
    params = GenParams(
        t=args.t,
        num_domains=args.domains,
        num_workers=args.workers,
        num_jobs=args.jobs,
        lambda_workers=args.lambda_workers,
        mu_jobs=args.mu_jobs,
        expertise_mean=args.expertise_mean,
        expertise_spread=args.expertise_spread,
        wage_mean=args.wage_mean,
        wage_spread=args.wage_spread,
        quality_alpha=args.quality_alpha,
        quality_beta=args.quality_beta,
        cost_slope=args.cost_slope,
        domain_affinity=args.domain_affinity,
        home_concentration=args.home_concentration,
        seed=args.seed,
    )
    instance = generate(params)
    write_instance(instance, args.out)
    print(
        f"wrote {args.out}: {instance.num_workers} workers, "
        f"{instance.num_jobs} jobs, {instance.t} slots, {instance.num_domains} domains"
    )
    return 0


def cmd_run(args) -> int:
    instance = read_instance(args.instance)
    if args.algo == "oracle":
        best, schedule = exhaustive_tas(instance)
    else:
        config = SchedulerConfig(algorithm=args.algo, seed=args.seed, **_scheduler_kwargs(args))
        schedule = run_scheduler(instance, config)
    violations = validate(instance, schedule)
    if violations:
        for v in violations:
            print(v, file=sys.stderr)
        print(f"error: {args.algo} produced an infeasible schedule", file=sys.stderr)
        return 3
    if args.out:
        write_schedule(schedule, args.out)
    bound = upper_bound(instance, args.resolution if args.resolution else 1e-3)
    report = metrics(instance, schedule, bound).to_dict()
    report.pop("per_day_completed")
    report.pop("per_day_quality_pct")
    print(json.dumps(report, indent=2))
    return 0


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    data = json.loads(Path(path).read_text())
    if not isinstance(data, dict):
        raise ValueError(f"config file {path} must hold a JSON object")
    return data


def _apply_common_overrides(data: dict, args) -> None:
    if args.algos:
        data["algorithms"] = _parse_algorithms(args.algos)
    if args.seeds:
        data["seeds"] = _parse_seeds(args.seeds)
    if args.instance:
        data["instance"] = args.instance
        data.pop("gen", None)
    for key in ("factor", "lookahead", "minavail", "resolution"):
        value = getattr(args, key)
        if value is not None:
            data[key] = value
    if "instance" not in data and "gen" not in data:
        data["gen"] = {}


def cmd_bench(args) -> int:
    data = _load_config(args.config)
    _apply_common_overrides(data, args)
    spec = benchmark_spec_from_dict(data)
    rows, days = run_benchmark(spec, jobs=args.jobs)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_rows_csv(rows, out / "results.csv")
    write_rows_csv(days, out / "per_day.csv")
    figures = render_benchmark_figures(rows, days, out)
    for name in spec.algorithms:
        vals = [r.completed for r in rows if r.algorithm == name]
        print(f"{name}: mean completed {sum(vals) / len(vals):.2f} over {len(vals)} seeds")
    print(f"results: {out / 'results.csv'}")
    print(f"per-day: {out / 'per_day.csv'}")
    for p in figures:
        print(f"figure: {p}")
    print(f"hash: {result_hash(rows)}")
    return 0


def cmd_sweep(args) -> int:
    data = _load_config(args.config)
    _apply_common_overrides(data, args)
    if args.axis:
        data["axis"] = args.axis
    if args.grid:
        data["grid"] = _parse_grid(args.grid)
    spec = sweep_spec_from_dict(data)
    rows = run_sweep(spec, jobs=args.jobs)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_rows_csv(rows, out / "sweep.csv")
    figures = render_sweep_figures(rows, out)
    print(f"{len(rows)} rows over {len(spec.grid)} grid points")
    print(f"results: {out / 'sweep.csv'}")
    for p in figures:
        print(f"figure: {p}")
    print(f"hash: {result_hash(rows)}")
    return 0


def cmd_bound(args) -> int:
    instance = read_instance(args.instance)
    print(upper_bound(instance, args.resolution))
    return 0


def cmd_reduce3dm(args) -> int:
    data = json.loads(Path(args.triples).read_text())
    try:
        tdm = ThreeDMInstance(
            u=args.u,
            triples=tuple(tuple(int(x) for x in tr) for tr in data),
        )
    except (TypeError, ValueError) as exc:
        raise ValueError(f"malformed triples document: {exc}") from exc
    instance = reduce_3dm(tdm)
    if args.out:
        write_instance(instance, args.out)
        print(f"wrote {args.out}: {instance.num_workers} workers, {instance.num_jobs} jobs")
    if args.solve:
        best, _ = exhaustive_tas(instance)
        print(f"optimum: {best}")
        print(f"perfect matching: {'yes' if best == tdm.u else 'no'}")
    return 0


def cmd_validate(args) -> int:
    instance = read_instance(args.instance)
    schedule = read_schedule(args.schedule)
    violations = validate(instance, schedule)
    for v in violations:
        print(v)
    if violations:
        print(f"infeasible: {len(violations)} violation(s)")
    else:
        print("feasible")
    return 0


def cmd_oracle(args) -> int:
    instance = read_instance(args.instance)
    best, schedule = exhaustive_tas(instance)
    if args.out:
        write_schedule(schedule, args.out)
    print(f"optimum: {best}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crowdsched",
        description="Benchmark harness for expert-crowd task assignment policies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="sample a synthetic instance to a JSON file")
    g.add_argument("--out", required=True)
    g.add_argument("--t", type=int, default=GenParams.t)
    g.add_argument("--domains", type=int, default=GenParams.num_domains)
    g.add_argument("--workers", type=int, default=GenParams.num_workers)
    g.add_argument("--jobs", type=int, default=GenParams.num_jobs)
    g.add_argument("--lambda-workers", type=float, default=GenParams.lambda_workers)
    g.add_argument("--mu-jobs", type=float, default=GenParams.mu_jobs)
    g.add_argument("--expertise-mean", type=float, default=GenParams.expertise_mean)
    g.add_argument("--expertise-spread", type=float, default=GenParams.expertise_spread)
    g.add_argument("--wage-mean", type=float, default=GenParams.wage_mean)
    g.add_argument("--wage-spread", type=float, default=GenParams.wage_spread)
    g.add_argument("--quality-alpha", type=float, default=GenParams.quality_alpha)
    g.add_argument("--quality-beta", type=float, default=GenParams.quality_beta)
    g.add_argument("--cost-slope", type=float, default=GenParams.cost_slope)
    g.add_argument("--domain-affinity", type=float, default=GenParams.domain_affinity)
    g.add_argument("--home-concentration", type=float, default=GenParams.home_concentration)
    g.add_argument("--seed", type=int, default=_env_seed())
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("run", help="run one policy on an instance file")
    r.add_argument("--instance", required=True)
    r.add_argument("--algo", required=True, choices=ALGORITHMS + ("oracle",))
    r.add_argument("--seed", type=int, default=_env_seed())
    r.add_argument("--out", help="write the schedule JSON here")
    _add_scheduler_flags(r)
    r.set_defaults(func=cmd_run)

    b = sub.add_parser("bench", help="run algorithms x seeds, write CSVs and figures")
    b.add_argument("--config", help="JSON benchmark spec")
    b.add_argument("--out-dir", required=True)
    b.add_argument("--algos", help="comma-separated algorithm names")
    b.add_argument("--seeds", help="comma list or lo:hi range")
    b.add_argument("--instance", help="fixed instance file instead of a generator")
    b.add_argument("--jobs", type=int, default=1, help="worker processes")
    _add_scheduler_flags(b)
    b.set_defaults(func=cmd_bench)

    s = sub.add_parser("sweep", help="repeat a benchmark along one axis")
    s.add_argument("--config", help="JSON sweep spec")
    s.add_argument("--out-dir", required=True)
    s.add_argument("--axis", choices=("worker_fraction", "expertise_multiplier"))
    s.add_argument("--grid", help="comma-separated axis values")
    s.add_argument("--algos", help="comma-separated algorithm names")
    s.add_argument("--seeds", help="comma list or lo:hi range")
    s.add_argument("--instance", help="fixed instance file instead of a generator")
    s.add_argument("--jobs", type=int, default=1, help="worker processes")
    _add_scheduler_flags(s)
    s.set_defaults(func=cmd_sweep)

    d = sub.add_parser("bound", help="print the per-job feasibility bound")
    d.add_argument("--instance", required=True)
    d.add_argument("--resolution", type=float, default=1e-3)
    d.set_defaults(func=cmd_bound)

    m = sub.add_parser("reduce3dm", help="encode a 3-dimensional matching instance")
    m.add_argument("--u", type=int, required=True, help="universe size per axis")
    m.add_argument("--triples", required=True, help="JSON file: list of [x,y,z] triples")
    m.add_argument("--out")
    m.add_argument("--solve", action="store_true", help="solve the reduction exactly")
    m.set_defaults(func=cmd_reduce3dm)

    v = sub.add_parser("validate", help="check a schedule against an instance")
    v.add_argument("--instance", required=True)
    v.add_argument("--schedule", required=True)
    v.set_defaults(func=cmd_validate)

    o = sub.add_parser("oracle", help="solve a small instance exactly")
    o.add_argument("--instance", required=True)
    o.add_argument("--out", help="write the optimal schedule JSON here")
    o.set_defaults(func=cmd_oracle)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
