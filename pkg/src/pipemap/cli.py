"""Command line front end.

Subcommands: gen, eval, solve, oracle, simulate, sweep, plot.  Exit codes:
0 success, 2 infeasible (including a 'no' decision), 3 invalid input,
4 instance too large for an exhaustive solver.
"""

from __future__ import annotations

import argparse
import os
import sys

from .errors import Infeasible, InstanceTooLarge
from .gen import FAMILIES, ExperimentConfig, generate
from .harness import (
    CANONICAL_NAMES,
    SweepSpec,
    aggregate_plot_data,
    geometric_grid,
    read_csv,
    run_sweep,
    write_csv,
    write_plot_data,
)
from .heuristics import canonical_name, native_mode, run_heuristic
from .model import evaluate
from .oracle import (
    Hetero1DInstance,
    brute_force_min_period,
    hetero_1d_partition_decide,
    optimal_latency,
    optimal_latency_mapping,
    pareto_front,
)
from .sim import simulate
from .textio import format_mapping, format_number, load_instance, parse_mapping, save_instance


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors are invalid input, not infeasibility
        raise ValueError(f"{self.prog}: {message}")


def _add_instance_arg(sub):
    sub.add_argument("instance", help="instance file (pipeline v1 format)")


def cmd_gen(args) -> int:
    os.makedirs(args.out, exist_ok=True)
    for k in range(args.count):
        seed = args.seed + k
        config = ExperimentConfig(args.family, args.n, args.p, seed)
        app, platform = generate(config)
        name = f"{args.family}_n{args.n}_p{args.p}_s{seed}.pipe"
        path = os.path.join(args.out, name)
        save_instance(
            path, app, platform,
            comment=f"family {args.family} n {args.n} p {args.p} seed {seed}",
        )
        print(path)
    return 0


def cmd_eval(args) -> int:
    app, platform = load_instance(args.instance)
    mapping = parse_mapping(args.map)
    report = evaluate(app, platform, mapping)
    print(f"period {format_number(report.period)}")
    print(f"latency {format_number(report.latency)}")
    print(f"bottleneck {report.bottleneck}")
    return 0


def cmd_solve(args) -> int:
    app, platform = load_instance(args.instance)
    name = canonical_name(args.heuristic)
    if args.period is not None:
        kind, value = "period", args.period
    else:
        kind, value = "latency", args.latency
    if native_mode(name) != kind:
        raise ValueError(f"{name} takes --{native_mode(name)}, not --{kind}")
    mapping = run_heuristic(name, app, platform, value)
    report = evaluate(app, platform, mapping)
    print(format_mapping(mapping))
    print(f"period {format_number(report.period)}")
    print(f"latency {format_number(report.latency)}")
    return 0


def cmd_oracle(args) -> int:
    app, platform = load_instance(args.instance)
    if args.min_period:
        period, mapping = brute_force_min_period(app, platform, force=args.force)
        print(format_mapping(mapping))
        print(f"period {format_number(period)}")
    elif args.min_latency:
        print(format_mapping(optimal_latency_mapping(app, platform)))
        print(f"latency {format_number(optimal_latency(app, platform))}")
    elif args.pareto:
        for point in pareto_front(app, platform, force=args.force):
            print(
                f"{format_number(point.period)} {format_number(point.latency)} "
                f"{format_mapping(point.mapping)}"
            )
    else:
        inst = Hetero1DInstance(a=app.w, s=platform.s, K=args.decide)
        ok, witness = hetero_1d_partition_decide(inst, force=args.force)
        if not ok:
            print("no")
            return 2
        print(f"yes {format_mapping(witness)}")
    return 0


def cmd_simulate(args) -> int:
    app, platform = load_instance(args.instance)
    mapping = parse_mapping(args.map)
    report = simulate(app, platform, mapping, args.datasets)
    analytic = evaluate(app, platform, mapping)
    period_err = abs(report.measured_period - analytic.period) / analytic.period
    latency_err = abs(report.measured_latency - analytic.latency) / analytic.latency
    print(f"datasets {report.datasets}")
    print(f"measured_period {format_number(report.measured_period)}")
    print(f"analytic_period {format_number(analytic.period)}")
    print(f"period_rel_error {period_err:.3e}")
    print(f"measured_latency {format_number(report.measured_latency)}")
    print(f"analytic_latency {format_number(analytic.latency)}")
    print(f"latency_rel_error {latency_err:.3e}")
    return 0


def _parse_sweep_file(path) -> SweepSpec:
    configs = []
    grid = None
    heuristics = list(CANONICAL_NAMES)
    mode = "both"
    instances = 50
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, *values = line.split()
            if key == "config":
                if len(values) != 4:
                    raise ValueError("config takes: family n p seed")
                configs.append(
                    ExperimentConfig(values[0], int(values[1]), int(values[2]), int(values[3]))
                )
            elif key == "grid":
                grid = tuple(float(v) for v in values)
            elif key == "grid-geometric":
                if len(values) != 3:
                    raise ValueError("grid-geometric takes: lo hi count")
                grid = geometric_grid(float(values[0]), float(values[1]), int(values[2]))
            elif key == "heuristics":
                heuristics = values
            elif key == "mode":
                (mode,) = values
            elif key == "instances":
                (raw_count,) = values
                instances = int(raw_count)
            else:
                raise ValueError(f"unknown sweep field {key!r}")
    if not configs:
        raise ValueError("sweep spec needs at least one 'config' line")
    if grid is None:
        raise ValueError("sweep spec needs a 'grid' or 'grid-geometric' line")
    return SweepSpec(
        configs=tuple(configs), grid=grid, heuristics=tuple(heuristics),
        mode=mode, instances=instances,
    )


def _sweep_spec_from_flags(args) -> SweepSpec:
    if args.family is None or args.n is None or args.p is None or args.seed is None:
        raise ValueError("without --spec, provide --family, --n, --p, and --seed")
    if args.grid:
        grid = tuple(float(v) for v in args.grid.split(","))
    elif args.grid_min is not None and args.grid_max is not None:
        grid = geometric_grid(args.grid_min, args.grid_max, args.grid_count)
    else:
        raise ValueError("provide --grid or --grid-min/--grid-max")
    heuristics = tuple(args.heuristics.split(",")) if args.heuristics else CANONICAL_NAMES
    return SweepSpec(
        configs=(ExperimentConfig(args.family, args.n, args.p, args.seed),),
        grid=grid,
        heuristics=heuristics,
        mode=args.mode,
        instances=args.instances,
    )


def cmd_sweep(args) -> int:
    spec = _parse_sweep_file(args.spec) if args.spec else _sweep_spec_from_flags(args)
    rows = run_sweep(spec)
    write_csv(rows, args.out, timings=args.timings)
    print(f"{len(rows)} rows -> {args.out}")
    if args.plot_data or args.figures:
        series = aggregate_plot_data(rows)
        if args.plot_data:
            for path in write_plot_data(series, args.plot_data):
                print(path)
        if args.figures:
            from .plots import render_figures

            for path in render_figures(series, args.figures):
                print(path)
    return 0


def cmd_plot(args) -> int:
    rows = read_csv(args.csv)
    series = aggregate_plot_data(rows)
    from .plots import render_figures

    for path in render_figures(series, args.out):
        print(path)
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="pipemap", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub = subs.add_parser("gen", help="generate instance files")
    sub.add_argument("--family", required=True, choices=FAMILIES)
    sub.add_argument("--n", required=True, type=int)
    sub.add_argument("--p", required=True, type=int)
    sub.add_argument("--seed", required=True, type=int)
    sub.add_argument("--count", type=int, default=1)
    sub.add_argument("--out", required=True, help="output directory")
    sub.set_defaults(func=cmd_gen)

    sub = subs.add_parser("eval", help="evaluate a mapping")
    _add_instance_arg(sub)
    sub.add_argument("--map", required=True, help='mapping, e.g. "map 1-2:1 3-3:2"')
    sub.set_defaults(func=cmd_eval)

    sub = subs.add_parser("solve", help="run a heuristic")
    _add_instance_arg(sub)
    sub.add_argument("--heuristic", required=True)
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--period", type=float)
    group.add_argument("--latency", type=float)
    sub.set_defaults(func=cmd_solve)

    sub = subs.add_parser("oracle", help="exact solvers")
    _add_instance_arg(sub)
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--min-period", action="store_true")
    group.add_argument("--min-latency", action="store_true")
    group.add_argument("--pareto", action="store_true")
    group.add_argument(
        "--decide", type=float, metavar="K",
        help="exact-p partition decision over w and s with ratio bound K",
    )
    sub.add_argument("--force", action="store_true", help="override the size guard")
    sub.set_defaults(func=cmd_oracle)

    sub = subs.add_parser("simulate", help="rendezvous simulation")
    _add_instance_arg(sub)
    sub.add_argument("--map", required=True)
    sub.add_argument("--datasets", type=int, default=None, help="default 2m+2")
    sub.set_defaults(func=cmd_simulate)

    sub = subs.add_parser("sweep", help="threshold sweep over a batch")
    sub.add_argument("--spec", help="sweep spec file; overrides the flags below")
    sub.add_argument("--family", choices=FAMILIES)
    sub.add_argument("--n", type=int)
    sub.add_argument("--p", type=int)
    sub.add_argument("--seed", type=int)
    sub.add_argument("--instances", type=int, default=50)
    sub.add_argument("--mode", choices=("period", "latency", "both"), default="both")
    sub.add_argument("--heuristics", help="comma-separated names, default all six")
    sub.add_argument("--grid", help="comma-separated threshold values")
    sub.add_argument("--grid-min", type=float)
    sub.add_argument("--grid-max", type=float)
    sub.add_argument("--grid-count", type=int, default=16)
    sub.add_argument("--out", required=True, help="results CSV path")
    sub.add_argument("--plot-data", help="directory for per-heuristic series files")
    sub.add_argument("--figures", help="directory for rendered PNG figures")
    sub.add_argument("--timings", action="store_true", help="record wall_ms (breaks reproducibility)")
    sub.set_defaults(func=cmd_sweep)

    sub = subs.add_parser("plot", help="render figures from a results CSV")
    sub.add_argument("--csv", required=True)
    sub.add_argument("--out", required=True, help="directory for PNG figures")
    sub.set_defaults(func=cmd_plot)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except InstanceTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
