"""Experiment sweeps over seeded instance batches and threshold grids.

A sweep runs selected heuristics on generated instances across a grid of
bound values and records one row per (instance, heuristic, threshold).  Each
heuristic is bounded in its native metric: a threshold is a period target for
h1/h2a/h2b/h3 and a latency target for h4/h5.  Rows come out in a fixed
order (config, seed, heuristic, threshold) and the CSV rendering is
byte-deterministic, so re-running a sweep reproduces the file exactly.

`failure_threshold` condenses a grid into the classic robustness measure:
the largest bound value at which a heuristic still fails, averaged over an
instance batch.
"""

from __future__ import annotations

import csv
import math
import os
import time
import warnings
from dataclasses import dataclass

from .errors import AlwaysFails, Infeasible, NeverFails
from .gen import ExperimentConfig, generate
from .heuristics import CANONICAL_NAMES, canonical_name, native_mode, run_heuristic
from .model import IntervalMapping, evaluate
from .oracle import optimal_latency

MODES = ("period", "latency", "both")

DEFAULT_GRID_POINTS = 64
DEFAULT_GRID_SPAN = (0.01, 10.0)  # multiples of the optimal latency

CSV_COLUMNS = (
    "family",
    "n",
    "p",
    "seed",
    "heuristic",
    "mode",
    "threshold",
    "feasible",
    "period",
    "latency",
    "wall_ms",
)


def geometric_grid(lo: float, hi: float, count: int) -> tuple[float, ...]:
    """count values from lo to hi in geometric progression."""
    lo, hi = float(lo), float(hi)
    if not 0.0 < lo <= hi:
        raise ValueError("grid bounds must satisfy 0 < lo <= hi")
    if count < 1:
        raise ValueError("grid needs at least one point")
    if count == 1:
        return (lo,)
    ratio = hi / lo
    return tuple(lo * ratio ** (i / (count - 1)) for i in range(count))


def _mode_allows(mode: str, heuristic: str) -> bool:
    return mode == "both" or native_mode(heuristic) == mode


@dataclass(frozen=True)
class SweepSpec:
    """What to run: configs x instance batch x heuristics x threshold grid.

    mode restricts the heuristic set to one constraint kind ('period' or
    'latency'); 'both' runs any mix, each heuristic bounded in its native
    metric at the same grid values.
    """

    configs: tuple[ExperimentConfig, ...]
    grid: tuple[float, ...]
    heuristics: tuple[str, ...] = CANONICAL_NAMES
    mode: str = "both"
    instances: int = 50

    def __post_init__(self):
        object.__setattr__(self, "configs", tuple(self.configs))
        if not self.configs:
            raise ValueError("a sweep needs at least one config")
        grid = tuple(float(g) for g in self.grid)
        if not grid:
            raise ValueError("a sweep needs a non-empty grid")
        for lo, hi in zip(grid, grid[1:]):
            if not lo < hi:
                raise ValueError("grid values must be strictly ascending")
        if grid[0] <= 0.0:
            raise ValueError("grid values must be positive")
        object.__setattr__(self, "grid", grid)
        names = []
        for name in self.heuristics:
            key = canonical_name(name)
            if key in names:
                raise ValueError(f"heuristic {key} listed twice")
            names.append(key)
        ordered = tuple(k for k in CANONICAL_NAMES if k in names)
        object.__setattr__(self, "heuristics", ordered)
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        for key in ordered:
            if not _mode_allows(self.mode, key):
                raise ValueError(
                    f"heuristic {key} bounds the {native_mode(key)}, "
                    f"not allowed in a {self.mode!r} sweep"
                )
        if int(self.instances) < 1:
            raise ValueError("instances must be at least 1")
        object.__setattr__(self, "instances", int(self.instances))


@dataclass(frozen=True)
class SweepRow:
    """One heuristic run: its bound, outcome, and achieved metrics.

    `mapping` keeps the witness so feasible rows can be re-evaluated; it is
    not a CSV column.  `wall_ms` is observational and excluded from the
    deterministic CSV rendering unless explicitly requested.
    """

    family: str
    n: int
    p: int
    seed: int
    heuristic: str
    mode: str
    threshold: float
    feasible: bool
    period: float | None
    latency: float | None
    wall_ms: float
    mapping: IntervalMapping | None


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    """All rows of a sweep, in deterministic (config, seed, heuristic, threshold) order."""
    rows: list[SweepRow] = []
    for config in spec.configs:
        for k in range(spec.instances):
            seed = config.seed + k
            app, platform = generate(
                ExperimentConfig(config.family, config.n, config.p, seed)
            )
            for name in spec.heuristics:
                mode = native_mode(name)
                for threshold in spec.grid:
                    start = time.perf_counter()
                    try:
                        mapping = run_heuristic(name, app, platform, threshold)
                        report = evaluate(app, platform, mapping)
                        feasible, period, latency = True, report.period, report.latency
                    except Infeasible:
                        mapping, feasible, period, latency = None, False, None, None
                    wall_ms = (time.perf_counter() - start) * 1e3
                    rows.append(
                        SweepRow(
                            family=config.family,
                            n=config.n,
                            p=config.p,
                            seed=seed,
                            heuristic=name,
                            mode=mode,
                            threshold=threshold,
                            feasible=feasible,
                            period=period,
                            latency=latency,
                            wall_ms=wall_ms,
                            mapping=mapping,
                        )
                    )
    return rows


def _fmt(value: float) -> str:
    return format(float(value), ".6g")


def write_csv(rows: list[SweepRow], path, *, timings: bool = False) -> None:
    """Write rows as CSV with the fixed column set, 6 significant digits, and
    '\\n' endings.  wall_ms stays empty unless timings=True: real timings vary
    between runs and would break byte-for-byte reproducibility."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(CSV_COLUMNS) + "\n")
        for r in rows:
            fields = (
                r.family,
                str(r.n),
                str(r.p),
                str(r.seed),
                r.heuristic,
                r.mode,
                _fmt(r.threshold),
                "true" if r.feasible else "false",
                _fmt(r.period) if r.period is not None else "",
                _fmt(r.latency) if r.latency is not None else "",
                _fmt(r.wall_ms) if timings else "",
            )
            fh.write(",".join(fields) + "\n")


def read_csv(path) -> list[SweepRow]:
    """Read rows back from a CSV written by write_csv (witness mappings are gone)."""
    rows: list[SweepRow] = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ValueError(f"unexpected CSV columns {reader.fieldnames}")
        for rec in reader:
            feasible = rec["feasible"] == "true"
            rows.append(
                SweepRow(
                    family=rec["family"],
                    n=int(rec["n"]),
                    p=int(rec["p"]),
                    seed=int(rec["seed"]),
                    heuristic=rec["heuristic"],
                    mode=rec["mode"],
                    threshold=float(rec["threshold"]),
                    feasible=feasible,
                    period=float(rec["period"]) if rec["period"] else None,
                    latency=float(rec["latency"]) if rec["latency"] else None,
                    wall_ms=float(rec["wall_ms"]) if rec["wall_ms"] else 0.0,
                    mapping=None,
                )
            )
    return rows


def default_grid(app, platform) -> tuple[float, ...]:
    """The per-instance grid: 64 geometric points spanning 0.01 to 10 times
    the optimal latency (single-interval period and latency coincide, so the
    same span serves both constraint kinds)."""
    lopt = optimal_latency(app, platform)
    lo, hi = DEFAULT_GRID_SPAN
    return geometric_grid(lo * lopt, hi * lopt, DEFAULT_GRID_POINTS)


@dataclass(frozen=True)
class FailurePoint:
    """Per-instance failure threshold: the largest grid value still failing.

    kind is 'bracketed' (value set), 'never' (feasible at every grid point),
    or 'always' (failed even at the grid top).
    """

    seed: int
    kind: str
    value: float | None


def failure_point(
    app,
    platform,
    heuristic: str,
    grid: tuple[float, ...],
    *,
    seed: int = 0,
) -> FailurePoint:
    """The failure point of one heuristic on one instance over a bound grid.

    Feasibility should be monotone in the bound; a non-monotone pattern is
    reported as a warning and the largest failing value still wins.  `seed`
    only labels the returned point.
    """
    key = canonical_name(heuristic)
    values = tuple(float(g) for g in grid)
    feasible: list[bool] = []
    for threshold in values:
        try:
            run_heuristic(key, app, platform, threshold)
            feasible.append(True)
        except Infeasible:
            feasible.append(False)
    if any(feasible[i] and not feasible[i + 1] for i in range(len(feasible) - 1)):
        warnings.warn(
            f"{key} feasibility is not monotone over the grid (seed {seed})",
            stacklevel=2,
        )
    failing = [v for v, ok in zip(values, feasible) if not ok]
    if not failing:
        return FailurePoint(seed, "never", None)
    if not feasible[-1]:
        return FailurePoint(seed, "always", None)
    return FailurePoint(seed, "bracketed", max(failing))


def failure_threshold_details(
    config: ExperimentConfig,
    heuristic: str,
    mode: str | None = None,
    grid: tuple[float, ...] | None = None,
    *,
    instances: int = 50,
) -> tuple[FailurePoint, ...]:
    """Per-instance failure points for a heuristic over an instance batch.

    With grid=None each instance uses its own default grid (see default_grid).
    """
    key = canonical_name(heuristic)
    if mode is not None and mode != native_mode(key):
        raise ValueError(f"{key} bounds the {native_mode(key)}, not the {mode}")
    points: list[FailurePoint] = []
    for k in range(instances):
        seed = config.seed + k
        app, platform = generate(
            ExperimentConfig(config.family, config.n, config.p, seed)
        )
        values = grid if grid is not None else default_grid(app, platform)
        points.append(failure_point(app, platform, key, values, seed=seed))
    return tuple(points)


def failure_threshold(
    config: ExperimentConfig,
    heuristic: str,
    mode: str | None = None,
    grid: tuple[float, ...] | None = None,
    *,
    instances: int = 50,
) -> float:
    """Mean failure threshold over the batch.

    Never-failing instances count at the grid minimum (a below-grid stand-in);
    instances failing even at the grid top are left out of the mean.  When the
    whole batch never fails, raises NeverFails; when it always fails,
    AlwaysFails.
    """
    points = failure_threshold_details(
        config, heuristic, mode, grid, instances=instances
    )
    if all(pt.kind == "never" for pt in points):
        raise NeverFails(f"{heuristic} found a mapping at every grid threshold")
    if all(pt.kind == "always" for pt in points):
        raise AlwaysFails(f"{heuristic} failed at the top of every grid")
    values: list[float] = []
    for pt in points:
        if pt.kind == "bracketed":
            values.append(pt.value)
        elif pt.kind == "never":
            if grid is not None:
                values.append(grid[0])
            else:
                app, platform = generate(
                    ExperimentConfig(config.family, config.n, config.p, pt.seed)
                )
                values.append(default_grid(app, platform)[0])
    return sum(values) / len(values)


def aggregate_plot_data(
    rows: list[SweepRow],
) -> dict[tuple[str, int, int, str], tuple[tuple[float, float, int], ...]]:
    """Per (family, n, p, heuristic): ascending (threshold, mean achieved
    complementary metric over feasible rows, feasible count) triples.

    The complementary metric is the latency for period-bounded heuristics and
    the period for latency-bounded ones.  All-infeasible thresholds yield an
    empty data point: count 0 and a NaN mean.
    """
    buckets: dict[tuple[str, int, int, str], dict[float, list[float]]] = {}
    for r in rows:
        key = (r.family, r.n, r.p, r.heuristic)
        cell = buckets.setdefault(key, {}).setdefault(r.threshold, [])
        if r.feasible:
            cell.append(r.latency if r.mode == "period" else r.period)
    out: dict[tuple[str, int, int, str], tuple[tuple[float, float, int], ...]] = {}
    for key, per_threshold in buckets.items():
        series = []
        for threshold in sorted(per_threshold):
            values = per_threshold[threshold]
            mean = sum(values) / len(values) if values else math.nan
            series.append((threshold, mean, len(values)))
        out[key] = tuple(series)
    return out


def write_plot_data(
    series: dict[tuple[str, int, int, str], tuple[tuple[float, float, int], ...]],
    out_dir,
) -> list[str]:
    """One whitespace-separated series file per (config, heuristic), named
    <family>_n<n>_p<p>_<heuristic>.dat with rows 'threshold mean count'."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for (family, n, p, heuristic) in sorted(series):
        rows = series[(family, n, p, heuristic)]
        path = os.path.join(out_dir, f"{family}_n{n}_p{p}_{heuristic}.dat")
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("# threshold mean count\n")
            for threshold, mean, count in rows:
                fh.write(f"{_fmt(threshold)} {_fmt(mean)} {count}\n")
        paths.append(path)
    return paths
