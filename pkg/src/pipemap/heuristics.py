"""Greedy splitting heuristics for period- and latency-bounded mappings.

All six heuristics share one scheme: sort processors by non-increasing speed
(ties by index), start with every stage on the fastest one, then repeatedly
pick the interval with the largest cycle time (the bottleneck; ties go to the
lowest interval index) and try to split it, handing pieces to the next
fastest unused processors.  Each accepted split consumes at least one unused
processor, so a run performs at most p - 1 splits.  They differ in three
choices:

  split arity   two pieces (one new processor) or three (two new ones,
                falling back to two when the interval or the processor pool
                is too small);
  score         'mono': the smallest worst piece cycle time, accepted only if
                strictly below the bottleneck's pre-split cycle time;
                'ratio': the smallest max over pieces of
                (latency growth) / (bottleneck cycle - new piece cycle),
                restricted to candidates whose pieces all run strictly below
                the old bottleneck cycle;
  bound         a period target that stops the loop on success, and/or a
                latency cap that filters candidate splits.

h1  2-way, mono,  period target
h2a 3-way, mono,  period target
h2b 3-way, ratio, period target
h3  2-way, ratio, period target, latency cap (1 + alpha) * optimal latency
    with alpha binary-searched
h4  2-way, mono,  latency cap, runs until no admissible improving split
h5  2-way, ratio, latency cap, runs until no admissible improving split

Candidate order fixes every tie: cuts ascending (pairs lexicographic), and
for two-way splits the orientation keeping the first piece on the incumbent
processor first, for three-way splits assignments in lexicographic processor
order.  The first candidate attaining the best score wins.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .errors import Infeasible, NoSplitPossible
from .model import (
    CostReport,
    IntervalMapping,
    PipelineApp,
    Platform,
    evaluate,
    interval_cycle_time,
    within_limit,
)
from .oracle import optimal_latency

CANONICAL_NAMES = ("h1", "h2a", "h2b", "h3", "h4", "h5")

ALIASES = {
    "sp-mono-p": "h1",
    "3explo-mono": "h2a",
    "3explo-bi": "h2b",
    "sp-bi-p": "h3",
    "sp-mono-l": "h4",
    "sp-bi-l": "h5",
}

_NATIVE_MODE = {
    "h1": "period",
    "h2a": "period",
    "h2b": "period",
    "h3": "period",
    "h4": "latency",
    "h5": "latency",
}

ALPHA_START = 0.25
ALPHA_CAP = 65536.0
BISECTION_STEPS = 30


@dataclass(frozen=True)
class BicriteriaTarget:
    """A bound on one of the two metrics: kind 'period' or 'latency'."""

    kind: str
    value: float

    def __post_init__(self):
        if self.kind not in ("period", "latency"):
            raise ValueError(f"target kind must be 'period' or 'latency', got {self.kind!r}")
        object.__setattr__(self, "value", float(self.value))
        if math.isnan(self.value) or self.value <= 0.0:
            raise ValueError("target value must be positive")


def fixed_period(value: float) -> BicriteriaTarget:
    return BicriteriaTarget("period", value)


def fixed_latency(value: float) -> BicriteriaTarget:
    return BicriteriaTarget("latency", value)


@dataclass(frozen=True)
class HeuristicState:
    """Search state: the current mapping plus the used/unused processor queues.

    `unused` is ordered by non-increasing speed (ties by index); `used` is in
    order of first use and owns exactly one interval per processor.
    """

    app: PipelineApp
    platform: Platform
    mapping: IntervalMapping
    used: tuple[int, ...]
    unused: tuple[int, ...]


def initial_state(app: PipelineApp, platform: Platform) -> HeuristicState:
    """Every stage on the fastest processor; the rest queue up by speed."""
    order = sorted(range(1, platform.p + 1), key=lambda u: (-platform.s[u - 1], u))
    mapping = IntervalMapping(((1, app.n),), (order[0],))
    return HeuristicState(app, platform, mapping, (order[0],), tuple(order[1:]))


@dataclass(frozen=True)
class SplitCandidate:
    """One candidate replacement of an interval by two or three pieces."""

    interval_index: int  # 1-based index of the interval being split
    cuts: tuple[int, ...]  # stages after which the interval is cut
    pieces: tuple[tuple[int, int, int], ...]  # (d, e, processor) per piece
    new_cycle_times: tuple[float, ...]  # cycle time of each piece
    delta_latency: float  # latency after the split minus latency before
    delta_periods: tuple[float, ...]  # old cycle time of the interval minus each new one
    mapping: IntervalMapping  # the full mapping with the split applied
    period: float  # evaluate(mapping).period
    latency: float  # evaluate(mapping).latency


def _build_candidates(
    state: HeuristicState,
    j: int,
    piece_sets: list[tuple[tuple[int, ...], tuple[tuple[int, int, int], ...]]],
) -> list[SplitCandidate]:
    app, platform = state.app, state.platform
    before = evaluate(app, platform, state.mapping)
    d, e = state.mapping.intervals[j - 1]
    cycle_before = interval_cycle_time(app, platform, d, e, state.mapping.alloc[j - 1])
    out = []
    for cuts, pieces in piece_sets:
        intervals = (
            state.mapping.intervals[: j - 1]
            + tuple((pd, pe) for pd, pe, _ in pieces)
            + state.mapping.intervals[j:]
        )
        alloc = (
            state.mapping.alloc[: j - 1]
            + tuple(u for _, _, u in pieces)
            + state.mapping.alloc[j:]
        )
        mapping = IntervalMapping(intervals, alloc)
        report = evaluate(app, platform, mapping)
        new_cycles = tuple(
            interval_cycle_time(app, platform, pd, pe, u) for pd, pe, u in pieces
        )
        out.append(
            SplitCandidate(
                interval_index=j,
                cuts=cuts,
                pieces=pieces,
                new_cycle_times=new_cycles,
                delta_latency=report.latency - before.latency,
                delta_periods=tuple(cycle_before - c for c in new_cycles),
                mapping=mapping,
                period=report.period,
                latency=report.latency,
            )
        )
    return out


def enumerate_2splits(state: HeuristicState, j: int) -> list[SplitCandidate]:
    """Two-way splits of interval j, pairing it with the next fastest unused
    processor; ordered by cut ascending, incumbent-keeps-first-piece first."""
    d, e = state.mapping.intervals[j - 1]
    if e == d:
        raise NoSplitPossible(f"interval ({d}, {e}) has a single stage")
    if not state.unused:
        raise NoSplitPossible("no unused processor left")
    incumbent = state.mapping.alloc[j - 1]
    new = state.unused[0]
    piece_sets = []
    for c in range(d, e):
        piece_sets.append(((c,), ((d, c, incumbent), (c + 1, e, new))))
        piece_sets.append(((c,), ((d, c, new), (c + 1, e, incumbent))))
    return _build_candidates(state, j, piece_sets)


def enumerate_3splits(state: HeuristicState, j: int) -> list[SplitCandidate]:
    """Three-way splits of interval j over the incumbent and the two next
    fastest unused processors; cut pairs ascending, assignments lexicographic."""
    d, e = state.mapping.intervals[j - 1]
    if e - d + 1 < 3:
        raise NoSplitPossible(f"interval ({d}, {e}) has fewer than three stages")
    if len(state.unused) < 2:
        raise NoSplitPossible("fewer than two unused processors left")
    incumbent = state.mapping.alloc[j - 1]
    trio = sorted((incumbent, state.unused[0], state.unused[1]))
    piece_sets = []
    for c1 in range(d, e):
        for c2 in range(c1 + 1, e):
            for perm in itertools.permutations(trio):
                piece_sets.append(
                    (
                        (c1, c2),
                        ((d, c1, perm[0]), (c1 + 1, c2, perm[1]), (c2 + 1, e, perm[2])),
                    )
                )
    return _build_candidates(state, j, piece_sets)


def _apply_split(state: HeuristicState, cand: SplitCandidate) -> HeuristicState:
    taken = {u for _, _, u in cand.pieces}
    newly = tuple(u for u in state.unused if u in taken)
    return HeuristicState(
        state.app,
        state.platform,
        cand.mapping,
        state.used + newly,
        tuple(u for u in state.unused if u not in taken),
    )


def _pick_mono(candidates: list[SplitCandidate]) -> tuple[SplitCandidate | None, float]:
    """Smallest worst piece cycle time; the earliest candidate wins ties."""
    best = None
    best_score = math.inf
    for cand in candidates:
        score = max(cand.new_cycle_times)
        if score < best_score:
            best, best_score = cand, score
    return best, best_score


def _pick_ratio(candidates: list[SplitCandidate]) -> tuple[SplitCandidate | None, float]:
    """Smallest max over pieces of delta_latency / delta_period, among
    candidates whose pieces all run strictly below the old bottleneck cycle."""
    best = None
    best_score = math.inf
    for cand in candidates:
        if any(dp <= 0.0 for dp in cand.delta_periods):
            continue
        score = max(cand.delta_latency / dp for dp in cand.delta_periods)
        if score < best_score:
            best, best_score = cand, score
    return best, best_score


def _splitting_run(
    app: PipelineApp,
    platform: Platform,
    *,
    three_way: bool,
    ratio_rule: bool,
    period_target: float | None = None,
    latency_cap: float | None = None,
    trace: list[SplitCandidate] | None = None,
) -> tuple[IntervalMapping, CostReport, bool]:
    """The shared loop; returns (mapping, report, period target met)."""
    state = initial_state(app, platform)
    while True:
        report = evaluate(app, platform, state.mapping)
        if period_target is not None and within_limit(report.period, period_target):
            return state.mapping, report, True
        j = report.bottleneck
        candidates: list[SplitCandidate] = []
        if three_way:
            try:
                candidates = enumerate_3splits(state, j)
            except NoSplitPossible:
                candidates = []
        if not candidates:
            try:
                candidates = enumerate_2splits(state, j)
            except NoSplitPossible:
                candidates = []
        if latency_cap is not None:
            candidates = [c for c in candidates if within_limit(c.latency, latency_cap)]
        if ratio_rule:
            chosen, _ = _pick_ratio(candidates)
        else:
            chosen, score = _pick_mono(candidates)
            # the bottleneck attains the period, so report.period is its cycle time
            if chosen is not None and not score < report.period:
                chosen = None
        if chosen is None:
            return state.mapping, report, period_target is None
        state = _apply_split(state, chosen)
        if trace is not None:
            trace.append(chosen)


def _check_positive(value: float) -> float:
    value = float(value)
    if math.isnan(value) or value <= 0.0:
        raise ValueError("target value must be positive")
    return value


def h1_sp_mono_p(
    app: PipelineApp,
    platform: Platform,
    period_target: float,
    *,
    trace: list[SplitCandidate] | None = None,
) -> IntervalMapping:
    """Fixed period, two-way splits, mono score.

    Raises Infeasible carrying the lowest period reached when the target
    stays out of reach.
    """
    period_target = _check_positive(period_target)
    mapping, report, ok = _splitting_run(
        app,
        platform,
        three_way=False,
        ratio_rule=False,
        period_target=period_target,
        trace=trace,
    )
    if not ok:
        raise Infeasible(report.period, f"period target {period_target!r} unreachable; best achieved {report.period!r}")
    return mapping


def h2a_explo3_mono(
    app: PipelineApp,
    platform: Platform,
    period_target: float,
    *,
    trace: list[SplitCandidate] | None = None,
) -> IntervalMapping:
    """Fixed period, three-way splits (two-way fallback), mono score."""
    period_target = _check_positive(period_target)
    mapping, report, ok = _splitting_run(
        app,
        platform,
        three_way=True,
        ratio_rule=False,
        period_target=period_target,
        trace=trace,
    )
    if not ok:
        raise Infeasible(report.period, f"period target {period_target!r} unreachable; best achieved {report.period!r}")
    return mapping


def h2b_explo3_bi(
    app: PipelineApp,
    platform: Platform,
    period_target: float,
    *,
    trace: list[SplitCandidate] | None = None,
) -> IntervalMapping:
    """Fixed period, three-way splits (two-way fallback), ratio score."""
    period_target = _check_positive(period_target)
    mapping, report, ok = _splitting_run(
        app,
        platform,
        three_way=True,
        ratio_rule=True,
        period_target=period_target,
        trace=trace,
    )
    if not ok:
        raise Infeasible(report.period, f"period target {period_target!r} unreachable; best achieved {report.period!r}")
    return mapping


def h3_sp_bi_p(
    app: PipelineApp,
    platform: Platform,
    period_target: float,
    *,
    trace: list[SplitCandidate] | None = None,
) -> IntervalMapping:
    """Fixed period with bounded latency growth.

    Runs ratio-scored two-way splitting trials whose candidates must keep the
    latency within (1 + alpha) times the optimal latency; alpha grows by
    doubling from 0.25 until a trial meets the period target (giving up above
    65536), then 30 bisection steps over [0, alpha] tighten it.  The feasible
    trial mapping with the lowest latency wins (ties by period).
    """
    period_target = _check_positive(period_target)
    lopt = optimal_latency(app, platform)
    best: tuple[float, float, IntervalMapping] | None = None
    best_period = math.inf

    def trial(alpha: float) -> bool:
        nonlocal best, best_period
        mapping, report, ok = _splitting_run(
            app,
            platform,
            three_way=False,
            ratio_rule=True,
            period_target=period_target,
            latency_cap=(1.0 + alpha) * lopt,
            trace=trace,
        )
        if report.period < best_period:
            best_period = report.period
        if ok and (best is None or (report.latency, report.period) < (best[0], best[1])):
            best = (report.latency, report.period, mapping)
        return ok

    if trial(0.0):
        return best[2]
    alpha = ALPHA_START
    while not trial(alpha):
        alpha *= 2.0
        if alpha > ALPHA_CAP:
            raise Infeasible(
                best_period,
                f"period target {period_target!r} unreachable even with unbounded "
                f"latency growth; best achieved {best_period!r}",
            )
    lo, hi = 0.0, alpha
    for _ in range(BISECTION_STEPS):
        mid = (lo + hi) / 2.0
        if trial(mid):
            hi = mid
        else:
            lo = mid
    assert best is not None
    return best[2]


def _latency_bounded(
    app: PipelineApp,
    platform: Platform,
    latency_target: float,
    ratio_rule: bool,
    trace: list[SplitCandidate] | None,
) -> IntervalMapping:
    latency_target = _check_positive(latency_target)
    lopt = optimal_latency(app, platform)
    if not within_limit(lopt, latency_target):
        raise Infeasible(
            lopt,
            f"latency target {latency_target!r} below the optimal latency {lopt!r}",
        )
    mapping, _, _ = _splitting_run(
        app,
        platform,
        three_way=False,
        ratio_rule=ratio_rule,
        latency_cap=latency_target,
        trace=trace,
    )
    return mapping


def h4_sp_mono_l(
    app: PipelineApp,
    platform: Platform,
    latency_target: float,
    *,
    trace: list[SplitCandidate] | None = None,
) -> IntervalMapping:
    """Fixed latency, two-way splits, mono score; minimises the period as long
    as splits keep the latency within the target.  Infeasible only when the
    target is below the optimal latency."""
    return _latency_bounded(app, platform, latency_target, False, trace)


def h5_sp_bi_l(
    app: PipelineApp,
    platform: Platform,
    latency_target: float,
    *,
    trace: list[SplitCandidate] | None = None,
) -> IntervalMapping:
    """Fixed latency, two-way splits, ratio score; the latency-aware twin of h4."""
    return _latency_bounded(app, platform, latency_target, True, trace)


_RUNNERS = {
    "h1": h1_sp_mono_p,
    "h2a": h2a_explo3_mono,
    "h2b": h2b_explo3_bi,
    "h3": h3_sp_bi_p,
    "h4": h4_sp_mono_l,
    "h5": h5_sp_bi_l,
}


def canonical_name(name: str) -> str:
    """Resolve a heuristic name or alias to its canonical short name."""
    key = name.strip().lower()
    key = ALIASES.get(key, key)
    if key not in _RUNNERS:
        raise ValueError(f"unknown heuristic {name!r}")
    return key


def native_mode(name: str) -> str:
    """The constraint kind a heuristic bounds: 'period' or 'latency'."""
    return _NATIVE_MODE[canonical_name(name)]


def run_heuristic(
    name: str,
    app: PipelineApp,
    platform: Platform,
    target: BicriteriaTarget | float,
    *,
    trace: list[SplitCandidate] | None = None,
) -> IntervalMapping:
    """Dispatch by name; a bare number is taken as the heuristic's native bound."""
    key = canonical_name(name)
    if isinstance(target, BicriteriaTarget):
        if target.kind != _NATIVE_MODE[key]:
            raise ValueError(
                f"{key} bounds the {_NATIVE_MODE[key]}, got a {target.kind} target"
            )
        value = target.value
    else:
        value = float(target)
    return _RUNNERS[key](app, platform, value, trace=trace)
