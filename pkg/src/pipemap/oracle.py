"""Exact reference solvers.

Everything here is exhaustive: partitions of [1..n] into contiguous intervals
are enumerated by interval count, then cut positions, then processor
assignments, all in lexicographic order, so witnesses are deterministic (the
first mapping attaining an optimum wins ties).  Size guards keep accidental
blow-ups out; pass force=True to search anyway.
"""

from __future__ import annotations

import bisect
import itertools
import math
from dataclasses import dataclass

from .errors import Infeasible, InstanceTooLarge
from .model import IntervalMapping, PipelineApp, Platform, _interval_terms

BRUTE_FORCE_MAX_N = 12
BRUTE_FORCE_MAX_P = 8
DECIDE_MAX_N = 16


def fastest_processor(platform: Platform) -> int:
    """1-based index of the fastest processor; speed ties go to the lowest index."""
    best = 1
    for u in range(2, platform.p + 1):
        if platform.s[u - 1] > platform.s[best - 1]:
            best = u
    return best


def optimal_latency(app: PipelineApp, platform: Platform) -> float:
    """Smallest achievable latency: the whole chain on the fastest processor.

    Splitting an interval moves work to a processor that is at best as fast
    and adds a transfer, so no mapping beats
    delta_0/b + (sum w)/max(s) + delta_n/b.
    """
    u = fastest_processor(platform)
    head, _ = _interval_terms(app, platform, 1, app.n, u)
    return 0.0 + head + app.delta[app.n] / platform.b


def optimal_latency_mapping(app: PipelineApp, platform: Platform) -> IntervalMapping:
    """The single-interval mapping attaining `optimal_latency`."""
    return IntervalMapping(((1, app.n),), (fastest_processor(platform),))


def _guard(app: PipelineApp, platform: Platform, force: bool) -> None:
    if force:
        return
    if app.n > BRUTE_FORCE_MAX_N or platform.p > BRUTE_FORCE_MAX_P:
        raise InstanceTooLarge(
            f"exhaustive search refused for n={app.n}, p={platform.p} "
            f"(guard: n <= {BRUTE_FORCE_MAX_N}, p <= {BRUTE_FORCE_MAX_P}); "
            "pass force=True to override"
        )


def _partitions(n: int, max_parts: int, exact_parts: int | None = None):
    """Contiguous partitions of [1..n]: interval count ascending, cuts lexicographic."""
    if exact_parts is None:
        counts = range(1, min(n, max_parts) + 1)
    else:
        if exact_parts > min(n, max_parts):
            return
        counts = (exact_parts,)
    for m in counts:
        for cuts in itertools.combinations(range(1, n), m - 1):
            bounds = (0, *cuts, n)
            yield tuple((bounds[i] + 1, bounds[i + 1]) for i in range(m))


def _term_tables(app: PipelineApp, platform: Platform):
    # head[d, e][u-1] = input + compute, cycle[d, e][u-1] = full cycle time;
    # computed through the same helper as evaluate(), so values match it bit
    # for bit.
    head: dict[tuple[int, int], list[float]] = {}
    cycle: dict[tuple[int, int], list[float]] = {}
    for d in range(1, app.n + 1):
        for e in range(d, app.n + 1):
            pair_head = []
            pair_cycle = []
            for u in range(1, platform.p + 1):
                h, c = _interval_terms(app, platform, d, e, u)
                pair_head.append(h)
                pair_cycle.append(c)
            head[d, e] = pair_head
            cycle[d, e] = pair_cycle
    return head, cycle


def brute_force_min_period(
    app: PipelineApp,
    platform: Platform,
    *,
    force: bool = False,
    exact_intervals: int | None = None,
) -> tuple[float, IntervalMapping]:
    """Exhaustive minimum period over every valid mapping, with its witness.

    exact_intervals restricts the search to mappings with that many intervals;
    an Infeasible is raised when no such mapping exists.
    """
    _guard(app, platform, force)
    _, cycle = _term_tables(app, platform)
    best = math.inf
    witness: tuple[tuple[tuple[int, int], ...], tuple[int, ...]] | None = None
    processors = range(1, platform.p + 1)
    for intervals in _partitions(app.n, platform.p, exact_intervals):
        for alloc in itertools.permutations(processors, len(intervals)):
            worst = -1.0
            for (d, e), u in zip(intervals, alloc):
                c = cycle[d, e][u - 1]
                if c > worst:
                    worst = c
                    if worst >= best:
                        break
            else:
                best = worst
                witness = (intervals, alloc)
    if witness is None:
        raise Infeasible(math.inf, "no mapping with the requested interval count")
    return best, IntervalMapping(*witness)


@dataclass(frozen=True)
class ParetoPoint:
    """A non-dominated (period, latency) pair and a mapping attaining it."""

    period: float
    latency: float
    mapping: IntervalMapping


def pareto_front(
    app: PipelineApp, platform: Platform, *, force: bool = False
) -> tuple[ParetoPoint, ...]:
    """All non-dominated (period, latency) pairs over every valid mapping.

    Sorted by strictly ascending period; latency then strictly descends.  For
    coincident optima the first mapping in enumeration order is the witness.
    """
    _guard(app, platform, force)
    head, cycle = _term_tables(app, platform)
    tail = app.delta[app.n] / platform.b
    periods: list[float] = []
    front: list[tuple[float, float, tuple, tuple]] = []
    processors = range(1, platform.p + 1)
    for intervals in _partitions(app.n, platform.p):
        for alloc in itertools.permutations(processors, len(intervals)):
            period = -1.0
            latency = 0.0
            for (d, e), u in zip(intervals, alloc):
                c = cycle[d, e][u - 1]
                if c > period:
                    period = c
                latency += head[d, e][u - 1]
            latency += tail
            # dominated (or equalled) by the best-latency point at period <= ours?
            hi = bisect.bisect_right(periods, period)
            if hi > 0 and front[hi - 1][1] <= latency:
                continue
            lo = bisect.bisect_left(periods, period)
            while lo < len(front) and front[lo][1] >= latency:
                del front[lo]
                del periods[lo]
            front.insert(lo, (period, latency, intervals, alloc))
            periods.insert(lo, period)
    return tuple(
        ParetoPoint(period, latency, IntervalMapping(intervals, alloc))
        for period, latency, intervals, alloc in front
    )


def min_latency_given_period(
    app: PipelineApp, platform: Platform, period_bound: float, *, force: bool = False
) -> ParetoPoint:
    """The front point with the lowest latency among periods <= period_bound."""
    front = pareto_front(app, platform, force=force)
    chosen = None
    for point in front:
        if point.period <= period_bound:
            chosen = point
    if chosen is None:
        raise Infeasible(
            front[0].period,
            f"no mapping has period <= {period_bound!r}; the minimum is {front[0].period!r}",
        )
    return chosen


def min_period_given_latency(
    app: PipelineApp, platform: Platform, latency_bound: float, *, force: bool = False
) -> ParetoPoint:
    """The front point with the lowest period among latencies <= latency_bound."""
    front = pareto_front(app, platform, force=force)
    for point in front:
        if point.latency <= latency_bound:
            return point
    raise Infeasible(
        front[-1].latency,
        f"no mapping has latency <= {latency_bound!r}; the minimum is {front[-1].latency!r}",
    )


@dataclass(frozen=True)
class Hetero1DInstance:
    """Cut elements a_1..a_n into exactly p contiguous groups, one per
    prescribed value s_1..s_p, keeping every group's load/value ratio <= K."""

    a: tuple[float, ...]
    s: tuple[float, ...]
    K: float

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(float(v) for v in self.a))
        object.__setattr__(self, "s", tuple(float(v) for v in self.s))
        object.__setattr__(self, "K", float(self.K))
        if not self.s:
            raise ValueError("at least one prescribed value is required")
        if len(self.a) < len(self.s):
            raise ValueError("need at least as many elements as groups")
        for v in self.a + self.s + (self.K,):
            if not math.isfinite(v) or v <= 0.0:
                raise ValueError("elements, values, and the bound must be finite and positive")


def hetero_1d_partition_decide(
    inst: Hetero1DInstance, *, force: bool = False
) -> tuple[bool, IntervalMapping | None]:
    """Decide the exact-p contiguous partition problem; return a witness if any.

    Depth-first search over (next element, set of values already used) with
    failed states memoised; this exhausts every partition/assignment pair
    without re-walking dead subtrees.  The witness is the first solution in
    (group end ascending, value index ascending) order, encoded as an
    IntervalMapping whose alloc names value indices.
    """
    n, p = len(inst.a), len(inst.s)
    if n > DECIDE_MAX_N and not force:
        raise InstanceTooLarge(
            f"exhaustive decision refused for n={n} (guard: n <= {DECIDE_MAX_N}); "
            "pass force=True to override"
        )
    dead: set[tuple[int, int]] = set()

    def search(pos: int, mask: int) -> list[tuple[int, int, int]] | None:
        if pos == n + 1:
            return [] if mask == (1 << p) - 1 else None
        formed = bin(mask).count("1")
        remaining = p - formed
        if remaining == 0 or (pos, mask) in dead:
            return None
        load = 0.0
        for end in range(pos, n - remaining + 2):
            load += inst.a[end - 1]
            for u in range(p):
                if mask >> u & 1:
                    continue
                if load <= inst.K * inst.s[u]:
                    rest = search(end + 1, mask | (1 << u))
                    if rest is not None:
                        return [(pos, end, u + 1)] + rest
        dead.add((pos, mask))
        return None

    pieces = search(1, 0)
    if pieces is None:
        return False, None
    return True, IntervalMapping(
        tuple((d, e) for d, e, _ in pieces), tuple(u for _, _, u in pieces)
    )
