"""Cost model for interval mappings of linear pipelines onto processors.

An application is a chain of n stages; stage k needs w_k operations, consumes
a data item of size delta_{k-1} and produces one of size delta_k.  A mapping
cuts [1..n] into m contiguous intervals and places each one on a distinct
processor.  With link bandwidth b and processor speeds s, an interval [d..e]
on processor u spends

    cycle(d, e, u) = delta_{d-1}/b + (w_d + ... + w_e)/s_u + delta_e/b

per data set.  The period is the largest interval cycle time over the mapping;
the latency is the traversal time of a single data set,

    latency = sum_j ( delta_{d_j - 1}/b + work_j/s_alloc(j) ) + delta_n/b .

delta_0 and delta_n are always charged: the first interval reads its input
from the outside world and the last interval writes its output back.  With a
single interval the period and the latency coincide.

All sums over stages accumulate left to right, so repeated evaluation of the
same mapping is bit-for-bit reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    DuplicateProcessor,
    IndexOutOfRange,
    MappingInvalid,
    NonContiguousIntervals,
)

# Relative slack used by every `value <= bound` constraint check.
CONSTRAINT_RTOL = 1e-12


def within_limit(value: float, limit: float) -> bool:
    """True when value meets the bound up to the shared relative slack."""
    return value <= limit * (1.0 + CONSTRAINT_RTOL)


@dataclass(frozen=True)
class PipelineApp:
    """A linear workflow: n stages with work w[k] and boundary data sizes delta[k]."""

    n: int
    w: tuple[float, ...]
    delta: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "w", tuple(float(x) for x in self.w))
        object.__setattr__(self, "delta", tuple(float(x) for x in self.delta))
        if self.n < 1:
            raise ValueError("an application needs at least one stage")
        if len(self.w) != self.n:
            raise ValueError(f"expected {self.n} stage weights, got {len(self.w)}")
        if len(self.delta) != self.n + 1:
            raise ValueError(f"expected {self.n + 1} data sizes, got {len(self.delta)}")
        for x in self.w:
            if not math.isfinite(x) or x <= 0.0:
                raise ValueError("stage weights must be finite and positive")
        for x in self.delta:
            if not math.isfinite(x) or x < 0.0:
                raise ValueError("data sizes must be finite and non-negative")


@dataclass(frozen=True)
class Platform:
    """p processors of speeds s[u] linked by bandwidth b, identical on every route."""

    p: int
    s: tuple[float, ...]
    b: float

    def __post_init__(self):
        object.__setattr__(self, "p", int(self.p))
        object.__setattr__(self, "s", tuple(float(x) for x in self.s))
        object.__setattr__(self, "b", float(self.b))
        if self.p < 1:
            raise ValueError("a platform needs at least one processor")
        if len(self.s) != self.p:
            raise ValueError(f"expected {self.p} speeds, got {len(self.s)}")
        for x in self.s:
            if not math.isfinite(x) or x <= 0.0:
                raise ValueError("processor speeds must be finite and positive")
        if not math.isfinite(self.b) or self.b <= 0.0:
            raise ValueError("bandwidth must be finite and positive")


@dataclass(frozen=True)
class IntervalMapping:
    """Contiguous stage intervals plus the distinct processor owning each one.

    Stage, interval, and processor indices are 1-based; intervals are
    inclusive (d, e) pairs.  Construction only checks shape; semantic
    validity against an application and platform is `validate`'s job.
    """

    intervals: tuple[tuple[int, int], ...]
    alloc: tuple[int, ...]

    def __post_init__(self):
        intervals = tuple((int(d), int(e)) for d, e in self.intervals)
        alloc = tuple(int(u) for u in self.alloc)
        object.__setattr__(self, "intervals", intervals)
        object.__setattr__(self, "alloc", alloc)
        if not intervals:
            raise MappingInvalid("a mapping needs at least one interval")
        if len(intervals) != len(alloc):
            raise MappingInvalid(
                f"{len(intervals)} intervals but {len(alloc)} processor assignments"
            )

    @property
    def m(self) -> int:
        return len(self.intervals)


@dataclass(frozen=True)
class CostReport:
    """Evaluation of one mapping: period, latency, and the bottleneck interval."""

    period: float
    latency: float
    bottleneck: int  # 1-based index of the first interval attaining the period


def validate(app: PipelineApp, platform: Platform, mapping: IntervalMapping) -> None:
    """Check a mapping against application and platform.

    Raises the error of the first violated rule, checked in this order:
    interval contiguity over [1..n], processor indices in [1..p], processor
    distinctness.
    """
    prev_end = 0
    for d, e in mapping.intervals:
        if d != prev_end + 1:
            raise NonContiguousIntervals(
                f"interval starting at stage {d} does not follow stage {prev_end}"
            )
        if e < d:
            raise NonContiguousIntervals(f"interval ({d}, {e}) is empty")
        prev_end = e
    if prev_end != app.n:
        raise NonContiguousIntervals(
            f"intervals end at stage {prev_end}, expected stage {app.n}"
        )
    for u in mapping.alloc:
        if not 1 <= u <= platform.p:
            raise IndexOutOfRange(f"processor index {u} outside 1..{platform.p}")
    if len(set(mapping.alloc)) != mapping.m:
        seen: set[int] = set()
        for u in mapping.alloc:
            if u in seen:
                raise DuplicateProcessor(f"processor {u} assigned to two intervals")
            seen.add(u)


def stage_work(app: PipelineApp, d: int, e: int) -> float:
    """Total work of stages d..e, accumulated left to right."""
    total = 0.0
    for k in range(d - 1, e):
        total += app.w[k]
    return total


def _interval_terms(
    app: PipelineApp, platform: Platform, d: int, e: int, u: int
) -> tuple[float, float]:
    # (input + compute, full cycle); the fixed association keeps cached values
    # bit-identical to evaluate().
    head = app.delta[d - 1] / platform.b + stage_work(app, d, e) / platform.s[u - 1]
    return head, head + app.delta[e] / platform.b


def interval_latency_term(
    app: PipelineApp, platform: Platform, d: int, e: int, u: int
) -> float:
    """Latency contribution of interval [d..e] on u: input transfer plus compute."""
    _check_interval(app, platform, d, e, u)
    return _interval_terms(app, platform, d, e, u)[0]


def interval_cycle_time(
    app: PipelineApp, platform: Platform, d: int, e: int, u: int
) -> float:
    """Cycle time of interval [d..e] on u: input transfer, compute, output transfer."""
    _check_interval(app, platform, d, e, u)
    return _interval_terms(app, platform, d, e, u)[1]


def _check_interval(app: PipelineApp, platform: Platform, d: int, e: int, u: int) -> None:
    if not 1 <= d <= e <= app.n:
        raise IndexOutOfRange(f"interval ({d}, {e}) outside 1..{app.n}")
    if not 1 <= u <= platform.p:
        raise IndexOutOfRange(f"processor index {u} outside 1..{platform.p}")


def evaluate(app: PipelineApp, platform: Platform, mapping: IntervalMapping) -> CostReport:
    """Period, latency, and bottleneck of a mapping; validates it first."""
    validate(app, platform, mapping)
    period = -1.0
    bottleneck = 1
    latency = 0.0
    for j, ((d, e), u) in enumerate(zip(mapping.intervals, mapping.alloc), start=1):
        head, cycle = _interval_terms(app, platform, d, e, u)
        latency += head
        if cycle > period:
            period = cycle
            bottleneck = j
    latency += app.delta[app.n] / platform.b
    return CostReport(period=period, latency=latency, bottleneck=bottleneck)
