"""Rendezvous simulation of a mapped pipeline.

Each interval's processor runs a sequential loop per data set: receive the
input block, compute, send the output block.  Transfers are unbuffered and
synchronous: a transfer of size delta over bandwidth b occupies both
endpoints for delta/b and starts only once the sender has finished computing
the data set and the receiver has finished sending the previous one.  The
outside world feeds the first interval and drains the last and is always
ready, but its transfers still occupy the boundary processors.

Event times are propagated exactly (no time stepping).  Writing t_j for the
duration of the transfer across boundary j (t_0 is the input, t_m the
output), c_j for interval j's compute time, and end_j(k) for the completion
of boundary j's transfer of data set k:

    end_0(k) = end_1(k-1) + t_0
    end_j(k) = max(end_{j-1}(k) + c_j, end_{j+1}(k-1)) + t_j   (0 < j < m)
    end_m(k) = end_{m-1}(k) + c_m + t_m

with end_j(0) = 0.  Data set k completes at end_m(k); the steady state
reproduces the analytic period (the largest interval cycle time) and
end_m(1) the analytic latency.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import IntervalMapping, PipelineApp, Platform, validate


@dataclass(frozen=True)
class SimReport:
    """Measured timings: steady-state period and first data set latency."""

    measured_period: float
    measured_latency: float
    datasets: int


def simulate(
    app: PipelineApp,
    platform: Platform,
    mapping: IntervalMapping,
    num_datasets: int | None = None,
) -> SimReport:
    """Run the pipeline on num_datasets data sets (default, and minimum, 2m + 2).

    The measured period is the mean completion gap over the last m data sets,
    which skips the fill transient; the measured latency is the completion
    time of data set 1.
    """
    validate(app, platform, mapping)
    m = mapping.m
    if num_datasets is None:
        num_datasets = 2 * m + 2
    num_datasets = int(num_datasets)
    if num_datasets < 2 * m + 2:
        raise ValueError(
            f"need at least {2 * m + 2} data sets (2m + 2) to pass the fill transient"
        )

    transfer = [app.delta[0] / platform.b]
    compute = []
    for (d, e), u in zip(mapping.intervals, mapping.alloc):
        work = 0.0
        for k in range(d - 1, e):
            work += app.w[k]
        compute.append(work / platform.s[u - 1])
        transfer.append(app.delta[e] / platform.b)

    end = [0.0] * (m + 1)
    completions = []
    for _ in range(num_datasets):
        nxt = [0.0] * (m + 1)
        nxt[0] = end[1] + transfer[0]
        for j in range(1, m):
            ready = nxt[j - 1] + compute[j - 1]
            if end[j + 1] > ready:
                ready = end[j + 1]
            nxt[j] = ready + transfer[j]
        nxt[m] = nxt[m - 1] + compute[m - 1] + transfer[m]
        end = nxt
        completions.append(end[m])

    period = (completions[-1] - completions[-1 - m]) / m
    return SimReport(
        measured_period=period,
        measured_latency=completions[0],
        datasets=num_datasets,
    )
