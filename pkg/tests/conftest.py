"""Shared test helpers.

The reference implementations here recompute costs and optima straight from
the definitions (plain loops, exhaustive enumeration) so the package is
checked against code that shares none of its internals.  Sums accumulate left
to right, matching the package's documented evaluation order, so comparisons
can be exact where the contract promises bit-identical results.
"""

from __future__ import annotations

import itertools
import random

import pytest

from pipemap import ExperimentConfig, IntervalMapping, generate

FAMILIES = ("e1", "e2", "e3", "e4")


def all_mappings(n: int, p: int):
    """Every valid interval mapping of n stages onto p processors."""
    for m in range(1, min(n, p) + 1):
        for cuts in itertools.combinations(range(1, n), m - 1):
            bounds = (0, *cuts, n)
            intervals = tuple((bounds[i] + 1, bounds[i + 1]) for i in range(m))
            for alloc in itertools.permutations(range(1, p + 1), m):
                yield IntervalMapping(intervals, alloc)


def reference_costs(app, platform, mapping):
    """Period and latency evaluated directly from their definitions."""
    period = 0.0
    latency = 0.0
    for (d, e), u in zip(mapping.intervals, mapping.alloc):
        work = sum(app.w[d - 1 : e])
        head = app.delta[d - 1] / platform.b + work / platform.s[u - 1]
        cycle = head + app.delta[e] / platform.b
        if cycle > period:
            period = cycle
        latency += head
    latency += app.delta[app.n] / platform.b
    return period, latency


def random_mapping(rng: random.Random, n: int, p: int) -> IntervalMapping:
    """A uniformly shaped valid mapping: random interval count, cuts, processors."""
    m = rng.randint(1, min(n, p))
    cuts = sorted(rng.sample(range(1, n), m - 1))
    bounds = (0, *cuts, n)
    intervals = tuple((bounds[i] + 1, bounds[i + 1]) for i in range(m))
    alloc = tuple(rng.sample(range(1, p + 1), m))
    return IntervalMapping(intervals, alloc)


def small_configs(count: int, base_seed: int = 1000):
    """A deterministic mix of families and sizes small enough for enumeration."""
    return [
        ExperimentConfig(FAMILIES[i % 4], 3 + i % 6, 2 + i % 3, base_seed + i)
        for i in range(count)
    ]


def nmwts_has_matching(x, y, z) -> bool:
    """Exhaustively decide numerical matching: can x and y be paired off so
    the sums hit the multiset z, one of each?"""
    m = len(x)
    for sx in itertools.permutations(range(m)):
        for sy in itertools.permutations(range(m)):
            if all(x[sx[k]] + y[sy[k]] == z[k] for k in range(m)):
                return True
    return False


@pytest.fixture(scope="session")
def small_corpus():
    """200 generated instances with n <= 8 and p <= 4, exhaustively searchable."""
    return [(cfg, *generate(cfg)) for cfg in small_configs(200)]
