"""Acceptance suite: one test per shipping criterion.

Each test states its tolerance inline and prints a single summary line on
success, so `pytest -v tests/test_acceptance.py` doubles as the sign-off
report.  The slower checks also assert their own wall-clock budgets.
"""

from __future__ import annotations

import random
import time

from pipemap import (
    CANONICAL_NAMES,
    ExperimentConfig,
    Infeasible,
    NmwtsInstance,
    SweepSpec,
    brute_force_min_period,
    build_reduction_instance,
    evaluate,
    failure_threshold,
    failure_threshold_details,
    generate,
    geometric_grid,
    hetero_1d_partition_decide,
    optimal_latency,
    pareto_front,
    run_heuristic,
    run_sweep,
    simulate,
    within_limit,
    write_csv,
)

from conftest import (
    FAMILIES,
    all_mappings,
    nmwts_has_matching,
    random_mapping,
    reference_costs,
)
from test_properties import (
    check_bottleneck_decrease,
    check_decision_monotonicity,
    check_pareto_non_domination,
    check_scale_invariance,
)

PERIOD_MODE = ("h1", "h2a", "h2b", "h3")
LATENCY_MODE = ("h4", "h5")


def test_c1_simulation_matches_cost_model():
    start = time.perf_counter()
    rng = random.Random(31)
    checked = 0
    for i in range(100):
        cfg = ExperimentConfig(FAMILIES[i % 4], 3 + i % 6, 2 + i % 3, 2000 + i)
        app, platform = generate(cfg)
        for _ in range(3):
            mapping = random_mapping(rng, app.n, platform.p)
            analytic = evaluate(app, platform, mapping)
            measured = simulate(app, platform, mapping)
            assert abs(measured.measured_period - analytic.period) <= 1e-9 * analytic.period
            assert abs(measured.measured_latency - analytic.latency) <= 1e-9 * analytic.latency
            checked += 1
    elapsed = time.perf_counter() - start
    assert checked == 300
    assert elapsed < 60.0
    print(f"PASS c1: simulation matched the cost model on {checked} mappings "
          f"(rel 1e-9) in {elapsed:.1f}s")


def test_c2_minimum_latency_matches_exhaustive_search(small_corpus):
    for _, app, platform in small_corpus:
        best = min(
            reference_costs(app, platform, mapping)[1]
            for mapping in all_mappings(app.n, platform.p)
        )
        assert optimal_latency(app, platform) == best
    print(f"PASS c2: closed-form minimum latency equal to the exhaustive "
          f"minimum on {len(small_corpus)} instances, exactly")


def test_c3_heuristics_never_beat_the_exact_front(small_corpus):
    rtol = 1e-9
    runs = 0
    for _, app, platform in small_corpus:
        bf_min, _ = brute_force_min_period(app, platform)
        front = pareto_front(app, platform)
        lopt = optimal_latency(app, platform)
        grid = geometric_grid(0.6 * bf_min, 3.0 * lopt, 16)
        for name in CANONICAL_NAMES:
            for threshold in grid:
                try:
                    mapping = run_heuristic(name, app, platform, threshold)
                except Infeasible:
                    continue
                report = evaluate(app, platform, mapping)
                assert report.period >= bf_min
                assert any(
                    point.period <= report.period * (1.0 + rtol)
                    and point.latency <= report.latency * (1.0 + rtol)
                    for point in front
                )
                runs += 1
    print(f"PASS c3: {runs} feasible heuristic results all dominated-or-equaled "
          f"by the exact front (rel 1e-9)")


def test_c4_returned_mappings_honor_their_bounds(small_corpus):
    feasible_runs = 0
    infeasible_runs = 0
    for _, app, platform in small_corpus:
        lopt = optimal_latency(app, platform)
        grid = geometric_grid(0.2 * lopt, 4.0 * lopt, 8)
        for threshold in grid:
            for name in PERIOD_MODE:
                try:
                    mapping = run_heuristic(name, app, platform, threshold)
                except Infeasible:
                    infeasible_runs += 1
                    continue
                assert within_limit(evaluate(app, platform, mapping).period, threshold)
                feasible_runs += 1
            for name in LATENCY_MODE:
                try:
                    mapping = run_heuristic(name, app, platform, threshold)
                except Infeasible:
                    # only a bound below the optimal latency is refusable
                    assert not within_limit(lopt, threshold)
                    infeasible_runs += 1
                    continue
                assert within_limit(evaluate(app, platform, mapping).latency, threshold)
                feasible_runs += 1
    print(f"PASS c4: {feasible_runs} mappings within bound (rel 1e-12), "
          f"{infeasible_runs} refusals all justified")


def test_c5_reduction_mirrors_the_matching_answer():
    start = time.perf_counter()
    rng = random.Random(5)

    yes_instances = []
    for i in range(20):
        m = 1 + i % 3
        x = tuple(rng.randint(1, 5) for _ in range(m))
        y = tuple(rng.randint(1, 6 - xi) for xi in x)
        z = [x[k] + y[k] for k in range(m)]
        rng.shuffle(z)
        yes_instances.append(NmwtsInstance(x, y, tuple(z)))
    for nmwts in yes_instances:
        inst = build_reduction_instance(nmwts)
        ok, witness = hetero_1d_partition_decide(inst, force=True)
        assert ok and witness is not None
        for (d, e), u in zip(witness.intervals, witness.alloc):
            load = 0.0
            for v in inst.a[d - 1 : e]:
                load += v
            assert load <= inst.s[u - 1] * inst.K * (1.0 + 1e-12)

    no_instances = []
    seen = set()
    while len(no_instances) < 10:
        x = (rng.randint(1, 5), rng.randint(1, 5))
        y = (rng.randint(1, 5), rng.randint(1, 5))
        total = sum(x) + sum(y)
        z1 = rng.randint(1, total - 1)
        z = (z1, total - z1)
        key = (x, y, z)
        if key in seen or nmwts_has_matching(x, y, z):
            continue
        seen.add(key)
        no_instances.append(NmwtsInstance(x, y, z))
    for nmwts in no_instances:
        ok, _ = hetero_1d_partition_decide(build_reduction_instance(nmwts), force=True)
        assert not ok

    elapsed = time.perf_counter() - start
    assert elapsed < 60.0
    print(f"PASS c5: 20 solvable matchings accepted with tight witnesses, "
          f"10 verified unsolvable ones rejected, in {elapsed:.1f}s")


def test_c6_failure_threshold_ordering_at_desk_scale():
    cfg = ExperimentConfig("e1", 10, 10, 42)
    mean_h1 = failure_threshold(cfg, "h1", instances=50)
    mean_h2a = failure_threshold(cfg, "h2a", instances=50)
    assert mean_h1 <= mean_h2a
    points_h4 = failure_threshold_details(cfg, "h4", instances=50)
    points_h5 = failure_threshold_details(cfg, "h5", instances=50)
    agree = sum(a == b for a, b in zip(points_h4, points_h5))
    assert agree >= 45
    print(f"PASS c6: mean failure threshold h1 {mean_h1:.4g} <= h2a {mean_h2a:.4g}; "
          f"h4/h5 failure points agree on {agree}/50 instances")


def test_c7_sweep_is_byte_deterministic(tmp_path):
    start = time.perf_counter()
    spec = SweepSpec(
        configs=(ExperimentConfig("e1", 10, 10, 42),),
        grid=geometric_grid(0.5, 50.0, 16),
        heuristics=CANONICAL_NAMES,
        mode="both",
        instances=50,
    )
    first = run_sweep(spec)
    second = run_sweep(spec)
    assert len(first) == 50 * len(CANONICAL_NAMES) * 16
    path_a = tmp_path / "a.csv"
    path_b = tmp_path / "b.csv"
    write_csv(first, path_a)
    write_csv(second, path_b)
    assert path_a.read_bytes() == path_b.read_bytes()
    elapsed = time.perf_counter() - start
    assert elapsed < 120.0
    print(f"PASS c7: {len(first)} sweep rows byte-identical across two runs "
          f"in {elapsed:.1f}s")


def test_c8_property_batches_reach_size():
    counts = {
        "scale invariance": check_scale_invariance(),
        "bottleneck decrease": check_bottleneck_decrease(),
        "front non-domination": check_pareto_non_domination(),
        "decision monotonicity": check_decision_monotonicity(),
    }
    for label, count in counts.items():
        assert count >= 500, f"{label} ran only {count} cases"
    summary = ", ".join(f"{label} {count}" for label, count in counts.items())
    print(f"PASS c8: property batches all >= 500 cases ({summary})")
