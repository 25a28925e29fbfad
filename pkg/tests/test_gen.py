import random

import pytest

from pipemap import (
    ExperimentConfig,
    Hetero1DInstance,
    NmwtsInstance,
    Xorshift64Star,
    build_reduction_instance,
    generate,
    generate_batch,
)

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _reference_stream(seed, count):
    # independent rewrite of the documented generator: splitmix64 scramble of
    # the seed, then xorshift64* steps
    z = (seed + _GOLDEN) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    z ^= z >> 31
    x = z if z else _GOLDEN
    out = []
    for _ in range(count):
        x ^= x >> 12
        x = (x ^ (x << 25)) & _MASK
        x ^= x >> 27
        out.append((x * 0x2545F4914F6CDD1D) & _MASK)
    return out


# regression pins: these exact outputs must never change, or every seeded
# instance in every recorded experiment silently changes with them
FROZEN_STREAMS = {
    0: (0x7BBCB40D550682D0, 0xDE7FE413D00CC9FD, 0xB3C638353C668C91, 0xE073AFC0949195FC),
    1: (0x4B46A55DF3611B9B, 0xD7E1F1410E763EF4, 0x5F14EC66975F9B06, 0x3B2C74FAD44D6CDB),
    42: (0x31B0ECE7C4F697A2, 0x9008A3B1CB686F03, 0x7C7173ABD97BE16F, 0x45672C8C8D6B8C4F),
}


def test_stream_regression_values():
    for seed, expected in FROZEN_STREAMS.items():
        rng = Xorshift64Star(seed)
        got = tuple(rng.next_u64() for _ in range(4))
        assert got == expected
        assert tuple(_reference_stream(seed, 4)) == expected


def test_stream_matches_reference_on_many_seeds():
    for seed in (2, 3, 7, 1000, 2**63, 2**64 - 1):
        rng = Xorshift64Star(seed)
        assert [rng.next_u64() for _ in range(20)] == _reference_stream(seed, 20)


def test_zero_state_fallback():
    # the unique seed whose scramble lands on zero; the state falls back to
    # the golden-ratio constant instead of sticking at zero forever
    seed = (1 << 64) - _GOLDEN
    rng = Xorshift64Star(seed)
    first = rng.next_u64()
    assert first == _reference_stream(seed, 1)[0]
    assert first != 0
    assert len({rng.next_u64() for _ in range(16)}) == 16


def test_uniform_int_range_and_coverage():
    rng = Xorshift64Star(9)
    draws = [rng.uniform_int(1, 20) for _ in range(4000)]
    assert set(draws) == set(range(1, 21))


def test_uniform_int_frozen_draws():
    rng = Xorshift64Star(123)
    assert [rng.uniform_int(1, 20) for _ in range(6)] == [4, 20, 7, 20, 8, 2]


def test_uniform_real_range_and_frozen_draws():
    rng = Xorshift64Star(123)
    draws = [rng.uniform_real(0.01, 10.0) for _ in range(3)]
    assert draws == [1.792140160232651, 3.4189618688767247, 9.685927201498078]
    rng = Xorshift64Star(11)
    for _ in range(2000):
        v = rng.uniform_real(0.01, 10.0)
        assert 0.01 <= v < 10.0


def test_uniform_real_is_stream_scaled():
    count = 50
    rng = Xorshift64Star(77)
    raw = _reference_stream(77, count)
    for k in range(count):
        expected = 0.01 + (raw[k] >> 11) * 2.0**-53 * (10.0 - 0.01)
        assert rng.uniform_real(0.01, 10.0) == expected


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig("e5", 3, 2, 1)
    with pytest.raises(ValueError):
        ExperimentConfig("e1", 0, 2, 1)
    with pytest.raises(ValueError):
        ExperimentConfig("e1", 3, 0, 1)
    with pytest.raises(ValueError):
        ExperimentConfig("e1", 3, 2, -1)


def test_family_ranges():
    for family, n, p, seed in (
        ("e1", 12, 5, 3),
        ("e2", 12, 5, 3),
        ("e3", 12, 5, 3),
        ("e4", 12, 5, 3),
    ):
        app, platform = generate(ExperimentConfig(family, n, p, seed))
        assert platform.b == 10.0
        assert all(s == int(s) and 1 <= s <= 20 for s in platform.s)
        if family == "e1":
            assert all(d == 10.0 for d in app.delta)
        elif family == "e2":
            assert all(d == int(d) and 1 <= d <= 100 for d in app.delta)
        else:
            assert all(d == int(d) and 1 <= d <= 20 for d in app.delta)
        if family == "e3":
            assert all(w == int(w) and 10 <= w <= 1000 for w in app.w)
        elif family == "e4":
            assert all(0.01 <= w < 10.0 for w in app.w)
        else:
            assert all(w == int(w) and 1 <= w <= 20 for w in app.w)


def test_generate_is_deterministic():
    cfg = ExperimentConfig("e2", 6, 3, 2024)
    assert generate(cfg) == generate(cfg)


def test_frozen_instance_snapshot():
    app, platform = generate(ExperimentConfig("e2", 3, 2, 7))
    assert app.w == (3.0, 5.0, 17.0)
    assert app.delta == (58.0, 17.0, 10.0, 37.0)
    assert platform.s == (19.0, 13.0)
    assert platform.b == 10.0


def test_draw_order_speeds_then_deltas_then_work():
    # e2 consumes the stream as p speeds, n+1 data sizes, n work values;
    # e1 skips the data-size draws entirely
    def take_int(stream, lo, hi):
        span = hi - lo + 1
        bound = (1 << 64) - ((1 << 64) % span)
        while True:
            u = stream.pop(0)
            if u < bound:
                return float(lo + u % span)

    n, p, seed = 4, 3, 55
    stream = _reference_stream(seed, 64)
    expect_s = [take_int(stream, 1, 20) for _ in range(p)]
    expect_delta = [take_int(stream, 1, 100) for _ in range(n + 1)]
    expect_w = [take_int(stream, 1, 20) for _ in range(n)]
    app, platform = generate(ExperimentConfig("e2", n, p, seed))
    assert list(platform.s) == expect_s
    assert list(app.delta) == expect_delta
    assert list(app.w) == expect_w

    stream = _reference_stream(seed, 64)
    expect_s = [take_int(stream, 1, 20) for _ in range(p)]
    expect_w = [take_int(stream, 1, 20) for _ in range(n)]
    app, platform = generate(ExperimentConfig("e1", n, p, seed))
    assert list(platform.s) == expect_s
    assert list(app.w) == expect_w


def test_batch_uses_consecutive_seeds():
    cfg = ExperimentConfig("e3", 5, 3, 90)
    batch = generate_batch(cfg, 4)
    assert len(batch) == 4
    for k, pair in enumerate(batch):
        assert pair == generate(ExperimentConfig("e3", 5, 3, 90 + k))


def test_nmwts_validation_and_balance():
    inst = NmwtsInstance((1, 2), (3, 1), (4, 3))
    assert inst.m == 2
    assert inst.is_balanced
    assert not NmwtsInstance((1,), (1,), (3,)).is_balanced
    with pytest.raises(ValueError):
        NmwtsInstance((), (), ())
    with pytest.raises(ValueError):
        NmwtsInstance((1, 2), (3,), (4, 3))
    with pytest.raises(ValueError):
        NmwtsInstance((0,), (1,), (1,))


def test_reduction_worked_example():
    inst = build_reduction_instance(NmwtsInstance((1,), (1,), (2,)))
    assert inst == Hetero1DInstance(
        (5.0, 1.0, 1.0, 10.0, 14.0), (6.0, 11.0, 14.0), 1.0
    )


def test_reduction_layout_and_tier_separation():
    rng = random.Random(8)
    for _ in range(30):
        m = rng.randint(1, 4)
        x = tuple(rng.randint(1, 6) for _ in range(m))
        y = tuple(rng.randint(1, 6) for _ in range(m))
        z = tuple(rng.randint(1, 6) for _ in range(m))
        nmwts = NmwtsInstance(x, y, z)
        inst = build_reduction_instance(nmwts)
        big = max(x + y + z)
        assert len(inst.a) == (big + 3) * m
        assert len(inst.s) == 3 * m
        assert inst.K == 1.0
        for i in range(m):
            block = inst.a[i * (big + 3) : (i + 1) * (big + 3)]
            assert block[0] == 2 * big + x[i]
            assert block[1 : big + 1] == (1.0,) * big
            assert block[big + 1] == 5 * big
            assert block[big + 2] == 7 * big
        low, mid, top = inst.s[:m], inst.s[m : 2 * m], inst.s[2 * m :]
        assert max(low) <= 3 * big < 5 * big <= min(mid)
        assert max(mid) <= 6 * big - 1 < 7 * big
        assert top == (7.0 * big,) * m
