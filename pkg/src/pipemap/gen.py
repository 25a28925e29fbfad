"""Deterministic instance generation.

Random instances come from a self-contained 64-bit generator so that equal
seeds give bit-identical instances on any platform or language.  The stream
is xorshift64*:

    x ^= x >> 12;  x ^= x << 25;  x ^= x >> 27;  output (x * 0x2545F4914F6CDD1D) mod 2^64

seeded through one splitmix64 scramble (add 0x9E3779B97F4A7C15, then two
xor-shift-multiplies by 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB) so nearby
seeds give unrelated streams and the state never starts at zero.  Uniform
integers reject raw draws above the largest exact multiple of the range;
uniform reals scale the top 53 bits into [0, 1).

Four instance families share bandwidth b = 10 and integer speeds in [1, 20]:

    e1  data sizes fixed at 10,       work integer in [1, 20]
    e2  data sizes integer in [1, 100], work integer in [1, 20]
    e3  data sizes integer in [1, 20],  work integer in [10, 1000]
    e4  data sizes integer in [1, 20],  work real in [0.01, 10)

Draw order is speeds, then data sizes delta_0..delta_n (skipped for e1), then
work w_1..w_n.  Instance k of a batch is seeded with base_seed + k.

`build_reduction_instance` turns a numerical matching instance into a
partition decision instance; a bound-1 partition exists exactly when the
matching does, which is what makes the decision problem hard.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import PipelineApp, Platform
from .oracle import Hetero1DInstance

_M64 = (1 << 64) - 1

FAMILIES = ("e1", "e2", "e3", "e4")

BANDWIDTH = 10.0
SPEED_RANGE = (1, 20)


class Xorshift64Star:
    """The documented xorshift64* stream; see the module docstring for constants."""

    def __init__(self, seed: int):
        z = (int(seed) + 0x9E3779B97F4A7C15) & _M64
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
        z ^= z >> 31
        self._x = z or 0x9E3779B97F4A7C15

    def next_u64(self) -> int:
        x = self._x
        x ^= x >> 12
        x = (x ^ (x << 25)) & _M64
        x ^= x >> 27
        self._x = x
        return (x * 0x2545F4914F6CDD1D) & _M64

    def uniform_int(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], by rejection."""
        span = hi - lo + 1
        bound = (1 << 64) - ((1 << 64) % span)
        while True:
            u = self.next_u64()
            if u < bound:
                return lo + u % span

    def uniform_real(self, lo: float, hi: float) -> float:
        """Uniform real in [lo, hi), 53-bit resolution."""
        f = (self.next_u64() >> 11) * 2.0**-53
        return lo + f * (hi - lo)


@dataclass(frozen=True)
class ExperimentConfig:
    """One generation setting: family, sizes, and the seed of the instance."""

    family: str
    n: int
    p: int
    seed: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}, expected one of {FAMILIES}")
        if int(self.n) < 1 or int(self.p) < 1:
            raise ValueError("n and p must be at least 1")
        if int(self.seed) < 0:
            raise ValueError("seed must be non-negative")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "p", int(self.p))
        object.__setattr__(self, "seed", int(self.seed))


def generate(config: ExperimentConfig) -> tuple[PipelineApp, Platform]:
    """The instance of a config; equal configs give bit-identical instances."""
    rng = Xorshift64Star(config.seed)
    s = [float(rng.uniform_int(*SPEED_RANGE)) for _ in range(config.p)]
    if config.family == "e1":
        delta = [10.0] * (config.n + 1)
    elif config.family == "e2":
        delta = [float(rng.uniform_int(1, 100)) for _ in range(config.n + 1)]
    else:
        delta = [float(rng.uniform_int(1, 20)) for _ in range(config.n + 1)]
    if config.family == "e3":
        w = [float(rng.uniform_int(10, 1000)) for _ in range(config.n)]
    elif config.family == "e4":
        w = [rng.uniform_real(0.01, 10.0) for _ in range(config.n)]
    else:
        w = [float(rng.uniform_int(1, 20)) for _ in range(config.n)]
    return (
        PipelineApp(n=config.n, w=w, delta=delta),
        Platform(p=config.p, s=s, b=BANDWIDTH),
    )


def generate_batch(config: ExperimentConfig, count: int) -> list[tuple[PipelineApp, Platform]]:
    """Instances seeded config.seed + 0 .. config.seed + count - 1."""
    return [
        generate(
            ExperimentConfig(config.family, config.n, config.p, config.seed + k)
        )
        for k in range(count)
    ]


@dataclass(frozen=True)
class NmwtsInstance:
    """Numerical matching with target sums: find permutations pairing every
    x_i with some y_j so that the sums hit the targets z, one of each.

    Solvable instances necessarily have sum(x) + sum(y) == sum(z); the
    equality is not enforced here, but the reduction below only mirrors the
    matching answer when it holds.
    """

    x: tuple[int, ...]
    y: tuple[int, ...]
    z: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(int(v) for v in self.x))
        object.__setattr__(self, "y", tuple(int(v) for v in self.y))
        object.__setattr__(self, "z", tuple(int(v) for v in self.z))
        if not self.x:
            raise ValueError("at least one triple is required")
        if len(self.y) != len(self.x) or len(self.z) != len(self.x):
            raise ValueError("x, y, and z must have equal length")
        for v in self.x + self.y + self.z:
            if v < 1:
                raise ValueError("all values must be positive integers")

    @property
    def m(self) -> int:
        return len(self.x)

    @property
    def is_balanced(self) -> bool:
        return sum(self.x) + sum(self.y) == sum(self.z)


def build_reduction_instance(inst: NmwtsInstance) -> Hetero1DInstance:
    """The partition decision instance encoding a matching instance.

    With M the largest of all values and N = M + 3, element block i is

        (2M + x_i, 1 repeated M times, 5M, 7M)

    and the prescribed values are 2M + z_i for each i, then 5M + M - y_i for
    each i, then 7M repeated m times; the ratio bound is K = 1.  The three
    value tiers are separated (<= 3M < 5M .. 6M-1 < 7M), which pins every 7M
    element to a 7M value; for balanced instances every remaining inequality
    is tight and the only freedom left is how many unit elements join each
    x block, i.e. the matching itself.
    """
    m = inst.m
    big = max(inst.x + inst.y + inst.z)
    b_, c_, d_ = 2 * big, 5 * big, 7 * big
    a: list[int] = []
    for i in range(m):
        a.append(b_ + inst.x[i])
        a.extend([1] * big)
        a.append(c_)
        a.append(d_)
    s = (
        [b_ + z for z in inst.z]
        + [c_ + big - y for y in inst.y]
        + [d_] * m
    )
    return Hetero1DInstance(tuple(float(v) for v in a), tuple(float(v) for v in s), 1.0)
