"""Counter-based random streams.

Every random draw is a pure function of ``(seed, trial, tag, position)``, so
results do not depend on evaluation order, chunking or the number of worker
processes. The compiled kernels implement the same hash; both must agree bit
for bit.
"""

from dataclasses import dataclass

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_TO_UNIT = 2.0 ** -53

# draw purposes; each gets its own counter space
TAG_CONTEXT = 1
TAG_SOURCE = 2
TAG_CHANNEL = 3
TAG_COIN = 4


def mix64(z: int) -> int:
    """splitmix64 step on a Python int."""
    z = (z + GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def mix64_array(z: np.ndarray) -> np.ndarray:
    """Vectorised :func:`mix64` over a uint64 array (wrapping arithmetic)."""
    z = np.asarray(z, dtype=np.uint64) + np.uint64(GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def trial_key(seed: int, trial: int) -> int:
    return mix64((mix64(seed & MASK64) + GOLDEN * (trial + 1)) & MASK64)


def trial_keys(seed: int, start: int, stop: int) -> np.ndarray:
    trials = np.arange(start, stop, dtype=np.uint64)
    base = np.uint64(mix64(seed & MASK64))
    return mix64_array(base + np.uint64(GOLDEN) * (trials + np.uint64(1)))


def uniform_grid(keys, tag: int, positions) -> np.ndarray:
    """Uniform doubles in [0, 1) for every (key, position) pair, broadcast."""
    keys = np.asarray(keys, dtype=np.uint64)
    counters = (np.uint64(tag) << np.uint64(56)) | np.asarray(positions, dtype=np.uint64)
    z = mix64_array(keys ^ mix64_array(counters))
    return (z >> np.uint64(11)).astype(np.float64) * _TO_UNIT


@dataclass(frozen=True)
class Stream:
    """A seeded, position-addressable random stream for one trial.

    ``Stream(seed).uniforms(TAG_CHANNEL, n)`` always returns the same values,
    and ``Stream(seed, trial=k)`` is the substream used by trial ``k`` of a
    Monte Carlo run with that seed.
    """

    seed: int
    trial: int = 0

    def __post_init__(self):
        if not 0 <= self.seed <= MASK64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.trial < 0:
            raise ValueError("trial index must be nonnegative")

    @property
    def key(self) -> int:
        return trial_key(self.seed, self.trial)

    def spawn(self, trial: int) -> "Stream":
        return Stream(self.seed, trial)

    def uniforms(self, tag: int, n: int, start: int = 0) -> np.ndarray:
        positions = np.arange(start, start + n, dtype=np.uint64)
        return uniform_grid(np.uint64(self.key), tag, positions)

    def bits(self, tag: int, n: int, prob_one: float) -> np.ndarray:
        """``n`` bits, each 1 with probability ``prob_one``."""
        return (self.uniforms(tag, n) < prob_one).astype(np.uint8)


def fresh_seed() -> int:
    return int.from_bytes(np.random.default_rng().bytes(8), "little")
