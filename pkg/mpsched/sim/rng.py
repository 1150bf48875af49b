"""
mpsched - Seeded Random Streams

Each (seed, stream_id) pair owns an independent numpy PCG64 generator seeded
with SeedSequence(seed, spawn_key=(crc32(stream_id),)). The label is hashed
with zlib.crc32, never Python's per-process randomized hash().
"""

import math
import zlib

import numpy as np

from mpsched.core.exceptions import ConfigurationError

_SEED_MASK = (1 << 64) - 1


class RandomStream:
    """Named, reproducible source of uniform variates."""

    BLOCK_SIZE = 4096

    def __init__(self, seed: int, stream_id: str):
        if seed < 0:
            raise ConfigurationError([f"seed: must be nonnegative, got {seed}"])
        self.seed = int(seed) & _SEED_MASK
        self.stream_id = str(stream_id)
        sequence = np.random.SeedSequence(
            entropy=self.seed,
            spawn_key=(zlib.crc32(self.stream_id.encode("utf-8")),),
        )
        self._generator = np.random.Generator(np.random.PCG64(sequence))
        self._block = np.empty(0)
        self._pos = 0

    def __repr__(self) -> str:
        return f"RandomStream(seed={self.seed}, stream_id={self.stream_id!r})"

    def uniform(self) -> float:
        """Uniform variate in [0, 1)."""
        if self._pos >= len(self._block):
            self._block = self._generator.random(self.BLOCK_SIZE)
            self._pos = 0
        value = float(self._block[self._pos])
        self._pos += 1
        return value

    def uniform_positive(self) -> float:
        """Uniform variate in (0, 1]."""
        return 1.0 - self.uniform()

    def bernoulli(self, p: float) -> bool:
        return self.uniform() < p

    def index(self, n: int) -> int:
        """Uniform integer in [0, n)."""
        return min(int(self.uniform() * n), n - 1)


def draw_exponential(stream: RandomStream, rate: float) -> float:
    """
    Exponential duration in seconds: -ln(U)/rate with U in (0, 1].

    Raises:
        ConfigurationError: If rate is not positive
    """
    if not rate > 0:
        raise ConfigurationError([f"rate: must be > 0, got {rate}"])
    return -math.log(stream.uniform_positive()) / rate


__all__ = ["RandomStream", "draw_exponential"]
