"""Reproducible random number streams.

Two layers live here.  ``RngStream`` wraps a numpy ``SeedSequence`` so that
every simulation in the package can be replayed from a ``(master_seed,
stream_index)`` pair, and independent streams never collide.  The counter
functions implement a splitmix64 generator whose i-th output depends only on
``(seed, i)``; compiled kernels draw from it one value at a time while the
vectorised twin produces bit-identical arrays for cross-checking in pure
numpy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
# 2**-53, so a 53-bit integer maps into [0, 1)
_INV53 = 1.0 / 9007199254740992.0


def mix64(x):
    """splitmix64 finalizer applied elementwise to uint64 input.

    Args:
        x: scalar or array, converted to uint64 with wrapping semantics.

    Returns:
        uint64 scalar or array of the same shape.
    """
    z = np.asarray(x, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
        z = z ^ (z >> np.uint64(31))
    return z


def counter_uniform(seed: int, index: int) -> float:
    """The index-th uniform of the counter stream for ``seed``.

    Defined as ``mix64(seed + (index + 1) * GOLDEN)`` reduced to the top
    53 bits.  Pure function of its arguments; safe to call out of order.
    """
    s = np.uint64(seed)
    i = np.uint64(index)
    with np.errstate(over="ignore"):
        z = mix64(s + (i + np.uint64(1)) * _GOLDEN)
    return float(z >> np.uint64(11)) * _INV53


def counter_uniforms(seed: int, start: int, count: int) -> np.ndarray:
    """Vectorised block ``[counter_uniform(seed, start + j) for j in range(count)]``."""
    s = np.uint64(seed)
    idx = np.arange(start, start + count, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = mix64(s + (idx + np.uint64(1)) * _GOLDEN)
    return (z >> np.uint64(11)).astype(np.float64) * _INV53


@dataclass(frozen=True)
class RngStream:
    """Address of a reproducible random stream.

    The pair ``(master_seed, stream_index)`` is the whole state: two streams
    with different indices are statistically independent, and re-creating a
    stream with the same pair replays the same draws.
    """

    master_seed: int
    stream_index: int = 0

    def seed_sequence(self) -> np.random.SeedSequence:
        return np.random.SeedSequence(
            entropy=self.master_seed, spawn_key=(self.stream_index,)
        )

    def generator(self) -> np.random.Generator:
        """A fresh numpy Generator positioned at the start of this stream."""
        return np.random.Generator(np.random.Philox(self.seed_sequence()))

    def kernel_seed(self) -> int:
        """A 64-bit seed for the counter generator, derived from this stream."""
        return int(self.seed_sequence().generate_state(1, np.uint64)[0])

    def stream(self, index: int) -> "RngStream":
        """Sibling stream with the same master seed and a new index."""
        return RngStream(self.master_seed, index)
