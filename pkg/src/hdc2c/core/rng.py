"""Deterministic 64-bit PRNG shared with the emitted C programs.

xorshift64-star: three shift-xor steps on the state, output is the state
multiplied by a fixed odd constant. Every embedding table draws from its
own stream so adding a table never perturbs the others; a stream's state
is derived from the program seed and the table's declaration index. The C
runtime implements the identical recurrence, which is what makes compiled
programs regenerate the exact tables from nothing but the seed.
"""

from __future__ import annotations

import numpy as np

MULTIPLIER = 0x2545F4914F6CDD1D
STREAM_SALT = 0x9E3779B97F4A7C15
_MASK = (1 << 64) - 1


def stream_state(seed: int, stream_id: int) -> int:
    """Initial state for table number ``stream_id`` under ``seed``."""
    state = (seed + STREAM_SALT * (stream_id + 1)) & _MASK
    return state if state != 0 else STREAM_SALT


class Xorshift64Star:
    """One sequential stream of 64-bit draws."""

    __slots__ = ("state",)

    def __init__(self, state: int) -> None:
        state &= _MASK
        self.state = state if state != 0 else STREAM_SALT

    @classmethod
    def for_table(cls, seed: int, stream_id: int) -> "Xorshift64Star":
        return cls(stream_state(seed, stream_id))

    def next_u64(self) -> int:
        s = self.state
        s ^= s >> 12
        s ^= (s << 25) & _MASK
        s ^= s >> 27
        self.state = s
        return (s * MULTIPLIER) & _MASK

    def fill_u64(self, count: int) -> np.ndarray:
        """``count`` sequential draws as a uint64 array."""
        out = np.empty(count, dtype=np.uint64)
        s = self.state
        mask = _MASK
        mult = MULTIPLIER
        for i in range(count):
            s ^= s >> 12
            s ^= (s << 25) & mask
            s ^= s >> 27
            out[i] = (s * mult) & mask
        self.state = s
        return out

    def fill_bipolar(self, count: int) -> np.ndarray:
        """``count`` draws mapped to +1 when the top bit is 0, else -1."""
        draws = self.fill_u64(count)
        return np.where(draws >> np.uint64(63) == 0, 1, -1).astype(np.int32)
