"""Lane layout for the generated C.

Dimensions are padded up to a whole number of vector registers. Padding
lanes hold zero everywhere: tables never write them, elementwise kernels
multiply or add zeros, and reductions, the digest and the quantizer walk
the logical width only. That is what makes predictions independent of the
chosen register width.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ConfigError
from ..frontend.model import ProgramDescription

LANE_BYTES = 4  # int32 lanes


@dataclass(frozen=True)
class CodegenPlan:
    dimensions: int
    vector_size_bytes: int
    lanes: int
    padded_dims: int
    num_batches: int


def plan_layout(dimensions: int, vector_size_bytes: int) -> CodegenPlan:
    if vector_size_bytes < LANE_BYTES:
        raise ConfigError(
            f"vector size must be at least {LANE_BYTES} bytes, got {vector_size_bytes}"
        )
    if vector_size_bytes & (vector_size_bytes - 1):
        # GCC vector_size demands a power of two.
        raise ConfigError(
            f"vector size must be a power of two, got {vector_size_bytes}"
        )
    lanes = vector_size_bytes // LANE_BYTES
    num_batches = -(-dimensions // lanes)
    return CodegenPlan(
        dimensions=dimensions,
        vector_size_bytes=vector_size_bytes,
        lanes=lanes,
        padded_dims=num_batches * lanes,
        num_batches=num_batches,
    )


def plan_for(desc: ProgramDescription) -> CodegenPlan:
    return plan_layout(desc.dimensions, desc.vector_size_bytes)
