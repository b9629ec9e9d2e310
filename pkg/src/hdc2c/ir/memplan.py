"""Working-set model for IR evaluation.

The plan prices the naive strategy for unfused nodes (materialize a whole
feature stream, input_dim x dimensions elements) and the streaming
strategy for fused ones (an accumulator plus a temporary or two). Fusion
must therefore never increase the plan, which is the monotonicity property
the tests check.
"""

from __future__ import annotations

from dataclasses import dataclass

from hdc2c.frontend.model import ProgramDescription
from hdc2c.ir.nodes import EncodingIR, Op, ShapeType


@dataclass(frozen=True)
class MemoryPlan:
    """Element counts by buffer class, all in units of one vector element."""

    materialized: int
    accumulators: int
    temporaries: int

    @property
    def peak_elements(self) -> int:
        return self.materialized + self.accumulators + self.temporaries


def plan_memory(ir: EncodingIR, desc: ProgramDescription) -> MemoryPlan:
    """Price the evaluation of ``ir`` for ``desc``.

    Per node:
      - LoadEmbedding: free (tables are preexisting state).
      - BatchBind / Permute on a stream: one materialized stream.
      - MultiBundle: accumulator plus one streaming temporary.
      - Ngram(n): accumulator plus n + 1 temporaries for rotated windows.
      - FusedBindBundle: accumulator plus one temporary.
      - FusedNgram: accumulator plus two temporaries (running product and
        rotation scratch).
      - BindEW / BundleEW / Permute on a single vector: one temporary.
    """
    d = desc.dimensions
    stream = desc.input_dim * d
    materialized = 0
    accumulators = 0
    temporaries = 0
    for node in ir.nodes:
        if node.op is Op.LoadEmbedding:
            continue
        if node.op is Op.BatchBind:
            materialized += stream
        elif node.op is Op.Permute:
            if node.shape is ShapeType.FeatureStream:
                materialized += stream
            else:
                temporaries += d
        elif node.op is Op.MultiBundle:
            accumulators += d
            temporaries += d
        elif node.op is Op.Ngram:
            assert node.param is not None
            accumulators += d
            temporaries += (node.param + 1) * d
        elif node.op is Op.FusedBindBundle:
            accumulators += d
            temporaries += d
        elif node.op is Op.FusedNgram:
            accumulators += d
            temporaries += 2 * d
        else:  # BindEW, BundleEW
            temporaries += d
    return MemoryPlan(materialized, accumulators, temporaries)
