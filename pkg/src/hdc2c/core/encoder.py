"""IR evaluation: one sample in, one encoded hypervector out.

Two honest strategies coexist. Unfused stream nodes are materialized as
(m, dims) arrays and reduced with the reference operations; fused nodes
walk the active features once, pulling stream elements lazily into a
constant number of buffers, which is the shape of the loops the C backend
emits. All arithmetic is exact integers past map_range, so both
strategies must agree element for element.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from hdc2c.core import ops
from hdc2c.core.embeddings import EmbeddingTable
from hdc2c.errors import EncodeDataError
from hdc2c.frontend.model import EmbedKind, ProgramDescription
from hdc2c.ir.nodes import EncodingIR, IRNode, Op, ShapeType

SKIP_SENTINEL = -1


@dataclass(frozen=True)
class EncodeContext:
    """Everything encode_sample needs besides the sample itself."""

    tables: dict[str, EmbeddingTable]
    weight_name: str
    input_dim: int
    integer_features: bool
    value_range: tuple[float, float] = (-1.0, 1.0)

    @classmethod
    def for_description(
        cls,
        desc: ProgramDescription,
        tables: dict[str, EmbeddingTable],
        value_range: tuple[float, float] | None = None,
    ) -> "EncodeContext":
        return cls(
            tables=tables,
            weight_name=desc.weight_embed.name,
            input_dim=desc.input_dim,
            integer_features=desc.integer_features,
            value_range=value_range or (-1.0, 1.0),
        )


@dataclass(frozen=True)
class PreparedSample:
    """Active positions and the weight-table row index per active feature."""

    positions: np.ndarray  # (m,) int64, indices into the raw feature vector
    weight_rows: np.ndarray  # (m,) int64, row indices into the weight table


def prepare_sample(ctx: EncodeContext, values: np.ndarray) -> PreparedSample:
    """Resolve sentinels and weight-table rows for one raw sample.

    Raises:
        EncodeDataError: When no feature is active or an integer
            feature indexes outside the weight table.
    """
    table = ctx.tables[ctx.weight_name]
    if ctx.integer_features:
        positions = np.flatnonzero(values != SKIP_SENTINEL)
        if positions.size == 0:
            raise EncodeDataError("sample has no active features")
        rows = values[positions].astype(np.int64)
        bad = np.flatnonzero((rows < 0) | (rows >= table.spec.items))
        if bad.size:
            p = int(positions[bad[0]])
            raise EncodeDataError(
                f"feature {p}: index {int(values[p])} outside [0, {table.spec.items})"
            )
    else:
        positions = np.arange(ctx.input_dim, dtype=np.int64)
        lo, hi = ctx.value_range
        rows = ops.map_range_many(values.astype(np.float64), lo, hi, table.spec.items)
    return PreparedSample(positions, rows)


def encode_sample(ir: EncodingIR, ctx: EncodeContext, values: np.ndarray) -> np.ndarray:
    """Evaluate ``ir`` on one sample, returning an int32 hypervector."""
    return _Evaluator(ir, ctx, prepare_sample(ctx, values)).output()


class _Evaluator:
    def __init__(self, ir: EncodingIR, ctx: EncodeContext, prep: PreparedSample) -> None:
        self.ir = ir
        self.ctx = ctx
        self.prep = prep
        self.m = int(prep.positions.size)
        self.cache: dict[int, np.ndarray] = {}

    def output(self) -> np.ndarray:
        return self._single(self.ir.output)

    # stream access ------------------------------------------------------

    def _ref_rows(self, node: IRNode) -> np.ndarray:
        assert node.table is not None
        table = self.ctx.tables[node.table]
        if node.table == self.ctx.weight_name:
            return table.rows[self.prep.weight_rows]
        return table.rows[self.prep.positions]

    def _ref_element(self, node: IRNode, i: int) -> np.ndarray:
        assert node.table is not None
        table = self.ctx.tables[node.table]
        if node.table == self.ctx.weight_name:
            return table.rows[int(self.prep.weight_rows[i])]
        return table.rows[int(self.prep.positions[i])]

    def _materialize(self, node_id: int) -> np.ndarray:
        node = self.ir.node(node_id)
        if node.op is Op.LoadEmbedding:
            return self._ref_rows(node)
        if node.op is Op.BatchBind:
            return self._materialize(node.args[0]) * self._materialize(node.args[1])
        if node.op is Op.Permute:
            assert node.param is not None
            return np.roll(self._materialize(node.args[0]), node.param, axis=1)
        raise AssertionError(f"not a stream node: {node.op.name}")

    def _element(self, node_id: int, i: int) -> np.ndarray:
        node = self.ir.node(node_id)
        if node.op is Op.LoadEmbedding:
            return self._ref_element(node, i)
        if node.op is Op.BatchBind:
            return self._element(node.args[0], i) * self._element(node.args[1], i)
        if node.op is Op.Permute:
            assert node.param is not None
            return np.roll(self._element(node.args[0], i), node.param)
        raise AssertionError(f"not a stream node: {node.op.name}")

    # single-vector evaluation -------------------------------------------

    def _single(self, node_id: int) -> np.ndarray:
        if node_id in self.cache:
            return self.cache[node_id]
        node = self.ir.node(node_id)
        value = self._compute(node)
        self.cache[node_id] = value
        return value

    def _need(self, count: int, what: str) -> None:
        if self.m < count:
            raise EncodeDataError(
                f"{what} needs {count} active features, sample has {self.m}"
            )

    def _compute(self, node: IRNode) -> np.ndarray:
        if node.op is Op.MultiBundle:
            self._need(1, "MULTIBUNDLE")
            return ops.multiset(list(self._materialize(node.args[0])))
        if node.op is Op.Ngram:
            assert node.param is not None
            self._need(node.param, f"NGRAM({node.param})")
            return ops.ngram(list(self._materialize(node.args[0])), node.param)
        if node.op is Op.FusedBindBundle:
            self._need(1, "MULTIBUNDLE")
            left, right = node.args
            acc = self._element(left, 0) * self._element(right, 0)
            acc = acc.astype(np.int32)
            for i in range(1, self.m):
                acc += self._element(left, i) * self._element(right, i)
            return acc
        if node.op is Op.FusedNgram:
            assert node.param is not None
            n = node.param
            self._need(n, f"NGRAM({n})")
            ref = node.args[0]
            acc = np.zeros_like(self._element(ref, 0))
            for i in range(self.m - n + 1):
                term = self._element(ref, i)
                for j in range(1, n):
                    term = np.roll(term, 1) * self._element(ref, i + j)
                acc += term
            return acc
        if node.op is Op.BindEW:
            return self._single(node.args[0]) * self._single(node.args[1])
        if node.op is Op.BundleEW:
            return self._single(node.args[0]) + self._single(node.args[1])
        if node.op is Op.Permute:
            assert node.param is not None
            if node.shape is ShapeType.SingleHV:
                return np.roll(self._single(node.args[0]), node.param)
        raise AssertionError(f"cannot evaluate {node.op.name} as a single vector")
