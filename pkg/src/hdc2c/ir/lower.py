"""Lowering: encoding AST to typed IR.

HASHTABLE(k, v) is sugar for MULTIBUNDLE(BATCHBIND(k, v)) and disappears
here. Type checking happens during construction; shape violations raise
EncodingTypeError naming the operation and both shapes.
"""

from __future__ import annotations

from hdc2c.errors import EncodingTypeError
from hdc2c.frontend import model
from hdc2c.frontend.model import ProgramDescription
from hdc2c.ir.nodes import EncodingIR, IRNode, Op, ShapeType


def lower(desc: ProgramDescription) -> EncodingIR:
    """Lower the validated encoding into an EncodingIR.

    Args:
        desc: A validated description.

    Returns:
        An unfused IR whose output node is a SingleHV.

    Raises:
        EncodingTypeError: On shape violations, an ngram window larger
            than the input width, or a positional table narrower than the
            input.
    """
    return _Lowerer(desc).run()


class _Lowerer:
    def __init__(self, desc: ProgramDescription) -> None:
        self.desc = desc
        self.nodes: list[IRNode] = []
        self.loads: dict[str, int] = {}

    def run(self) -> EncodingIR:
        out = self._lower(self.desc.encoding)
        node = self.nodes[out]
        if node.shape is not ShapeType.SingleHV:
            raise EncodingTypeError(
                f"encoding result must be SingleHV, got {node.shape.name}", node=f"%{out}"
            )
        return EncodingIR(tuple(self.nodes), out)

    def _add(
        self,
        op: Op,
        args: tuple[int, ...],
        shape: ShapeType,
        table: str | None = None,
        param: int | None = None,
    ) -> int:
        node = IRNode(len(self.nodes), op, args, shape, table, param)
        self.nodes.append(node)
        return node.id

    def _load(self, name: str) -> int:
        if name in self.loads:
            return self.loads[name]
        spec = self.desc.table(name)
        if name != self.desc.weight_embed.name and spec.items < self.desc.input_dim:
            raise EncodingTypeError(
                f"table {name} has {spec.items} rows but positions run to "
                f"{self.desc.input_dim}; a positional table needs one row per feature"
            )
        node_id = self._add(Op.LoadEmbedding, (), ShapeType.FeatureStream, table=name)
        self.loads[name] = node_id
        return node_id

    def _expect(self, node_id: int, shape: ShapeType, op: str) -> None:
        actual = self.nodes[node_id].shape
        if actual is not shape:
            raise EncodingTypeError(
                f"{op} expects {shape.name}, got {actual.name}", node=f"%{node_id}"
            )

    def _lower(self, expr: model.EncodingExpr) -> int:
        if isinstance(expr, model.Ref):
            return self._load(expr.name)
        if isinstance(expr, model.BatchBind):
            left = self._lower(expr.left)
            right = self._lower(expr.right)
            self._expect(left, ShapeType.FeatureStream, "BATCHBIND")
            self._expect(right, ShapeType.FeatureStream, "BATCHBIND")
            return self._add(Op.BatchBind, (left, right), ShapeType.FeatureStream)
        if isinstance(expr, (model.Bind, model.Bundle)):
            op = Op.BindEW if isinstance(expr, model.Bind) else Op.BundleEW
            word = "BIND" if op is Op.BindEW else "BUNDLE"
            left = self._lower(expr.left)
            right = self._lower(expr.right)
            self._expect(left, ShapeType.SingleHV, word)
            self._expect(right, ShapeType.SingleHV, word)
            return self._add(op, (left, right), ShapeType.SingleHV)
        if isinstance(expr, model.MultiBundle):
            inner = self._lower(expr.inner)
            self._expect(inner, ShapeType.FeatureStream, "MULTIBUNDLE")
            return self._add(Op.MultiBundle, (inner,), ShapeType.SingleHV)
        if isinstance(expr, model.HashTable):
            keys = self._load(expr.keys)
            values = self._load(expr.values)
            bound = self._add(Op.BatchBind, (keys, values), ShapeType.FeatureStream)
            return self._add(Op.MultiBundle, (bound,), ShapeType.SingleHV)
        if isinstance(expr, model.Ngram):
            if not 1 <= expr.n <= self.desc.input_dim:
                raise EncodingTypeError(
                    f"NGRAM window {expr.n} outside [1, {self.desc.input_dim}]"
                )
            ref = self._load(expr.ref)
            return self._add(Op.Ngram, (ref,), ShapeType.SingleHV, param=expr.n)
        if isinstance(expr, model.Permute):
            inner = self._lower(expr.inner)
            shape = self.nodes[inner].shape
            return self._add(Op.Permute, (inner,), shape, param=expr.shift)
        raise EncodingTypeError(f"unknown expression node {type(expr).__name__}")
