"""Greedy bottom-up fusion over the encoding IR.

Two rewrites, applied wherever they match:

  MultiBundle(BatchBind(a, b))  ->  FusedBindBundle(a, b)
  Ngram(ref)                    ->  FusedNgram(ref)

Both replace a reduce-over-materialized-stream with a single accumulation
loop, which is where the memory saving comes from. Nodes orphaned by a
rewrite are dropped and ids are renumbered densely.
"""

from __future__ import annotations

from hdc2c.ir.nodes import EncodingIR, IRNode, Op, ShapeType


def fuse(ir: EncodingIR) -> EncodingIR:
    """Apply the fusion rewrites and return a renumbered IR.

    The result computes the same function: fused nodes are defined by the
    equality FusedBindBundle(a, b) = MultiBundle(BatchBind(a, b)) and
    FusedNgram = Ngram, checked by the interpreter equivalence tests.
    """
    rewritten: dict[int, tuple[Op, tuple[int, ...], int | None]] = {}
    for node in ir.nodes:
        if node.op is Op.MultiBundle:
            inner = ir.node(node.args[0])
            if inner.op is Op.BatchBind and _only_consumer(ir, inner.id, node.id):
                rewritten[node.id] = (Op.FusedBindBundle, inner.args, None)
        elif node.op is Op.Ngram:
            rewritten[node.id] = (Op.FusedNgram, node.args, node.param)

    # Rebuild keeping only nodes reachable from the output.
    keep: set[int] = set()

    def mark(node_id: int) -> None:
        if node_id in keep:
            return
        keep.add(node_id)
        if node_id in rewritten:
            _, args, _ = rewritten[node_id]
        else:
            args = ir.node(node_id).args
        for a in args:
            mark(a)

    mark(ir.output)

    remap: dict[int, int] = {}
    nodes: list[IRNode] = []
    for node in ir.nodes:
        if node.id not in keep:
            continue
        if node.id in rewritten:
            op, args, param = rewritten[node.id]
            shape = ShapeType.SingleHV
            table = None
        else:
            op, args, param = node.op, node.args, node.param
            shape, table = node.shape, node.table
        new_id = len(nodes)
        remap[node.id] = new_id
        nodes.append(
            IRNode(new_id, op, tuple(remap[a] for a in args), shape, table, param)
        )
    return EncodingIR(tuple(nodes), remap[ir.output])


def _only_consumer(ir: EncodingIR, produced: int, consumer: int) -> bool:
    # A shared BatchBind result cannot be folded into one consumer.
    for node in ir.nodes:
        if node.id != consumer and produced in node.args:
            return False
    return True
