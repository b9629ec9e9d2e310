"""IR node and graph types.

The IR is a small DAG over two shapes. A FeatureStream stands for one
hypervector per active input feature; a SingleHV is one hypervector.
Reducers (MultiBundle, Ngram and their fused forms) collapse a stream into
a single vector, so every well-typed encoding ends in a SingleHV.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, auto


class ShapeType(Enum):
    FeatureStream = auto()
    SingleHV = auto()


class Op(Enum):
    LoadEmbedding = auto()
    BindEW = auto()
    BundleEW = auto()
    BatchBind = auto()
    MultiBundle = auto()
    Ngram = auto()
    Permute = auto()
    FusedBindBundle = auto()
    FusedNgram = auto()


@dataclass(frozen=True)
class IRNode:
    """One operation. ``args`` are ids of earlier nodes (topological order).

    ``table`` names the embedding for LoadEmbedding; ``param`` holds the
    Ngram window size or the Permute rotation count.
    """

    id: int
    op: Op
    args: tuple[int, ...]
    shape: ShapeType
    table: str | None = None
    param: int | None = None

    def render(self) -> str:
        if self.op is Op.LoadEmbedding:
            inner = self.table or ""
        else:
            inner = ", ".join(f"%{a}" for a in self.args)
            if self.param is not None:
                inner = f"{inner}, {self.param}" if inner else str(self.param)
        return f"%{self.id} = {self.op.name}({inner}) : {self.shape.name}"


@dataclass(frozen=True)
class EncodingIR:
    """A topologically ordered DAG with a designated SingleHV output."""

    nodes: tuple[IRNode, ...]
    output: int

    def __post_init__(self) -> None:
        for idx, node in enumerate(self.nodes):
            if node.id != idx:
                raise ValueError(f"node ids must be dense, got {node.id} at {idx}")
            if any(a >= idx for a in node.args):
                raise ValueError(f"node %{idx} refers forward")
        if self.nodes[self.output].shape is not ShapeType.SingleHV:
            raise ValueError("encoding output must be a SingleHV")

    def node(self, node_id: int) -> IRNode:
        return self.nodes[node_id]

    def dump(self) -> str:
        """Stable textual form: one node per line in topological order."""
        return "\n".join(n.render() for n in self.nodes) + "\n"

    def tables_used(self) -> tuple[str, ...]:
        seen: list[str] = []
        for n in self.nodes:
            if n.op is Op.LoadEmbedding and n.table not in seen:
                assert n.table is not None
                seen.append(n.table)
        return tuple(seen)
