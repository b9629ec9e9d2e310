"""Validated description model and encoding expression AST."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum, auto


class EmbedKind(Enum):
    RANDOM = auto()
    LEVEL = auto()


class ExecType(Enum):
    SEQUENTIAL = auto()
    PARALLEL = auto()


@dataclass(frozen=True)
class EmbeddingSpec:
    """One item-memory declaration: a table of ``items`` hypervectors."""

    name: str
    kind: EmbedKind
    items: int


# --- encoding expressions ----------------------------------------------
#
# The grammar is tiny, so each combinator is its own frozen dataclass.
# Structural equality between two parses of the same text is the round-trip
# contract, which frozen dataclasses give for free.


class EncodingExpr:
    """Base class for encoding expression nodes."""


@dataclass(frozen=True)
class Ref(EncodingExpr):
    name: str


@dataclass(frozen=True)
class Bind(EncodingExpr):
    left: EncodingExpr
    right: EncodingExpr


@dataclass(frozen=True)
class Bundle(EncodingExpr):
    left: EncodingExpr
    right: EncodingExpr


@dataclass(frozen=True)
class BatchBind(EncodingExpr):
    left: EncodingExpr
    right: EncodingExpr


@dataclass(frozen=True)
class MultiBundle(EncodingExpr):
    inner: EncodingExpr


@dataclass(frozen=True)
class HashTable(EncodingExpr):
    keys: str
    values: str


@dataclass(frozen=True)
class Ngram(EncodingExpr):
    ref: str
    n: int


@dataclass(frozen=True)
class Permute(EncodingExpr):
    inner: EncodingExpr
    shift: int


def referenced_tables(expr: EncodingExpr) -> list[str]:
    """Collect table names referenced by ``expr`` in left-to-right order."""
    out: list[str] = []

    def walk(e: EncodingExpr) -> None:
        if isinstance(e, Ref):
            out.append(e.name)
        elif isinstance(e, (Bind, Bundle, BatchBind)):
            walk(e.left)
            walk(e.right)
        elif isinstance(e, MultiBundle):
            walk(e.inner)
        elif isinstance(e, HashTable):
            out.append(e.keys)
            out.append(e.values)
        elif isinstance(e, Ngram):
            out.append(e.ref)
        elif isinstance(e, Permute):
            walk(e.inner)

    walk(expr)
    return out


# --- the validated program ---------------------------------------------

DEFAULT_SEED = 42
DEFAULT_VECTOR_SIZE = 128
DEFAULT_THREADS = 1


@dataclass(frozen=True)
class ProgramDescription:
    """A fully validated description, ready for lowering.

    ``table_order`` lists every table name in source declaration order; a
    table's index in it is the id of the deterministic random stream that
    fills the table, so declaration order is load-bearing.
    """

    name: str
    weight_embed: EmbeddingSpec
    embeddings: tuple[EmbeddingSpec, ...]
    input_dim: int
    encoding: EncodingExpr
    classes: int
    dimensions: int
    train_size: int
    test_size: int
    table_order: tuple[str, ...]
    exec_type: ExecType = ExecType.SEQUENTIAL
    num_threads: int = DEFAULT_THREADS
    vector_size_bytes: int = DEFAULT_VECTOR_SIZE
    debug: bool = False
    seed: int = DEFAULT_SEED

    def tables(self) -> tuple[EmbeddingSpec, ...]:
        """All tables (weight included) in declaration order."""
        by_name = {self.weight_embed.name: self.weight_embed}
        for e in self.embeddings:
            by_name[e.name] = e
        return tuple(by_name[n] for n in self.table_order)

    def table(self, name: str) -> EmbeddingSpec:
        for spec in self.tables():
            if spec.name == name:
                return spec
        raise KeyError(name)

    def stream_id(self, name: str) -> int:
        return self.table_order.index(name)

    @property
    def integer_features(self) -> bool:
        """True when samples carry integer indices instead of reals."""
        return self.weight_embed.kind is EmbedKind.RANDOM
