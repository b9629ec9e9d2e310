"""Bipolar hypervector runtime: RNG, tables, operations, memory."""

from __future__ import annotations

from hdc2c.core.embeddings import EmbeddingTable, build_tables, level_rows, random_rows
from hdc2c.core.memory import AssociativeMemory
from hdc2c.core.rng import Xorshift64Star, stream_state
from hdc2c.core import ops

__all__ = [
    "AssociativeMemory",
    "EmbeddingTable",
    "Xorshift64Star",
    "build_tables",
    "level_rows",
    "ops",
    "random_rows",
    "stream_state",
]
