"""Typed encoding IR: lowering, fusion, memory planning."""

from __future__ import annotations

from hdc2c.ir.fuse import fuse
from hdc2c.ir.lower import lower
from hdc2c.ir.memplan import MemoryPlan, plan_memory
from hdc2c.ir.nodes import EncodingIR, IRNode, Op, ShapeType

__all__ = [
    "EncodingIR",
    "IRNode",
    "MemoryPlan",
    "Op",
    "ShapeType",
    "fuse",
    "lower",
    "plan_memory",
]
