"""Canonical text form of a ProgramDescription.

format_description() and the parser are inverses: re-parsing the printed
text yields a structurally equal description. Tables are printed in
declaration order because that order fixes their random streams.
"""

from __future__ import annotations

from hdc2c.frontend import model
from hdc2c.frontend.model import EmbedKind, ExecType, ProgramDescription


def format_expr(expr: model.EncodingExpr) -> str:
    if isinstance(expr, model.Ref):
        return expr.name
    if isinstance(expr, model.Bind):
        return f"BIND({format_expr(expr.left)},{format_expr(expr.right)})"
    if isinstance(expr, model.Bundle):
        return f"BUNDLE({format_expr(expr.left)},{format_expr(expr.right)})"
    if isinstance(expr, model.BatchBind):
        return f"BATCHBIND({format_expr(expr.left)},{format_expr(expr.right)})"
    if isinstance(expr, model.MultiBundle):
        return f"MULTIBUNDLE({format_expr(expr.inner)})"
    if isinstance(expr, model.HashTable):
        return f"HASHTABLE({expr.keys},{expr.values})"
    if isinstance(expr, model.Ngram):
        return f"NGRAM({expr.ref},{expr.n})"
    if isinstance(expr, model.Permute):
        return f"PERMUTE({format_expr(expr.inner)},{expr.shift})"
    raise TypeError(f"unknown expression node {type(expr).__name__}")


def format_description(desc: ProgramDescription) -> str:
    """Render ``desc`` as directive text that round-trips through parse."""
    lines = [f".NAME {desc.name};"]
    for spec in desc.tables():
        directive = "WEIGHT_EMBED" if spec.name == desc.weight_embed.name else "EMBEDDING"
        kind = "LEVEL" if spec.kind is EmbedKind.LEVEL else "RANDOM"
        lines.append(f".{directive} ({spec.name} {kind} {spec.items});")
    lines.append(f".INPUT_DIM {desc.input_dim};")
    lines.append(f".ENCODING {format_expr(desc.encoding)};")
    lines.append(f".CLASSES {desc.classes};")
    lines.append(f".TYPE {'PARALLEL' if desc.exec_type is ExecType.PARALLEL else 'SEQUENTIAL'};")
    lines.append(f".DIMENSIONS {desc.dimensions};")
    lines.append(f".TRAIN_SIZE {desc.train_size};")
    lines.append(f".TEST_SIZE {desc.test_size};")
    lines.append(f".NUM_THREADS {desc.num_threads};")
    lines.append(f".VECTOR_SIZE {desc.vector_size_bytes};")
    lines.append(f".DEBUG {'TRUE' if desc.debug else 'FALSE'};")
    lines.append(f".SEED {desc.seed};")
    return "\n".join(lines) + "\n"
