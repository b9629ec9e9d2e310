"""Item-memory construction.

random_rows draws independent bipolar rows; level_rows interpolates
between a base row and a target row so that nearby levels stay similar.
Row layout and draw order are pinned: rows are filled row-major from the
table's stream, and a level table draws its base row first, target second.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from hdc2c.core.rng import Xorshift64Star
from hdc2c.frontend.model import EmbedKind, EmbeddingSpec, ProgramDescription


def random_rows(items: int, dims: int, rng: Xorshift64Star) -> np.ndarray:
    """``items`` independent bipolar rows of width ``dims``."""
    if items < 1 or dims < 1:
        raise ValueError("need at least one row and one dimension")
    return rng.fill_bipolar(items * dims).reshape(items, dims)


def level_rows(items: int, dims: int, rng: Xorshift64Star) -> np.ndarray:
    """``items`` rows sliding from a base row to a target row.

    Row i takes its first cut(i) elements from the target and the rest
    from the base, with cut(i) = round(i * dims / (items - 1)) computed in
    exact integer arithmetic (half rounds away from zero). Row 0 is the
    base, the last row is the target, and Hamming distance from the base
    is non-decreasing in the row index.
    """
    if items < 2:
        raise ValueError("a level table needs at least 2 items")
    base_target = random_rows(2, dims, rng)
    return interpolate_rows(base_target[0], base_target[1], items)


def interpolate_rows(base: np.ndarray, target: np.ndarray, items: int) -> np.ndarray:
    dims = base.shape[0]
    rows = np.empty((items, dims), dtype=np.int32)
    for i in range(items):
        cut = (2 * i * dims + (items - 1)) // (2 * (items - 1))
        rows[i, :cut] = target[:cut]
        rows[i, cut:] = base[cut:]
    return rows


@dataclass(frozen=True)
class EmbeddingTable:
    spec: EmbeddingSpec
    stream_id: int
    rows: np.ndarray  # (items, dims) int32, elements in {-1, +1}


def build_tables(desc: ProgramDescription) -> dict[str, EmbeddingTable]:
    """Construct every declared table from the description's seed.

    Stream ids follow declaration order, so two descriptions that declare
    the same tables in the same order get identical contents regardless of
    what the rest of the file says.
    """
    tables: dict[str, EmbeddingTable] = {}
    for spec in desc.tables():
        stream = desc.stream_id(spec.name)
        rng = Xorshift64Star.for_table(desc.seed, stream)
        if spec.kind is EmbedKind.LEVEL:
            rows = level_rows(spec.items, desc.dimensions, rng)
        else:
            rows = random_rows(spec.items, desc.dimensions, rng)
        tables[spec.name] = EmbeddingTable(spec, stream, rows)
    return tables
