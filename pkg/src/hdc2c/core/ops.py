"""Hypervector operations on bipolar int32 arrays.

Binding is element-wise multiplication, bundling element-wise addition,
permutation a right cyclic rotation. All integer math is exact, so any
evaluation order gives identical results; the only floating-point step in
the whole encode path is map_range, whose expression is pinned to match
the C runtime double for double.
"""

from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np


def bind(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a * b


def bundle(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a + b


def permute(a: np.ndarray, k: int) -> np.ndarray:
    """Right cyclic rotation: out[(j + k) mod d] = a[j]."""
    if k < 0:
        raise ValueError("rotation count must be non-negative")
    return np.roll(a, k)


def multiset(vectors: Sequence[np.ndarray]) -> np.ndarray:
    """Bundle a whole sequence: v1 + v2 + ... + vm."""
    if len(vectors) == 0:
        raise ValueError("cannot bundle an empty sequence")
    return np.sum(np.asarray(vectors), axis=0, dtype=np.int32)


def hash_table(keys: Sequence[np.ndarray], values: Sequence[np.ndarray]) -> np.ndarray:
    """Bundle of key-value bindings: sum_i keys[i] * values[i]."""
    if len(keys) != len(values):
        raise ValueError(f"{len(keys)} keys vs {len(values)} values")
    return multiset([bind(k, v) for k, v in zip(keys, values)])


def ngram(vectors: Sequence[np.ndarray], n: int) -> np.ndarray:
    """Bundle of n-wide windows, each a bound chain of rotated elements.

    Window at position i contributes rot^(n-1)(v_i) * rot^(n-2)(v_{i+1})
    * ... * v_{i+n-1}. Computed incrementally: rotating a partial product
    once and binding the next element raises every earlier element's
    rotation count by one, which is exactly the window term.
    """
    m = len(vectors)
    if not 1 <= n <= m:
        raise ValueError(f"window {n} outside [1, {m}]")
    acc = np.zeros_like(vectors[0])
    for i in range(m - n + 1):
        term = vectors[i]
        for j in range(1, n):
            term = bind(permute(term, 1), vectors[i + j])
        acc = bundle(acc, term)
    return acc


def hard_quantize(a: np.ndarray) -> np.ndarray:
    """Clamp to bipolar: strictly positive becomes +1, the rest -1."""
    return np.where(a > 0, 1, -1).astype(np.int32)


def map_range(x: float, lo: float, hi: float, levels: int) -> int:
    """Affine-map ``x`` from [lo, hi] onto a level index, clamped.

    The index is floor(v + 0.5) of v = ((x - lo) / (hi - lo)) * (levels -
    1), which rounds halves away from zero everywhere the clamp does not
    already decide. The C runtime computes the identical expression.
    """
    if not lo < hi:
        raise ValueError("need lo < hi")
    if levels < 2:
        raise ValueError("need at least 2 levels")
    v = ((x - lo) / (hi - lo)) * (levels - 1)
    idx = math.floor(v + 0.5)
    if idx < 0:
        return 0
    if idx > levels - 1:
        return levels - 1
    return idx


def map_range_many(x: np.ndarray, lo: float, hi: float, levels: int) -> np.ndarray:
    """Vectorized map_range over a float64 array; same arithmetic."""
    v = ((x - lo) / (hi - lo)) * (levels - 1)
    idx = np.floor(v + 0.5)
    return np.clip(idx, 0, levels - 1).astype(np.int64)


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    na = float(np.linalg.norm(a.astype(np.float64)))
    nb = float(np.linalg.norm(b.astype(np.float64)))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a.astype(np.float64), b.astype(np.float64)) / (na * nb))


def linear(x: np.ndarray, weights: np.ndarray, bias: np.ndarray | None = None) -> np.ndarray:
    out = x.astype(np.float64) @ weights.astype(np.float64).T
    if bias is not None:
        out = out + bias
    return out


def argmax(scores: np.ndarray) -> int:
    """Index of the maximum; ties resolve to the lowest index."""
    if scores.size == 0:
        raise ValueError("empty score vector")
    return int(np.argmax(scores))
