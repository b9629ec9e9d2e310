"""Class-accumulator associative memory.

Training adds quantized encodings into per-class count rows (64-bit, so
ordering never matters and threads can merge partial copies). Inference
scores a query against each class as dot(counts, query) / ||counts||,
which equals the dot product with the L2-normalized row but stays exact:
both dots are integers, and the single division of exactly-representable
values is reproduced bit for bit by the C runtime.
"""

from __future__ import annotations

import numpy as np

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK = (1 << 64) - 1


class AssociativeMemory:
    def __init__(self, classes: int, dims: int) -> None:
        if classes < 2:
            raise ValueError("need at least 2 classes")
        self.classes = classes
        self.dims = dims
        self.counts = np.zeros((classes, dims), dtype=np.int64)
        self.norm_rows: np.ndarray | None = None
        self._norms: np.ndarray | None = None

    def update(self, encoded: np.ndarray, label: int) -> None:
        """Accumulate one quantized encoding into its class row."""
        if not 0 <= label < self.classes:
            raise ValueError(f"label {label} outside [0, {self.classes})")
        self.counts[label] += encoded
        self.norm_rows = None
        self._norms = None

    def merge(self, other: "AssociativeMemory") -> None:
        """Fold a partial memory in (used to join per-thread copies)."""
        self.counts += other.counts
        self.norm_rows = None
        self._norms = None

    def normalize(self) -> np.ndarray:
        """Populate and return L2-normalized rows; zero rows stay zero."""
        sumsq = np.einsum("ij,ij->i", self.counts, self.counts)
        norms = np.sqrt(sumsq.astype(np.float64))
        safe = np.where(norms == 0.0, 1.0, norms)
        self.norm_rows = self.counts.astype(np.float64) / safe[:, None]
        self._norms = norms
        return self.norm_rows

    def scores(self, encoded: np.ndarray) -> np.ndarray:
        """Per-class normalized dot products for a quantized query."""
        if self._norms is None:
            self.normalize()
        assert self._norms is not None
        dots = self.counts @ encoded.astype(np.int64)
        safe = np.where(self._norms == 0.0, 1.0, self._norms)
        return dots.astype(np.float64) / safe

    def infer(self, encoded: np.ndarray) -> int:
        """Most similar class; ties resolve to the lowest index."""
        return int(np.argmax(self.scores(encoded)))

    def digest(self) -> str:
        """FNV-1a 64-bit over the counts, row-major, int64 fed LSB-first."""
        h = _FNV_OFFSET
        for b in self.counts.astype("<i8").tobytes():
            h = ((h ^ b) * _FNV_PRIME) & _MASK
        return f"{h:016x}"
