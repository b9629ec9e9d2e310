"""Streaming readers for sample and label files.

Samples are one comma-separated row per line, labels one integer per
line. Readers hold a single line at a time so the resident set does not
grow with file size. Real-valued rows reject NaN/Inf and blank lines are
errors everywhere; -1 in integer rows is the skip sentinel for padded
variable-length data.
"""

from __future__ import annotations

from collections.abc import Iterator
from pathlib import Path

import numpy as np

from hdc2c.errors import FormatError, IoError, RangeError
from hdc2c.frontend.model import ProgramDescription


def _open(path: str | Path):
    try:
        return open(path, "r", encoding="utf-8", newline=None)
    except OSError as exc:
        raise IoError(str(path), exc.strerror or "cannot open") from exc


class SampleStream:
    """Iterator over sample rows of fixed width.

    Yields float64 arrays in real mode and int64 arrays in integer mode.
    Stops after ``limit`` rows when given; raises FormatError if the file
    ends first.
    """

    def __init__(self, path: str | Path, input_dim: int, integer_features: bool) -> None:
        self.path = str(path)
        self.input_dim = input_dim
        self.integer = integer_features
        self._fh = _open(path)
        self._line_no = 0

    def __enter__(self) -> "SampleStream":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    def close(self) -> None:
        self._fh.close()

    def _fail(self, message: str) -> FormatError:
        return FormatError(self.path, self._line_no, message)

    def next_sample(self) -> np.ndarray:
        row = self._scan_next()
        if row is None:
            raise self._fail("unexpected end of file")
        return row

    def _scan_next(self) -> np.ndarray | None:
        line = self._fh.readline()
        self._line_no += 1
        if line == "":
            return None
        text = line.rstrip("\n").rstrip("\r")
        if text.strip() == "":
            raise self._fail("blank line")
        fields = text.split(",")
        if len(fields) != self.input_dim:
            raise self._fail(f"expected {self.input_dim} fields, got {len(fields)}")
        if self.integer:
            out = np.empty(self.input_dim, dtype=np.int64)
            for i, field in enumerate(fields):
                try:
                    out[i] = int(field)
                except ValueError:
                    raise self._fail(f"field {i + 1}: not an integer: {field!r}") from None
                if out[i] < -1:
                    raise self._fail(f"field {i + 1}: index {out[i]} below the -1 sentinel")
            return out
        out = np.empty(self.input_dim, dtype=np.float64)
        for i, field in enumerate(fields):
            try:
                out[i] = float(field)
            except ValueError:
                raise self._fail(f"field {i + 1}: not a number: {field!r}") from None
        if not np.all(np.isfinite(out)):
            raise self._fail("non-finite value")
        return out

    def take(self, count: int) -> Iterator[np.ndarray]:
        for _ in range(count):
            yield self.next_sample()


class LabelStream:
    """Iterator over integer labels in [0, classes)."""

    def __init__(self, path: str | Path, classes: int) -> None:
        self.path = str(path)
        self.classes = classes
        self._fh = _open(path)
        self._line_no = 0

    def __enter__(self) -> "LabelStream":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    def close(self) -> None:
        self._fh.close()

    def next_label(self) -> int:
        line = self._fh.readline()
        self._line_no += 1
        if line == "":
            raise FormatError(self.path, self._line_no, "unexpected end of file")
        text = line.strip()
        if text == "":
            raise FormatError(self.path, self._line_no, "blank line")
        try:
            label = int(text)
        except ValueError:
            raise FormatError(
                self.path, self._line_no, f"not an integer label: {text!r}"
            ) from None
        if not 0 <= label < self.classes:
            raise FormatError(
                self.path, self._line_no, f"label {label} outside [0, {self.classes})"
            )
        return label

    def take(self, count: int) -> Iterator[int]:
        for _ in range(count):
            yield self.next_label()


def open_samples(path: str | Path, desc: ProgramDescription) -> SampleStream:
    """Open a sample file in the mode the description's weight table implies."""
    return SampleStream(path, desc.input_dim, desc.integer_features)


def prescan_range(path: str | Path, input_dim: int) -> tuple[float, float]:
    """One streaming pass over a real-valued file for its global min/max.

    Raises:
        RangeError: When the file holds no values or every value is equal
            (an unusable level range).
    """
    lo = np.inf
    hi = -np.inf
    with SampleStream(path, input_dim, integer_features=False) as stream:
        while True:
            row = stream._scan_next()
            if row is None:
                break
            lo = min(lo, float(row.min()))
            hi = max(hi, float(row.max()))
    if not np.isfinite(lo) or not np.isfinite(hi):
        raise RangeError(f"{path}: no values to scan")
    if lo == hi:
        raise RangeError(f"{path}: all values equal {lo}, range unusable")
    return lo, hi
