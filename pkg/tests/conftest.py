"""Shared fixtures: description builders and synthetic data writers."""

from __future__ import annotations

import shutil
from pathlib import Path

import numpy as np
import pytest

from hdc2c.frontend.validate import load_description


BASE_TEXT = """\
.NAME {name};
.WEIGHT_EMBED (VALUE LEVEL {weight_items});
.EMBEDDING (ID RANDOM {id_items});
.INPUT_DIM {input_dim};
.ENCODING {encoding};
.CLASSES {classes};
.TYPE {exec_type};
.DIMENSIONS {dimensions};
.TRAIN_SIZE {train_size};
.TEST_SIZE {test_size};
.VECTOR_SIZE {vector_size};
.DEBUG {debug};
.SEED {seed};
"""


def description_text(**kw) -> str:
    values = dict(
        name="SMOKE",
        weight_items=8,
        id_items=16,
        input_dim=16,
        encoding="MULTIBUNDLE(BATCHBIND(ID, VALUE))",
        classes=3,
        exec_type="SEQUENTIAL",
        dimensions=64,
        train_size=12,
        test_size=6,
        vector_size=16,
        debug="TRUE",
        seed=42,
    )
    values.update(kw)
    return BASE_TEXT.format(**values)


@pytest.fixture
def make_description(tmp_path):
    """Write description text to a file and load it."""

    counter = [0]

    def build(text: str | None = None, **kw):
        counter[0] += 1
        path = tmp_path / f"desc{counter[0]}.hdcc"
        path.write_text(text if text is not None else description_text(**kw))
        return load_description(path)

    return build


def write_real_data(path: Path, rows: np.ndarray) -> Path:
    with open(path, "w") as f:
        for row in rows:
            f.write(",".join(f"{v:.6f}" for v in row) + "\n")
    return path


def write_int_data(path: Path, rows) -> Path:
    with open(path, "w") as f:
        for row in rows:
            f.write(",".join(str(int(v)) for v in row) + "\n")
    return path


def write_labels(path: Path, labels) -> Path:
    with open(path, "w") as f:
        for v in labels:
            f.write(f"{int(v)}\n")
    return path


@pytest.fixture
def make_real_dataset(tmp_path):
    """Train and test files with class-conditional real rows in (-1, 1).

    Returns the four paths in the order the binaries take them.
    """

    def build(desc, seed: int = 0, noise: float = 0.1):
        rng = np.random.default_rng(seed)
        protos = rng.uniform(-0.8, 0.8, size=(desc.classes, desc.input_dim))

        def split(n: int, tag: str) -> tuple[Path, Path]:
            labels = rng.integers(0, desc.classes, n)
            rows = protos[labels] + rng.normal(0, noise, (n, desc.input_dim))
            rows = np.clip(rows, -0.999, 0.999)
            return (
                write_real_data(tmp_path / f"{tag}_x.csv", rows),
                write_labels(tmp_path / f"{tag}_y.csv", labels),
            )

        xtr, ytr = split(desc.train_size, "train")
        xte, yte = split(desc.test_size, "test")
        return xtr, ytr, xte, yte

    return build


@pytest.fixture
def make_int_dataset(tmp_path):
    """Symbol-sequence files where each class favours its own symbol band.

    Rows are padded with -1 sentinels; 10% of symbols leak across bands
    so the task is learnable but not trivial.
    """

    def build(desc, seed: int = 0, min_active: int = 1):
        rng = np.random.default_rng(seed)
        items = desc.weight_embed.items
        band = max(1, items // desc.classes)

        def split(n: int, tag: str) -> tuple[Path, Path]:
            labels = rng.integers(0, desc.classes, n)
            rows = []
            for c in labels:
                length = int(rng.integers(max(min_active, 1), desc.input_dim + 1))
                lo = (int(c) * band) % items
                symbols = lo + rng.integers(0, band, length)
                stray = rng.random(length) < 0.1
                symbols[stray] = rng.integers(0, items, int(stray.sum()))
                rows.append(list(symbols) + [-1] * (desc.input_dim - length))
            return (
                write_int_data(tmp_path / f"{tag}_x.csv", rows),
                write_labels(tmp_path / f"{tag}_y.csv", labels),
            )

        xtr, ytr = split(desc.train_size, "train")
        xte, yte = split(desc.test_size, "test")
        return xtr, ytr, xte, yte

    return build


def have_toolchain() -> bool:
    return shutil.which("cc") is not None and shutil.which("make") is not None


needs_toolchain = pytest.mark.skipif(
    not have_toolchain(), reason="no C toolchain (cc + make) on PATH"
)


# Acceptance tests record one line per criterion; printing them from a
# terminal-summary hook keeps them visible under default output capture.
ACCEPTANCE_LOG: list[str] = []


def record_acceptance(status: str, name: str, detail: str) -> None:
    ACCEPTANCE_LOG.append(f"{status:4s} {name}: {detail}")


def pytest_terminal_summary(terminalreporter, exitstatus, config) -> None:
    if ACCEPTANCE_LOG:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LOG:
            terminalreporter.line(line)
