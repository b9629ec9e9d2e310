"""Reference train/test pipeline over the streaming readers.

This is the in-process twin of the emitted C program: same table
construction, same encode-quantize-accumulate training, same
normalize-then-score inference, same tie rule. The parallel path mirrors
the generated thread pool (serial reads, round-robin dispatch, per-worker
partial memories, one merge point) so results never depend on the thread
count.
"""

from __future__ import annotations

import queue
import threading
import time
from dataclasses import dataclass

import numpy as np

from hdc2c import dataio
from hdc2c.core import ops
from hdc2c.core.embeddings import build_tables
from hdc2c.core.encoder import EncodeContext, encode_sample
from hdc2c.core.memory import AssociativeMemory
from hdc2c.frontend.model import ExecType, ProgramDescription
from hdc2c.ir.fuse import fuse
from hdc2c.ir.lower import lower
from hdc2c.ir.nodes import EncodingIR


@dataclass(frozen=True)
class RunReport:
    accuracy: float
    train_seconds: float
    test_seconds: float
    gen_seconds: float
    predictions: tuple[int, ...]
    memory_digest: str

    def format_lines(self, debug: bool) -> str:
        """The exact stdout contract shared with emitted binaries."""
        lines = [
            f"acc={self.accuracy:.6f}",
            f"train_s={self.train_seconds:.6f}",
            f"test_s={self.test_seconds:.6f}",
        ]
        if debug:
            lines.append(f"dbg:gen_s={self.gen_seconds:.6f}")
            lines.append(f"dbg:digest={self.memory_digest}")
            lines.append("dbg:pred=" + ",".join(str(p) for p in self.predictions))
        return "\n".join(lines) + "\n"


def run_description(
    desc: ProgramDescription,
    train_data: str,
    train_labels: str,
    test_data: str,
    test_labels: str,
    value_range: tuple[float, float] | None = None,
    threads: int | None = None,
    ir: EncodingIR | None = None,
) -> RunReport:
    """Train on the given files and score the test set.

    Args:
        desc: Validated description; its seed fixes every table.
        value_range: Level-mapping bounds for real data; defaults to
            (-1, 1) like the emitted binaries.
        threads: Overrides the description's thread count.
        ir: Pre-lowered encoding; lowered and fused here when omitted.

    Returns:
        A RunReport with per-sample predictions and the memory digest.
    """
    if ir is None:
        ir = fuse(lower(desc))
    worker_count = threads if threads is not None else desc.num_threads
    parallel = desc.exec_type is ExecType.PARALLEL and worker_count > 1

    t0 = time.monotonic()
    tables = build_tables(desc)
    ctx = EncodeContext.for_description(desc, tables, value_range)
    gen_seconds = time.monotonic() - t0

    t0 = time.monotonic()
    memory = AssociativeMemory(desc.classes, desc.dimensions)
    if parallel:
        _train_parallel(memory, ir, ctx, desc, train_data, train_labels, worker_count)
    else:
        with dataio.open_samples(train_data, desc) as samples, dataio.LabelStream(
            train_labels, desc.classes
        ) as labels:
            for _ in range(desc.train_size):
                values = samples.next_sample()
                label = labels.next_label()
                enc = ops.hard_quantize(encode_sample(ir, ctx, values))
                memory.update(enc, label)
    memory.normalize()
    train_seconds = time.monotonic() - t0

    t0 = time.monotonic()
    predictions = np.zeros(desc.test_size, dtype=np.int64)
    if parallel:
        correct = _test_parallel(
            memory, ir, ctx, desc, test_data, test_labels, worker_count, predictions
        )
    else:
        correct = 0
        with dataio.open_samples(test_data, desc) as samples, dataio.LabelStream(
            test_labels, desc.classes
        ) as labels:
            for i in range(desc.test_size):
                values = samples.next_sample()
                label = labels.next_label()
                enc = ops.hard_quantize(encode_sample(ir, ctx, values))
                pred = memory.infer(enc)
                predictions[i] = pred
                correct += int(pred == label)
    test_seconds = time.monotonic() - t0

    return RunReport(
        accuracy=correct / desc.test_size,
        train_seconds=train_seconds,
        test_seconds=test_seconds,
        gen_seconds=gen_seconds,
        predictions=tuple(int(p) for p in predictions),
        memory_digest=memory.digest(),
    )


# --- parallel path ------------------------------------------------------
#
# One mailbox per worker with room for a single sample keeps at most
# `workers` samples resident, and round-robin dispatch in file order makes
# the assignment deterministic. Training merges partial memories at the
# single barrier between phases; inference writes disjoint prediction
# slots and reduces correct-counts after the join.


def _spawn(target, count: int) -> tuple[list[queue.Queue], list[threading.Thread], list]:
    boxes: list[queue.Queue] = [queue.Queue(maxsize=1) for _ in range(count)]
    results: list = [None] * count
    threads = [
        threading.Thread(target=target, args=(w, boxes[w], results), daemon=True)
        for w in range(count)
    ]
    for t in threads:
        t.start()
    return boxes, threads, results


def _train_parallel(
    memory: AssociativeMemory,
    ir: EncodingIR,
    ctx: EncodeContext,
    desc: ProgramDescription,
    data_path: str,
    labels_path: str,
    workers: int,
) -> None:
    failure: list[BaseException] = []

    def work(w: int, box: queue.Queue, results: list) -> None:
        # On error, keep draining to the sentinel so the producer's
        # bounded put can never block on a dead worker.
        partial = AssociativeMemory(desc.classes, desc.dimensions)
        dead = False
        while True:
            item = box.get()
            if item is None:
                break
            if dead:
                continue
            values, label = item
            try:
                partial.update(ops.hard_quantize(encode_sample(ir, ctx, values)), label)
            except BaseException as exc:
                failure.append(exc)
                dead = True
        results[w] = partial

    boxes, threads, results = _spawn(work, workers)
    try:
        with dataio.open_samples(data_path, desc) as samples, dataio.LabelStream(
            labels_path, desc.classes
        ) as labels:
            for i in range(desc.train_size):
                if failure:
                    break
                values = samples.next_sample()
                label = labels.next_label()
                boxes[i % workers].put((values, label))
    finally:
        for box in boxes:
            box.put(None)
        for t in threads:
            t.join()
    if failure:
        raise failure[0]
    for partial in results:
        memory.merge(partial)


def _test_parallel(
    memory: AssociativeMemory,
    ir: EncodingIR,
    ctx: EncodeContext,
    desc: ProgramDescription,
    data_path: str,
    labels_path: str,
    workers: int,
    predictions: np.ndarray,
) -> int:
    failure: list[BaseException] = []

    def work(w: int, box: queue.Queue, results: list) -> None:
        correct = 0
        dead = False
        while True:
            item = box.get()
            if item is None:
                break
            if dead:
                continue
            idx, values, label = item
            try:
                pred = memory.infer(ops.hard_quantize(encode_sample(ir, ctx, values)))
                predictions[idx] = pred
                correct += int(pred == label)
            except BaseException as exc:
                failure.append(exc)
                dead = True
        results[w] = correct

    boxes, threads, results = _spawn(work, workers)
    try:
        with dataio.open_samples(data_path, desc) as samples, dataio.LabelStream(
            labels_path, desc.classes
        ) as labels:
            for i in range(desc.test_size):
                if failure:
                    break
                values = samples.next_sample()
                label = labels.next_label()
                boxes[i % workers].put((i, values, label))
    finally:
        for box in boxes:
            box.put(None)
        for t in threads:
            t.join()
    if failure:
        raise failure[0]
    return sum(results)
