"""Emit a self-contained C program for one description.

The artifact is three files: ``<name>.c``, the shared runtime header and
a Makefile. The .c depends only on libc (plus pthreads when threaded),
rebuilds its embedding tables at startup from the baked seed, and prints
the same accuracy line the in-process evaluator computes. Emission is a
pure function of the description, so the bytes are reproducible.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from ..frontend.model import EmbedKind, ExecType, ProgramDescription
from ..ir.fuse import fuse
from ..ir.lower import lower
from ..ir.nodes import EncodingIR, IRNode, Op, ShapeType
from .plan import CodegenPlan, plan_for
from .templates import (
    MAIN_PARALLEL,
    MAIN_SEQUENTIAL,
    MAKEFILE,
    RUNTIME_HEADER,
    load_fragment,
)

RUNTIME_FILE = "hdc_runtime.h"


def artifact_name(raw: str) -> str:
    """Lowercased file-system-safe program name."""
    name = re.sub(r"[^a-z0-9_]+", "_", raw.lower()).strip("_")
    return name or "model"


@dataclass(frozen=True)
class EmittedArtifact:
    name: str
    program: str
    runtime: str
    makefile: str

    @property
    def program_file(self) -> str:
        return f"{self.name}.c"

    @property
    def binary_file(self) -> str:
        return self.name

    def files(self) -> dict[str, str]:
        return {
            self.program_file: self.program,
            RUNTIME_FILE: self.runtime,
            "Makefile": self.makefile,
        }

    def write(self, out_dir: str | Path) -> list[Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        written = []
        for fname, text in self.files().items():
            path = out / fname
            path.write_text(text, encoding="utf-8", newline="\n")
            written.append(path)
        return written


def emit(desc: ProgramDescription, ir: EncodingIR | None = None) -> EmittedArtifact:
    if ir is None:
        ir = fuse(lower(desc))
    layout = plan_for(desc)
    gen = _Codegen(desc, ir, layout)
    return gen.build()


class _Codegen:
    def __init__(self, desc: ProgramDescription, ir: EncodingIR, layout: CodegenPlan):
        self.desc = desc
        self.ir = ir
        self.layout = layout
        self.slot: dict[int, int] = {}
        self.window_tmp: dict[int, tuple[int, int]] = {}
        self._next_slot = 0
        self._schedule()

    # -- buffer scheduling ------------------------------------------------

    def _take(self) -> int:
        idx = self._next_slot
        self._next_slot += 1
        return idx

    def _schedule(self) -> None:
        """One padded buffer per intermediate; the output writes straight
        into the caller's vector. Stream scratch buffers are reused every
        loop iteration, so the count depends on the expression, not on
        the input width."""
        for node in self.ir.nodes:
            if node.op is Op.LoadEmbedding:
                continue
            if node.shape is ShapeType.FeatureStream:
                self.slot[node.id] = self._take()
            elif node.id != self.ir.output:
                self.slot[node.id] = self._take()
            if node.op in (Op.Ngram, Op.FusedNgram) and (node.param or 0) >= 2:
                self.window_tmp[node.id] = (self._take(), self._take())
        self.buf_count = max(1, self._next_slot)

    # -- per-feature element expressions ----------------------------------

    def _element(self, nid: int, done: dict[int, str]) -> tuple[list[str], str]:
        """Code lines plus a row-pointer expression for one stream element
        at loop position p. Pure table refs are bare pointer arithmetic;
        anything else lands in a scratch buffer."""
        if nid in done:
            return [], done[nid]
        node = self.ir.node(nid)
        if node.op is Op.LoadEmbedding:
            assert node.table is not None
            tab = f"hd_tab_{node.table}"
            if node.table == self.desc.weight_embed.name:
                if self.desc.integer_features:
                    expr = f"{tab} + x[p] * HD_PAD_DIMS"
                else:
                    expr = f"{tab} + hd_map_range(x[p], lo, hi, HD_WEIGHT_ITEMS) * HD_PAD_DIMS"
            else:
                expr = f"{tab} + p * HD_PAD_DIMS"
            done[nid] = expr
            return [], expr
        dst = f"bufs[{self.slot[nid]}]"
        if node.op is Op.BatchBind:
            la, ea = self._element(node.args[0], done)
            lb, eb = self._element(node.args[1], done)
            lines = la + lb + [f"hd_vec_mul({dst}, {ea}, {eb});"]
        elif node.op is Op.Permute:
            ls, es = self._element(node.args[0], done)
            lines = ls + [f"hd_rotate({dst}, {es}, {node.param});"]
        else:
            raise AssertionError(f"not a stream op: {node.op}")
        done[nid] = dst
        return lines, dst

    # -- single-vector statements -----------------------------------------

    def _hv(self, nid: int) -> str:
        return f"bufs[{self.slot[nid]}]"

    def _dst(self, node: IRNode) -> str:
        return "out" if node.id == self.ir.output else f"bufs[{self.slot[node.id]}]"

    def _statement(self, node: IRNode) -> list[str]:
        dst = self._dst(node)
        if node.op is Op.MultiBundle:
            return self._loop_bundle(dst, node.args[0])
        if node.op is Op.FusedBindBundle:
            return self._loop_mac(dst, node.args[0], node.args[1])
        if node.op in (Op.Ngram, Op.FusedNgram):
            return self._loop_ngram(dst, node)
        if node.op is Op.BindEW:
            return [f"hd_vec_mul({dst}, {self._hv(node.args[0])}, {self._hv(node.args[1])});"]
        if node.op is Op.BundleEW:
            return [f"hd_vec_add2({dst}, {self._hv(node.args[0])}, {self._hv(node.args[1])});"]
        if node.op is Op.Permute:
            return [f"hd_rotate({dst}, {self._hv(node.args[0])}, {node.param});"]
        raise AssertionError(f"not a vector op: {node.op}")

    def _loop_bundle(self, dst: str, stream: int) -> list[str]:
        body, expr = self._element(stream, {})
        lines = [f"hd_vec_zero({dst});", "{", "    long t;",
                 "    for (t = 0; t < n_act; ++t) {", "        long p = act[t];"]
        lines += [f"        {b}" for b in body]
        lines += [f"        hd_vec_add({dst}, {expr});", "    }", "}"]
        return lines

    def _loop_mac(self, dst: str, left: int, right: int) -> list[str]:
        done: dict[int, str] = {}
        body_a, ea = self._element(left, done)
        body_b, eb = self._element(right, done)
        lines = [f"hd_vec_zero({dst});", "{", "    long t;",
                 "    for (t = 0; t < n_act; ++t) {", "        long p = act[t];"]
        lines += [f"        {b}" for b in body_a + body_b]
        lines += [f"        hd_vec_mac({dst}, {ea}, {eb});", "    }", "}"]
        return lines

    def _loop_ngram(self, dst: str, node: IRNode) -> list[str]:
        n = node.param or 1
        body, expr = self._element(node.args[0], {})
        # window entries are row pointers into the table, so the element
        # must not go through mutable scratch
        assert not body, "ngram source must be a plain table stream"
        if n == 1:
            return self._loop_bundle(dst, node.args[0])
        tmp_a, tmp_b = self.window_tmp[node.id]
        a, b = f"bufs[{tmp_a}]", f"bufs[{tmp_b}]"
        return [
            f"hd_vec_zero({dst});",
            "{",
            f"    const int32_t *win[{n}];",
            "    long filled = 0;",
            "    long t, j;",
            "    for (t = 0; t < n_act; ++t) {",
            "        long p = act[t];",
            f"        if (filled == {n}) {{",
            f"            memmove(win, win + 1, ({n} - 1) * sizeof *win);",
            f"            win[{n} - 1] = {expr};",
            "        } else {",
            f"            win[filled] = {expr};",
            "            ++filled;",
            "        }",
            f"        if (filled == {n}) {{",
            f"            hd_copy({a}, win[0]);",
            f"            for (j = 1; j < {n}; ++j) {{",
            f"                hd_rotate({b}, {a}, 1);",
            f"                hd_vec_mul({a}, {b}, win[j]);",
            "            }",
            f"            hd_vec_add({dst}, {a});",
            "        }",
            "    }",
            "}",
        ]

    # -- program sections -------------------------------------------------

    def _defines(self) -> str:
        d = self.desc
        lay = self.layout
        lines = [
            f"#define HD_DIMENSIONS {lay.dimensions}",
            f"#define HD_PAD_DIMS {lay.padded_dims}",
            f"#define HD_NUM_BATCH {lay.num_batches}",
            f"#define HD_LANES {lay.lanes}",
            f"#define HD_VECTOR_SIZE {lay.vector_size_bytes}",
            f"#define HD_INPUT_DIM {d.input_dim}",
            f"#define HD_CLASSES {d.classes}",
            f"#define HD_TRAIN_SIZE {d.train_size}",
            f"#define HD_TEST_SIZE {d.test_size}",
            f"#define HD_WEIGHT_ITEMS {d.weight_embed.items}",
            f"#define HD_MIN_ACT {self._min_active()}",
            f"#define HD_INT_FEATURES {1 if d.integer_features else 0}",
            f"#define HD_ENC_BUFS {self.buf_count}",
            f"#define HD_PARALLEL {1 if self._parallel else 0}",
        ]
        if self._parallel:
            lines.append(f"#define HD_THREADS {d.num_threads}")
        return "\n".join(lines)

    def _min_active(self) -> int:
        need = 1
        for node in self.ir.nodes:
            if node.op in (Op.Ngram, Op.FusedNgram):
                need = max(need, node.param or 1)
        return need

    def _tables(self) -> tuple[str, str]:
        used = set(self.ir.tables_used())
        specs = [s for s in self.desc.tables() if s.name in used]
        decls = "\n".join(f"static int32_t *hd_tab_{s.name};" for s in specs)
        lines = ["static void hd_setup_tables(uint64_t seed)", "{", "    uint64_t st;"]
        for s in specs:
            fill = "hd_fill_level" if s.kind is EmbedKind.LEVEL else "hd_fill_random"
            lines += [
                f"    hd_tab_{s.name} = hd_alloc((size_t){s.items} * HD_PAD_DIMS * sizeof(int32_t));",
                f"    st = hd_stream_state(seed, {self.desc.stream_id(s.name)});",
                f"    {fill}(hd_tab_{s.name}, {s.items}, &st);",
            ]
        lines.append("}")
        return decls, "\n".join(lines)

    def _encode_fn(self) -> str:
        lines = [
            "static void hd_encode(int32_t **bufs, const hd_feat_t *x, const long *act,",
            "                      long n_act, double lo, double hi, int32_t *out)",
            "{",
            "    (void)bufs;",
            "    (void)x;",
            "    (void)act;",
            "    (void)n_act;",
            "    (void)lo;",
            "    (void)hi;",
        ]
        for node in self.ir.nodes:
            if node.shape is ShapeType.SingleHV:
                lines += [f"    {s}" for s in self._statement(node)]
        lines.append("}")
        return "\n".join(lines)

    def _debug_output(self, preds_var: str) -> str:
        if not self.desc.debug:
            return "(void)gen_s;"
        lines = [
            'printf("dbg:gen_s=%.6f\\n", gen_s);',
            'printf("dbg:digest=%016llx\\n", (unsigned long long)hd_digest(hd_counts));',
            'printf("dbg:pred=");',
            "for (s = 0; s < HD_TEST_SIZE; ++s) {",
            "    if (s > 0)",
            '        printf(",");',
            f'    printf("%ld", {preds_var}[s]);',
            "}",
            'printf("\\n");',
        ]
        return "\n    ".join(lines)

    def _head(self) -> str:
        d = self.desc
        return "\n".join([
            f"/* {artifact_name(d.name)}.c",
            " * Self-contained hypervector classifier generated by hdc2c.",
            f" * Description: {d.name}, {d.dimensions} dimensions, seed {d.seed},",
            f" * {d.vector_size_bytes}-byte vector registers.",
            " * Tables are rebuilt at startup from the seed; the same",
            " * description always reproduces this file byte for byte.",
            " */",
        ])

    # -- assembly ---------------------------------------------------------

    @property
    def _parallel(self) -> bool:
        return self.desc.exec_type is ExecType.PARALLEL

    def build(self) -> EmittedArtifact:
        name = artifact_name(self.desc.name)
        decls, setup = self._tables()
        if self._parallel:
            main_tpl = load_fragment(MAIN_PARALLEL)
            main = main_tpl.instantiate({
                "THREADS": str(self.desc.num_threads),
                "SEED": str(self.desc.seed),
                "DEBUG_OUTPUT": self._debug_output("hd_preds"),
            })
        else:
            main_tpl = load_fragment(MAIN_SEQUENTIAL)
            main = main_tpl.instantiate({
                "SEED": str(self.desc.seed),
                "DEBUG_OUTPUT": self._debug_output("preds"),
            })

        parts = [self._head()]
        if self._parallel:
            # must precede every libc include for clock_gettime
            parts.append("#define _POSIX_C_SOURCE 199309L")
        parts += [
            self._defines(),
            '#include "hdc_runtime.h"',
            decls,
            setup,
            self._encode_fn(),
            main.rstrip("\n"),
        ]
        program = "\n\n".join(parts) + "\n"

        runtime = load_fragment(RUNTIME_HEADER).instantiate({})
        makefile = load_fragment(MAKEFILE).instantiate({
            "NAME": name,
            "THREAD_FLAGS": " -pthread" if self._parallel else "",
        })
        return EmittedArtifact(
            name=name, program=program, runtime=runtime, makefile=makefile
        )
