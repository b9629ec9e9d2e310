"""Command line front door.

Subcommands:
    compile      write <name>.c, hdc_runtime.h and a Makefile
    run          train and score in process (the reference evaluator)
    check        parse and validate a description
    ir-dump      print the lowered encoding graph
    conformance  compile, build and run the binary, then diff it
                 against the in-process evaluator

Exit codes follow the generated binaries: 0 success, 1 usage or source
or conformance failure, 2 unreadable or malformed data.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

from .backend.emit import emit
from .core.pipeline import RunReport, run_description
from .errors import (
    ConfigError,
    EncodeDataError,
    EncodingTypeError,
    FormatError,
    IoError,
    RangeError,
    SourceError,
    TemplateError,
    ValidationError,
)
from .frontend.model import ExecType, ProgramDescription
from .frontend.validate import load_description
from .ir.fuse import fuse
from .ir.lower import lower


class _Parser(argparse.ArgumentParser):
    """argparse with the binary's usage exit code (1, not 2)."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        raise SystemExit(self.exit_code(message))

    def exit_code(self, message: str) -> int:
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        return 1


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return value


def _threads(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("thread count must be positive")
    return value


def _add_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("source", help="description file (.hdcc)")


def _add_overrides(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=_seed, default=None,
                   help="override the description's seed")
    p.add_argument("--threads", type=_threads, default=None,
                   help="override the thread count (>1 implies the threaded driver)")


def _add_data(p: argparse.ArgumentParser) -> None:
    p.add_argument("train_data")
    p.add_argument("train_labels")
    p.add_argument("test_data")
    p.add_argument("test_labels")
    p.add_argument("--range", dest="value_range", nargs=2, type=float,
                   metavar=("MIN", "MAX"), default=None,
                   help="level-mapping bounds for real-valued data")


def build_parser() -> _Parser:
    parser = _Parser(prog="hdc2c", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="emit the C program and Makefile")
    _add_source(p)
    _add_overrides(p)
    p.add_argument("-o", "--out-dir", default=".", help="output directory")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("run", help="train and score in process")
    _add_source(p)
    _add_data(p)
    _add_overrides(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("check", help="parse and validate only")
    _add_source(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("ir-dump", help="print the encoding graph")
    _add_source(p)
    p.add_argument("--no-fuse", action="store_true",
                   help="dump the graph before fusion")
    p.set_defaults(func=cmd_ir_dump)

    p = sub.add_parser("conformance",
                       help="build the binary and diff it against the evaluator")
    _add_source(p)
    _add_data(p)
    _add_overrides(p)
    p.add_argument("-o", "--out-dir", default=None,
                   help="keep the generated artifact here (default: temp dir)")
    p.set_defaults(func=cmd_conformance)

    return parser


def _load(args: argparse.Namespace) -> ProgramDescription:
    desc = load_description(args.source)
    changes: dict[str, object] = {}
    if getattr(args, "seed", None) is not None:
        changes["seed"] = args.seed
    if getattr(args, "threads", None) is not None:
        changes["num_threads"] = args.threads
        if args.threads > 1:
            changes["exec_type"] = ExecType.PARALLEL
    return dataclasses.replace(desc, **changes) if changes else desc


def _check_range(args: argparse.Namespace) -> tuple[float, float] | None:
    if args.value_range is None:
        return None
    lo, hi = args.value_range
    if not lo < hi:
        raise ConfigError(f"range minimum must be below maximum, got {lo} and {hi}")
    return (lo, hi)


def cmd_compile(args: argparse.Namespace) -> int:
    desc = _load(args)
    artifact = emit(desc)
    for path in artifact.write(args.out_dir):
        print(path)
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    desc = _load(args)
    report = run_description(
        desc,
        args.train_data,
        args.train_labels,
        args.test_data,
        args.test_labels,
        value_range=_check_range(args),
    )
    sys.stdout.write(report.format_lines(debug=desc.debug))
    return 0


def cmd_check(args: argparse.Namespace) -> int:
    desc = load_description(args.source)
    tables = len(desc.table_order)
    print(f"ok: {desc.name}: {tables} tables, {desc.dimensions} dimensions, "
          f"{desc.classes} classes")
    return 0


def cmd_ir_dump(args: argparse.Namespace) -> int:
    desc = load_description(args.source)
    ir = lower(desc)
    if not args.no_fuse:
        ir = fuse(ir)
    sys.stdout.write(ir.dump())
    return 0


def _parse_binary_output(text: str) -> dict[str, str]:
    fields = {}
    for line in text.splitlines():
        if "=" in line:
            key, value = line.split("=", 1)
            fields[key] = value
    return fields


def cmd_conformance(args: argparse.Namespace) -> int:
    desc = dataclasses.replace(_load(args), debug=True)
    value_range = _check_range(args)

    cc = os.environ.get("CC", "cc")
    if shutil.which(cc) is None or shutil.which("make") is None:
        print("conformance: skipped (no C toolchain)")
        return 0

    data_args = [args.train_data, args.train_labels, args.test_data, args.test_labels]
    data_args = [str(Path(p).resolve()) for p in data_args]
    if value_range is not None:
        data_args += [repr(value_range[0]), repr(value_range[1])]

    with tempfile.TemporaryDirectory(prefix="hdc2c-") as tmp:
        out_dir = Path(args.out_dir) if args.out_dir else Path(tmp)
        artifact = emit(desc)
        artifact.write(out_dir)

        build = subprocess.run(
            ["make", "-s"], cwd=out_dir, capture_output=True, text=True
        )
        if build.returncode != 0:
            sys.stderr.write(build.stderr)
            print("conformance: FAIL (build error)")
            return 1

        run = subprocess.run(
            [str(Path(out_dir, artifact.binary_file).resolve())] + data_args,
            capture_output=True,
            text=True,
        )
        if run.returncode != 0:
            sys.stderr.write(run.stderr)
            print(f"conformance: FAIL (binary exited {run.returncode})")
            return 1
        fields = _parse_binary_output(run.stdout)

    report = run_description(desc, *data_args[:4], value_range=value_range)
    return _diff_outputs(fields, report)


def _diff_outputs(fields: dict[str, str], report: RunReport) -> int:
    problems = []
    missing = [k for k in ("acc", "dbg:digest", "dbg:pred") if k not in fields]
    if missing:
        problems.append(f"binary output lacks {', '.join(missing)}")
    else:
        binary_preds = tuple(
            int(p) for p in fields["dbg:pred"].split(",") if p != ""
        )
        if fields["dbg:digest"] != report.memory_digest:
            problems.append(
                f"memory digest {fields['dbg:digest']} != {report.memory_digest}"
            )
        if binary_preds != report.predictions:
            diffs = sum(
                1 for a, b in zip(binary_preds, report.predictions) if a != b
            )
            problems.append(
                f"predictions differ ({diffs} of {len(report.predictions)} samples)"
            )
        if fields["acc"] != f"{report.accuracy:.6f}":
            problems.append(f"accuracy {fields['acc']} != {report.accuracy:.6f}")

    print(f"binary: digest={fields.get('dbg:digest', '?')} acc={fields.get('acc', '?')}")
    print(f"oracle: digest={report.memory_digest} acc={report.accuracy:.6f}")
    if problems:
        for p in problems:
            print(f"conformance: {p}")
        print("conformance: FAIL")
        return 1
    print("conformance: PASS")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        return int(args.func(args))
    except ValidationError as exc:
        for err in exc.errors:
            print(f"{args.source}:{err.line}:{err.column}: {err.message}",
                  file=sys.stderr)
        return 1
    except SourceError as exc:
        print(f"{args.source}:{exc.line}:{exc.column}: {exc.message}",
              file=sys.stderr)
        return 1
    except (EncodingTypeError, ConfigError, TemplateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (IoError, FormatError, RangeError, EncodeDataError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
