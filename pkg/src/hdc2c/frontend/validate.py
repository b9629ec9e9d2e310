"""Semantic validation: directives to a ProgramDescription.

Validation is not fail-fast. Every violation becomes one SemanticError and
all of them are raised together in a ValidationError, so a description
with three mistakes produces three diagnostics in one run.
"""

from __future__ import annotations

from pathlib import Path

from hdc2c.errors import IoError, SemanticError, ValidationError
from hdc2c.frontend import model
from hdc2c.frontend.lexer import tokenize
from hdc2c.frontend.model import (
    EmbedKind,
    EmbeddingSpec,
    ExecType,
    ProgramDescription,
)
from hdc2c.frontend.parser import Directive, parse
from hdc2c.frontend.tokens import Token

REQUIRED = (
    "NAME",
    "WEIGHT_EMBED",
    "INPUT_DIM",
    "ENCODING",
    "CLASSES",
    "DIMENSIONS",
    "TRAIN_SIZE",
    "TEST_SIZE",
)

_MAX_SEED = 2**64 - 1


def validate(directives: list[Directive]) -> ProgramDescription:
    """Check directive-level semantics and build the program model.

    Args:
        directives: Parser output in source order.

    Returns:
        A ProgramDescription with defaults applied for absent optional
        directives.

    Raises:
        ValidationError: Carrying one SemanticError per violation, all
            collected before aborting.
    """
    return _Validator(directives).run()


def load_description(path: str | Path) -> ProgramDescription:
    """Read, tokenize, parse and validate a description file.

    Raises:
        IoError: When the file cannot be read.
        LexError, ParseError, ValidationError: As produced by each stage.
    """
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(str(p), exc.strerror or "cannot read") from exc
    return validate(parse(tokenize(text)))


class _Validator:
    def __init__(self, directives: list[Directive]) -> None:
        self.directives = directives
        self.errors: list[SemanticError] = []

    def _err(self, message: str, tok: Token) -> None:
        self.errors.append(SemanticError(message, tok.line, tok.column))

    def run(self) -> ProgramDescription:
        seen: dict[str, Directive] = {}
        embeds: list[tuple[Directive, EmbeddingSpec | None]] = []
        weight: tuple[Directive, EmbeddingSpec | None] | None = None
        order: list[str] = []

        for d in self.directives:
            if d.name == "EMBEDDING":
                spec = self._embed_spec(d, require_two_levels=False)
                embeds.append((d, spec))
                if spec is not None:
                    order.append(spec.name)
                continue
            if d.name in seen:
                self._err(f"duplicate directive .{d.name}", d.name_token)
                continue
            seen[d.name] = d
            if d.name == "WEIGHT_EMBED":
                spec = self._embed_spec(d, require_two_levels=True)
                weight = (d, spec)
                if spec is not None:
                    order.append(spec.name)

        for name in REQUIRED:
            if name not in seen and not (name == "WEIGHT_EMBED" and weight is not None):
                missing = SemanticError(f"required directive absent: {name}", 1, 1)
                self.errors.append(missing)

        names_seen: set[str] = set()
        specs: list[EmbeddingSpec] = []
        weight_spec = weight[1] if weight else None
        if weight_spec is not None:
            names_seen.add(weight_spec.name)
        for d, spec in embeds:
            if spec is None:
                continue
            if spec.name in names_seen:
                self._err(f"duplicate table name {spec.name}", d.arg_tokens[0])
                continue
            names_seen.add(spec.name)
            specs.append(spec)

        input_dim = self._pos_int(seen.get("INPUT_DIM"), "INPUT_DIM")
        classes = self._pos_int(seen.get("CLASSES"), "CLASSES")
        if classes is not None and classes < 2 and "CLASSES" in seen:
            self._err("CLASSES must be at least 2", seen["CLASSES"].arg_tokens[0])
        dimensions = self._pos_int(seen.get("DIMENSIONS"), "DIMENSIONS")
        train_size = self._pos_int(seen.get("TRAIN_SIZE"), "TRAIN_SIZE")
        test_size = self._pos_int(seen.get("TEST_SIZE"), "TEST_SIZE")

        threads = model.DEFAULT_THREADS
        if "NUM_THREADS" in seen:
            threads = self._pos_int(seen["NUM_THREADS"], "NUM_THREADS") or threads

        vector_size = model.DEFAULT_VECTOR_SIZE
        if "VECTOR_SIZE" in seen:
            d = seen["VECTOR_SIZE"]
            value = d.args[0]
            assert isinstance(value, int)
            if value <= 0 or value % 4 != 0:
                self._err("VECTOR_SIZE must be a positive multiple of 4", d.arg_tokens[0])
            else:
                vector_size = value

        exec_type = ExecType.SEQUENTIAL
        if "TYPE" in seen:
            d = seen["TYPE"]
            word = str(d.args[0]).upper()
            if word not in ("SEQUENTIAL", "PARALLEL"):
                self._err(f"TYPE must be SEQUENTIAL or PARALLEL, got {d.args[0]}", d.arg_tokens[0])
            else:
                exec_type = ExecType[word]

        seed = model.DEFAULT_SEED
        if "SEED" in seen:
            d = seen["SEED"]
            value = d.args[0]
            assert isinstance(value, int)
            if value > _MAX_SEED:
                self._err("SEED does not fit in 64 bits", d.arg_tokens[0])
            else:
                seed = value

        debug = bool(seen["DEBUG"].args[0]) if "DEBUG" in seen else False
        name = str(seen["NAME"].args[0]) if "NAME" in seen else ""

        encoding = None
        if "ENCODING" in seen:
            encoding = seen["ENCODING"].args[0]
            assert isinstance(encoding, model.EncodingExpr)
            self._check_encoding(seen["ENCODING"], encoding, names_seen, weight_spec)

        if self.errors:
            raise ValidationError(self.errors)

        assert weight_spec is not None and encoding is not None
        assert input_dim and classes and dimensions and train_size and test_size
        return ProgramDescription(
            name=name,
            weight_embed=weight_spec,
            embeddings=tuple(specs),
            input_dim=input_dim,
            encoding=encoding,
            classes=classes,
            dimensions=dimensions,
            train_size=train_size,
            test_size=test_size,
            table_order=tuple(order),
            exec_type=exec_type,
            num_threads=threads,
            vector_size_bytes=vector_size,
            debug=debug,
            seed=seed,
        )

    def _embed_spec(self, d: Directive, require_two_levels: bool) -> EmbeddingSpec | None:
        name, kind_word, items = d.args
        assert isinstance(name, str) and isinstance(kind_word, str) and isinstance(items, int)
        ok = True
        if kind_word.upper() not in ("RANDOM", "LEVEL"):
            self._err(f"embedding kind must be RANDOM or LEVEL, got {kind_word}", d.arg_tokens[1])
            ok = False
        kind = EmbedKind.LEVEL if kind_word.upper() == "LEVEL" else EmbedKind.RANDOM
        floor = 2 if kind is EmbedKind.LEVEL and require_two_levels else 1
        if kind is EmbedKind.LEVEL and items < 2:
            self._err("a LEVEL table needs at least 2 items", d.arg_tokens[2])
            ok = False
        elif items < floor:
            self._err("item count must be positive", d.arg_tokens[2])
            ok = False
        return EmbeddingSpec(name, kind, items) if ok else None

    def _pos_int(self, d: Directive | None, label: str) -> int | None:
        if d is None:
            return None
        value = d.args[0]
        assert isinstance(value, int)
        if value <= 0:
            self._err(f"{label} must be positive", d.arg_tokens[0])
            return None
        return value

    def _check_encoding(
        self,
        d: Directive,
        expr: model.EncodingExpr,
        declared: set[str],
        weight: EmbeddingSpec | None,
    ) -> None:
        at = d.arg_tokens[0]
        for name in model.referenced_tables(expr):
            if name not in declared:
                self._err(f"encoding references undeclared table {name}", at)

        def walk(e: model.EncodingExpr) -> None:
            if isinstance(e, model.Ngram) and e.n < 1:
                self._err("NGRAM window must be at least 1", at)
            elif isinstance(e, (model.Bind, model.Bundle, model.BatchBind)):
                walk(e.left)
                walk(e.right)
            elif isinstance(e, model.MultiBundle):
                walk(e.inner)
            elif isinstance(e, model.Permute):
                walk(e.inner)

        walk(expr)
