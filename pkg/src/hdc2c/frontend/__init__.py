"""Directive-file frontend: lexing, parsing, validation, printing."""

from __future__ import annotations

from hdc2c.frontend.lexer import tokenize
from hdc2c.frontend.model import (
    EmbedKind,
    EmbeddingSpec,
    ExecType,
    ProgramDescription,
)
from hdc2c.frontend.parser import parse
from hdc2c.frontend.printer import format_description
from hdc2c.frontend.tokens import Token, TokenKind
from hdc2c.frontend.validate import load_description, validate

__all__ = [
    "EmbedKind",
    "EmbeddingSpec",
    "ExecType",
    "ProgramDescription",
    "Token",
    "TokenKind",
    "format_description",
    "load_description",
    "parse",
    "tokenize",
    "validate",
]
