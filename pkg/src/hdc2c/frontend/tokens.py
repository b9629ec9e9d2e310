"""Token definitions for the directive language."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, auto


class TokenKind(Enum):
    """Lexical categories produced by the lexer."""

    DIRECTIVE_NAME = auto()
    IDENT = auto()
    INT = auto()
    BOOL = auto()
    STRING = auto()
    LPAREN = auto()
    RPAREN = auto()
    COMMA = auto()
    SEMICOLON = auto()
    COMMENT = auto()


@dataclass(frozen=True)
class Token:
    """A single lexeme with its 1-based source position.

    ``offset`` is the 0-based character offset of the lexeme start, kept so
    that the token stream can be checked against the original text.
    """

    kind: TokenKind
    lexeme: str
    line: int
    column: int
    offset: int

    def __repr__(self) -> str:  # compact for diagnostics in test failures
        return f"Token({self.kind.name}, {self.lexeme!r}, {self.line}:{self.column})"
