"""Error types shared across the compiler.

Frontend errors carry 1-based source positions that point inside the
offending lexeme. Data errors carry the file path and line so the CLI can
print `path:line: message` diagnostics.
"""

from __future__ import annotations


class SourceError(Exception):
    """Base class for diagnostics anchored to a source position."""

    def __init__(self, message: str, line: int, column: int) -> None:
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}")


class LexError(SourceError):
    """A character or character sequence outside the token alphabet."""


class ParseError(SourceError):
    """A token stream that does not match the directive grammar.

    ``expected`` names the token kinds (or literal lexemes) that would have
    been accepted at the error position.
    """

    def __init__(
        self, message: str, line: int, column: int, expected: frozenset[str] = frozenset()
    ) -> None:
        self.expected = expected
        super().__init__(message, line, column)


class SemanticError(SourceError):
    """A well-formed directive with an invalid or inconsistent value."""


class ValidationError(Exception):
    """Raised by validate() with every semantic violation collected."""

    def __init__(self, errors: list[SemanticError]) -> None:
        self.errors = errors
        super().__init__("; ".join(str(e) for e in errors))


class EncodingTypeError(Exception):
    """A shape mismatch while lowering an encoding expression."""

    def __init__(self, message: str, node: str = "") -> None:
        self.node = node
        super().__init__(message)


class IoError(Exception):
    """An unreadable or unopenable input file."""

    def __init__(self, path: str, reason: str) -> None:
        self.path = path
        self.reason = reason
        super().__init__(f"{path}: {reason}")


class FormatError(Exception):
    """Malformed data or label content at a known file line."""

    def __init__(self, path: str, line: int, message: str) -> None:
        self.path = path
        self.line = line
        self.message = message
        super().__init__(f"{path}:{line}: {message}")


class RangeError(Exception):
    """A value range that cannot be used for level mapping."""


class ConfigError(Exception):
    """A description setting the backend cannot honor."""


class TemplateError(Exception):
    """A template placeholder without a binding."""

    def __init__(self, key: str) -> None:
        self.key = key
        super().__init__(f"no binding for placeholder {{{key}}}")


class EncodeDataError(Exception):
    """A sample that cannot be encoded (treated as a data-format error)."""
