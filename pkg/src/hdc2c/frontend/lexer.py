"""Lexer for ``.hdcc`` description files.

The token alphabet is small: directive names introduced by a dot, bare
identifiers, unsigned integers, TRUE/FALSE, double-quoted strings, the four
punctuation marks ``( ) , ;`` and ``//`` line comments. Anything else is a
LexError at the exact position of the offending character.
"""

from __future__ import annotations

from hdc2c.errors import LexError
from hdc2c.frontend.tokens import Token, TokenKind

_PUNCT = {
    "(": TokenKind.LPAREN,
    ")": TokenKind.RPAREN,
    ",": TokenKind.COMMA,
    ";": TokenKind.SEMICOLON,
}


def tokenize(source: str) -> list[Token]:
    """Split ``source`` into tokens.

    Comments are returned as COMMENT tokens so callers that reproduce the
    input can keep them; the parser filters them out.

    Args:
        source: Full text of a description file.

    Returns:
        Tokens in source order. Joining each token's lexeme with the
        whitespace between them reproduces the input exactly.

    Raises:
        LexError: On any character outside the token alphabet, with the
            1-based line and column of that character.
    """
    return _Lexer(source).run()


class _Lexer:
    def __init__(self, source: str) -> None:
        self.src = source
        self.pos = 0
        self.line = 1
        self.col = 1
        self.tokens: list[Token] = []

    def run(self) -> list[Token]:
        while self.pos < len(self.src):
            ch = self.src[self.pos]
            if ch in " \t\r\n":
                self._advance()
            elif ch == "/" and self._peek(1) == "/":
                self._comment()
            elif ch in _PUNCT:
                self._emit(_PUNCT[ch], self.pos + 1)
            elif ch == ".":
                self._directive_name()
            elif ch == '"':
                self._string()
            elif ch.isdigit():
                self._integer()
            elif ch.isalpha() or ch == "_":
                self._word()
            else:
                raise LexError(f"unexpected character {ch!r}", self.line, self.col)
        return self.tokens

    # helpers ------------------------------------------------------------

    def _peek(self, ahead: int = 0) -> str:
        i = self.pos + ahead
        return self.src[i] if i < len(self.src) else ""

    def _advance(self) -> None:
        if self.src[self.pos] == "\n":
            self.line += 1
            self.col = 1
        else:
            self.col += 1
        self.pos += 1

    def _emit(self, kind: TokenKind, end: int) -> None:
        lexeme = self.src[self.pos : end]
        self.tokens.append(Token(kind, lexeme, self.line, self.col, self.pos))
        for _ in range(end - self.pos):
            self._advance()

    def _comment(self) -> None:
        end = self.src.find("\n", self.pos)
        if end == -1:
            end = len(self.src)
        self._emit(TokenKind.COMMENT, end)

    def _directive_name(self) -> None:
        end = self.pos + 1
        while end < len(self.src) and (self.src[end].isalnum() or self.src[end] == "_"):
            end += 1
        if end == self.pos + 1:
            raise LexError("expected directive name after '.'", self.line, self.col)
        self._emit(TokenKind.DIRECTIVE_NAME, end)

    def _integer(self) -> None:
        end = self.pos
        while end < len(self.src) and self.src[end].isdigit():
            end += 1
        self._emit(TokenKind.INT, end)

    def _word(self) -> None:
        end = self.pos
        while end < len(self.src) and (self.src[end].isalnum() or self.src[end] == "_"):
            end += 1
        word = self.src[self.pos : end]
        kind = TokenKind.BOOL if word.upper() in ("TRUE", "FALSE") else TokenKind.IDENT
        self._emit(kind, end)

    def _string(self) -> None:
        end = self.pos + 1
        while end < len(self.src):
            ch = self.src[end]
            if ch == '"':
                self._emit(TokenKind.STRING, end + 1)
                return
            if ch == "\n":
                break
            end += 1
        raise LexError("unterminated string", self.line, self.col)
