"""Parser for the directive language.

Each directive is ``.NAME args ;``. Argument shapes are fixed per
directive; the only structured argument is the encoding expression, parsed
by recursive descent. Directive names and combinator keywords are
case-insensitive, user identifiers are case-sensitive.
"""

from __future__ import annotations

from dataclasses import dataclass

from hdc2c.errors import ParseError
from hdc2c.frontend import model
from hdc2c.frontend.tokens import Token, TokenKind

# Canonical directive names. EMBEDDINGS is a tolerated alias of EMBEDDING.
_ALIASES = {"EMBEDDINGS": "EMBEDDING"}

_SCALAR_SHAPES: dict[str, tuple[TokenKind, ...]] = {
    "NAME": (TokenKind.IDENT,),
    "INPUT_DIM": (TokenKind.INT,),
    "CLASSES": (TokenKind.INT,),
    "TYPE": (TokenKind.IDENT,),
    "DIMENSIONS": (TokenKind.INT,),
    "TRAIN_SIZE": (TokenKind.INT,),
    "TEST_SIZE": (TokenKind.INT,),
    "NUM_THREADS": (TokenKind.INT,),
    "VECTOR_SIZE": (TokenKind.INT,),
    "DEBUG": (TokenKind.BOOL,),
    "SEED": (TokenKind.INT,),
}

_EMBED_DIRECTIVES = ("WEIGHT_EMBED", "EMBEDDING")

KNOWN_DIRECTIVES = frozenset(_SCALAR_SHAPES) | set(_EMBED_DIRECTIVES) | {"ENCODING"}

_COMBINATORS = frozenset(
    ["MULTIBUNDLE", "MULTISET", "BATCHBIND", "BIND", "BUNDLE", "HASHTABLE", "NGRAM", "PERMUTE"]
)


@dataclass(frozen=True)
class Directive:
    """One parsed directive with canonical name and typed argument values.

    ``arg_tokens`` parallels ``args`` and carries source positions for
    later semantic diagnostics; the encoding argument maps to its opening
    token.
    """

    name: str
    args: tuple[object, ...]
    name_token: Token
    arg_tokens: tuple[Token, ...]


def parse(tokens: list[Token]) -> list[Directive]:
    """Parse a token stream into directives.

    Args:
        tokens: Lexer output; COMMENT tokens are ignored.

    Returns:
        Directives in source order, names canonicalized to upper case.

    Raises:
        ParseError: At the first token that cannot continue a directive,
            with the set of acceptable token kinds.
    """
    stream = [t for t in tokens if t.kind is not TokenKind.COMMENT]
    return _Parser(stream).run()


class _Parser:
    def __init__(self, tokens: list[Token]) -> None:
        self.tokens = tokens
        self.pos = 0

    def run(self) -> list[Directive]:
        out = []
        while self.pos < len(self.tokens):
            out.append(self._directive())
        return out

    # token plumbing -----------------------------------------------------

    def _peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _last(self) -> Token:
        return self.tokens[min(self.pos, len(self.tokens) - 1)]

    def _fail(self, message: str, expected: frozenset[str], at: Token | None = None) -> ParseError:
        tok = at or self._peek()
        if tok is None:
            tok = self._last()
            return ParseError(
                f"{message}, found end of input", tok.line, tok.column + len(tok.lexeme), expected
            )
        return ParseError(f"{message}, found {tok.lexeme!r}", tok.line, tok.column, expected)

    def _take(self, kind: TokenKind, what: str) -> Token:
        tok = self._peek()
        if tok is None or tok.kind is not kind:
            raise self._fail(f"expected {what}", frozenset([kind.name]))
        self.pos += 1
        return tok

    def _take_if(self, kind: TokenKind) -> Token | None:
        tok = self._peek()
        if tok is not None and tok.kind is kind:
            self.pos += 1
            return tok
        return None

    # directives ---------------------------------------------------------

    def _directive(self) -> Directive:
        name_tok = self._take(TokenKind.DIRECTIVE_NAME, "a directive")
        raw = name_tok.lexeme[1:].upper()
        name = _ALIASES.get(raw, raw)
        if name not in KNOWN_DIRECTIVES:
            raise ParseError(
                f"unknown directive {name_tok.lexeme}",
                name_tok.line,
                name_tok.column,
                frozenset(["DIRECTIVE_NAME"]),
            )

        if name == "ENCODING":
            expr, first = self._encoding_argument()
            args: tuple[object, ...] = (expr,)
            arg_tokens: tuple[Token, ...] = (first,)
        elif name in _EMBED_DIRECTIVES:
            args, arg_tokens = self._embed_arguments()
        else:
            args, arg_tokens = self._scalar_arguments(_SCALAR_SHAPES[name])

        tok = self._peek()
        if tok is None or tok.kind is not TokenKind.SEMICOLON:
            last = self.tokens[self.pos - 1]
            raise ParseError(
                f"missing ';' after .{name}",
                last.line,
                last.column,
                frozenset(["SEMICOLON"]),
            )
        self.pos += 1
        return Directive(name, args, name_tok, arg_tokens)

    def _scalar_arguments(
        self, shape: tuple[TokenKind, ...]
    ) -> tuple[tuple[object, ...], tuple[Token, ...]]:
        args = []
        toks = []
        for kind in shape:
            if kind is TokenKind.IDENT:
                # .NAME also accepts a quoted string
                tok = self._take_if(TokenKind.STRING)
                if tok is None:
                    tok = self._take(TokenKind.IDENT, "an identifier")
                    args.append(tok.lexeme)
                else:
                    args.append(tok.lexeme[1:-1])
            elif kind is TokenKind.INT:
                tok = self._take(TokenKind.INT, "an integer")
                args.append(int(tok.lexeme))
            else:
                tok = self._take(TokenKind.BOOL, "TRUE or FALSE")
                args.append(tok.lexeme.upper() == "TRUE")
            toks.append(tok)
        return tuple(args), tuple(toks)

    def _embed_arguments(self) -> tuple[tuple[object, ...], tuple[Token, ...]]:
        # Both `(NAME KIND ITEMS)` and the bare `NAME KIND ITEMS` form.
        opened = self._take_if(TokenKind.LPAREN) is not None
        name = self._take(TokenKind.IDENT, "a table name")
        kind = self._take(TokenKind.IDENT, "RANDOM or LEVEL")
        items = self._take(TokenKind.INT, "an item count")
        if opened:
            self._take(TokenKind.RPAREN, "')'")
        return (name.lexeme, kind.lexeme, int(items.lexeme)), (name, kind, items)

    # encoding expressions ----------------------------------------------

    def _encoding_argument(self) -> tuple[model.EncodingExpr, Token]:
        first = self._peek()
        if first is None:
            raise self._fail("expected an encoding expression", frozenset(["IDENT"]))
        return self._expr(), first

    def _expr(self) -> model.EncodingExpr:
        tok = self._take(TokenKind.IDENT, "an encoding term")
        word = tok.lexeme.upper()
        nxt = self._peek()
        is_call = (
            word in _COMBINATORS and nxt is not None and nxt.kind is TokenKind.LPAREN
        )
        if not is_call:
            return model.Ref(tok.lexeme)

        self._take(TokenKind.LPAREN, "'('")
        if word in ("MULTIBUNDLE", "MULTISET"):
            inner = self._expr()
            self._take(TokenKind.RPAREN, "')'")
            return model.MultiBundle(inner)
        if word in ("BATCHBIND", "BIND", "BUNDLE"):
            left = self._expr()
            self._take(TokenKind.COMMA, "','")
            right = self._expr()
            self._take(TokenKind.RPAREN, "')'")
            cls = {"BATCHBIND": model.BatchBind, "BIND": model.Bind, "BUNDLE": model.Bundle}[word]
            return cls(left, right)
        if word == "HASHTABLE":
            keys = self._take(TokenKind.IDENT, "a key table name")
            self._take(TokenKind.COMMA, "','")
            values = self._take(TokenKind.IDENT, "a value table name")
            self._take(TokenKind.RPAREN, "')'")
            return model.HashTable(keys.lexeme, values.lexeme)
        if word == "NGRAM":
            ref = self._take(TokenKind.IDENT, "a table name")
            self._take(TokenKind.COMMA, "','")
            n = self._take(TokenKind.INT, "a window size")
            self._take(TokenKind.RPAREN, "')'")
            return model.Ngram(ref.lexeme, int(n.lexeme))
        # PERMUTE
        inner = self._expr()
        self._take(TokenKind.COMMA, "','")
        shift = self._take(TokenKind.INT, "a rotation count")
        self._take(TokenKind.RPAREN, "')'")
        return model.Permute(inner, int(shift.lexeme))
