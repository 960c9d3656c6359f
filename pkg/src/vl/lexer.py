"""Lexer: UTF-8 source text to tokens, doc comments, and recoverable diagnostics."""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagnostics import Diagnostic
from .tokens import Comment, DocComment, Span, Token, TokenKind

KEYWORDS = frozenset(
    """
    module package param const var inst input output always_ff always_comb
    assign if else if_reset unsafe cdc function return pub
    clock clock_posedge clock_negedge
    reset reset_async_high reset_async_low reset_sync_high reset_sync_low
    logic bit u32 u64
    """.split()
)

# Longest match first.
_PUNCTS = sorted(
    [
        "<<=", ">>=",
        "::", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||",
        "+=", "-=", "*=", "&=", "|=", "^=", "->",
        ":", ";", ",", "#", "(", ")", "{", "}", "<", ">", "[", "]",
        "=", "+", "-", "*", "/", "%", "&", "|", "^", "~", "!",
    ],
    key=len,
    reverse=True,
)

_BASE_DIGITS = {
    "b": frozenset("01_"),
    "d": frozenset("0123456789_"),
    "h": frozenset("0123456789abcdefABCDEF_"),
}


def _is_ident_start(c: str) -> bool:
    return c.isascii() and (c.isalpha() or c == "_")


def _is_ident_char(c: str) -> bool:
    return c.isascii() and (c.isalnum() or c == "_")


@dataclass(slots=True)
class LexResult:
    tokens: list[Token]
    doc_comments: list[DocComment]
    comments: list[Comment]
    diagnostics: list[Diagnostic] = field(default_factory=list)


def tokenize(source: str, file_id: str) -> tuple[list[Token], list[DocComment], list[Diagnostic]]:
    """Lex `source`, separating `///` doc comments from regular trivia."""
    r = scan(source, file_id)
    return r.tokens, r.doc_comments, r.diagnostics


def scan(source: str, file_id: str) -> LexResult:
    """Like `tokenize` but also returns regular comments (formatter input)."""
    return _Scanner(source, file_id).run()


class _Scanner:
    def __init__(self, source: str, file_id: str):
        self.src = source
        self.file_id = file_id
        self.pos = 0
        self.line = 1
        self.col = 1
        self.line_has_code = False
        self.tokens: list[Token] = []
        self.docs: list[DocComment] = []
        self.comments: list[Comment] = []
        self.diags: list[Diagnostic] = []
        # Open run of consecutive own-line /// lines.
        self._doc_lines: list[str] = []
        self._doc_start: tuple[int, int, int] | None = None  # (pos, line, col)
        self._doc_end = 0
        self._doc_last_line = 0

    def span_from(self, start: tuple[int, int, int], end: int) -> Span:
        return Span(self.file_id, start[0], end, start[1], start[2])

    def mark(self) -> tuple[int, int, int]:
        return (self.pos, self.line, self.col)

    def advance(self, n: int = 1) -> None:
        for _ in range(n):
            if self.src[self.pos] == "\n":
                self.line += 1
                self.col = 1
                self.line_has_code = False
            else:
                self.col += 1
            self.pos += 1

    def error(self, code: str, message: str, span: Span) -> None:
        self.diags.append(Diagnostic(code, message, span))

    def flush_doc(self) -> None:
        if self._doc_start is None:
            return
        self.docs.append(
            DocComment(
                text="\n".join(self._doc_lines),
                span=self.span_from(self._doc_start, self._doc_end),
            )
        )
        self._doc_lines = []
        self._doc_start = None

    def run(self) -> LexResult:
        src, n = self.src, len(self.src)
        while self.pos < n:
            c = src[self.pos]
            if c in " \t\r\n":
                self.advance()
            elif c == "/" and src.startswith("//", self.pos):
                self.comment()
            elif _is_ident_start(c):
                self.word()
            elif c.isdigit():
                self.number()
            elif c == "`":
                self.domain_tick()
            else:
                self.punct()
        self.flush_doc()
        return LexResult(self.tokens, self.docs, self.comments, self.diags)

    def emit(self, kind: TokenKind, start: tuple[int, int, int]) -> None:
        span = self.span_from(start, self.pos)
        self.tokens.append(Token(kind, self.src[span.byte_start : span.byte_end], span))
        self.line_has_code = True

    def comment(self) -> None:
        start = self.mark()
        end = self.src.find("\n", self.pos)
        if end < 0:
            end = len(self.src)
        text = self.src[self.pos : end]
        is_doc = text.startswith("///") and not text.startswith("////")
        own_line = not self.line_has_code
        if is_doc:
            body = text[3:]
            if body.startswith(" "):
                body = body[1:]
            if own_line:
                if self._doc_start is not None and start[1] != self._doc_last_line + 1:
                    self.flush_doc()
                if self._doc_start is None:
                    self._doc_start = start
                    self._doc_lines = []
                self._doc_lines.append(body)
                self._doc_end = end
                self._doc_last_line = start[1]
            else:
                self.flush_doc()
                self.docs.append(
                    DocComment(text=body, span=self.span_from(start, end), trailing=True)
                )
        else:
            self.comments.append(Comment(text, self.span_from(start, end), own_line))
        self.advance(end - self.pos)

    def word(self) -> None:
        start = self.mark()
        while self.pos < len(self.src) and _is_ident_char(self.src[self.pos]):
            self.advance()
        text = self.src[start[0] : self.pos]
        self.emit(TokenKind.KEYWORD if text in KEYWORDS else TokenKind.IDENT, start)

    def number(self) -> None:
        start = self.mark()
        while self.pos < len(self.src) and self.src[self.pos] in "0123456789_":
            self.advance()
        nxt = self.src[self.pos : self.pos + 2]
        if len(nxt) == 2 and nxt[0] == "'" and nxt[1] in _BASE_DIGITS:
            alphabet = _BASE_DIGITS[nxt[1]]
            self.advance(2)
            ndigits = 0
            while self.pos < len(self.src) and self.src[self.pos] in alphabet:
                self.advance()
                ndigits += 1
            if ndigits == 0:
                self.error(
                    "E0002",
                    f"sized literal `{self.src[start[0]:self.pos]}` has no digits",
                    self.span_from(start, self.pos),
                )
            self.emit(TokenKind.SIZED_LITERAL, start)
        elif self.src[self.pos : self.pos + 1] == "'":
            # A base character is required right after the quote.
            self.advance(1)
            self.error(
                "E0002",
                f"sized literal `{self.src[start[0]:self.pos]}` is missing its base (b, d, or h)",
                self.span_from(start, self.pos),
            )
            self.emit(TokenKind.SIZED_LITERAL, start)
        else:
            self.emit(TokenKind.DEC_LITERAL, start)

    def domain_tick(self) -> None:
        start = self.mark()
        if self.pos + 1 < len(self.src) and _is_ident_start(self.src[self.pos + 1]):
            self.advance()
            while self.pos < len(self.src) and _is_ident_char(self.src[self.pos]):
                self.advance()
            self.emit(TokenKind.DOMAIN_TICK, start)
        else:
            self.advance()
            self.error(
                "E0001",
                "invalid character `` ` `` (domain annotations are `` `name ``)",
                self.span_from(start, self.pos),
            )

    def punct(self) -> None:
        start = self.mark()
        for p in _PUNCTS:
            if self.src.startswith(p, self.pos):
                self.advance(len(p))
                self.emit(TokenKind.PUNCT, start)
                return
        c = self.src[self.pos]
        self.advance()
        self.error("E0001", f"invalid character `{c}`", self.span_from(start, self.pos))


def sized_literal_parts(text: str) -> tuple[int, str, str] | None:
    """Split a sized-literal lexeme into (width, base, digits); None if malformed."""
    quote = text.find("'")
    if quote < 0 or quote + 1 >= len(text):
        return None
    base = text[quote + 1]
    digits = text[quote + 2 :]
    if base not in _BASE_DIGITS or not digits:
        return None
    width = int(text[:quote].replace("_", ""))
    return width, base, digits


def sized_literal_value(base: str, digits: str) -> int:
    """Exact value of the digit string (underscores ignored), as a big integer."""
    radix = {"b": 2, "d": 10, "h": 16}[base]
    value = 0
    for ch in digits:
        if ch == "_":
            continue
        value = value * radix + int(ch, 16)
    return value
