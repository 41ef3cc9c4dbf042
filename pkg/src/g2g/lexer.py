"""Tokenizer shared by the Turtle reader and the SPARQL pattern parser."""

from __future__ import annotations

import bisect
import re
from typing import List, NamedTuple

from .errors import ParseError

_PN_CHARS = r"[\w\-%·]"
_PN_LOCAL = rf"(?:{_PN_CHARS}|:|\.(?={_PN_CHARS}|:))*"
_PN_PREFIX = r"(?:[^\W\d_](?:[\w\-]|\.(?=[\w\-]))*)?"

_TOKEN_SPEC = [
    ("WS", r"\s+"),
    ("COMMENT", r"#[^\r\n]*"),
    ("IRI", r"<[^<>\"{}|^`\\\x00-\x20]*>"),
    ("LSTRING", r'"""(?:[^"\\]|\\.|"(?!""))*"""' r"|'''(?:[^'\\]|\\.|'(?!''))*'''"),
    ("STRING", r'"(?:[^"\\\r\n]|\\.)*"' r"|'(?:[^'\\\r\n]|\\.)*'"),
    ("VAR", r"[?$][\w·]+"),
    ("BNODE", r"_:[\w](?:[\w\-]|\.(?=[\w\-]))*"),
    ("PNAME", rf"{_PN_PREFIX}:{_PN_LOCAL}"),
    ("DOUBLE", r"[+-]?(?:[0-9]+\.[0-9]*[eE][+-]?[0-9]+|\.[0-9]+[eE][+-]?[0-9]+|[0-9]+[eE][+-]?[0-9]+)"),
    ("DECIMAL", r"[+-]?[0-9]*\.[0-9]+"),
    ("INTEGER", r"[+-]?[0-9]+"),
    ("AT", r"@[A-Za-z]+(?:-[A-Za-z0-9]+)*"),
    ("WORD", r"[A-Za-z_][\w]*"),
    ("PUNCT", r"\^\^|!=|&&|\|\||<=|>=|[.;,\[\](){}/=<>!*+\-|^?&]"),
]
_MASTER = re.compile("|".join(f"(?P<{name}>{rx})" for name, rx in _TOKEN_SPEC))

_ESCAPES = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


class Token(NamedTuple):
    kind: str
    value: str
    line: int
    column: int
    start: int = 0
    end: int = 0


def unescape(body: str, line: int = 0, column: int = 0) -> str:
    """Decode Turtle/SPARQL string escapes (``\\n``, ``\\uXXXX``, ...)."""
    if "\\" not in body:
        return body
    out = []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        nxt = body[i + 1] if i + 1 < len(body) else ""
        if nxt in _ESCAPES:
            out.append(_ESCAPES[nxt])
            i += 2
        elif nxt in ("u", "U"):
            width = 4 if nxt == "u" else 8
            digits = body[i + 2:i + 2 + width]
            if len(digits) != width or not all(c in "0123456789abcdefABCDEF" for c in digits):
                raise ParseError("bad unicode escape", line, column)
            out.append(chr(int(digits, 16)))
            i += 2 + width
        else:
            raise ParseError(f"unknown escape \\{nxt}", line, column)
    return "".join(out)


def tokenize(text: str, line_offset: int = 0) -> List[Token]:
    """Split ``text`` into tokens, dropping whitespace and comments.

    STRING tokens carry their unescaped content; IRI tokens carry the text
    between the angle brackets; VAR tokens carry the name without sigil.
    """
    line_starts = [0] + [m.end() for m in re.finditer(r"\n", text)]
    tokens: List[Token] = []
    pos = 0
    while pos < len(text):
        m = _MASTER.match(text, pos)
        row = bisect.bisect_right(line_starts, pos)
        col = pos - line_starts[row - 1] + 1
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", row + line_offset, col)
        kind = m.lastgroup
        raw = m.group()
        pos = m.end()
        if kind in ("WS", "COMMENT"):
            continue
        if kind == "LSTRING":
            kind, value = "STRING", unescape(raw[3:-3], row + line_offset, col)
        elif kind == "STRING":
            value = unescape(raw[1:-1], row + line_offset, col)
        elif kind == "IRI":
            value = unescape(raw[1:-1], row + line_offset, col)
        elif kind == "VAR":
            value = raw[1:]
        elif kind == "AT":
            value = raw[1:]
        else:
            value = raw
        tokens.append(Token(kind, value, row + line_offset, col, m.start(), pos))
    return tokens


def variables_in(text: str) -> List[str]:
    """Variable names (without sigil) in order of first occurrence."""
    seen: List[str] = []
    for tok in tokenize(text):
        if tok.kind == "VAR" and tok.value not in seen:
            seen.append(tok.value)
    return seen


class TokenStream:
    """Cursor over a token list with the small helpers both parsers need."""

    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, offset: int = 0):
        i = self.pos + offset
        return self.tokens[i] if i < len(self.tokens) else None

    def next(self) -> Token:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else None
            raise ParseError("unexpected end of input", last.line if last else 0, last.column if last else 0)
        self.pos += 1
        return tok

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def is_punct(self, value: str, offset: int = 0) -> bool:
        tok = self.peek(offset)
        return tok is not None and tok.kind == "PUNCT" and tok.value == value

    def is_word(self, value: str, offset: int = 0) -> bool:
        tok = self.peek(offset)
        return tok is not None and tok.kind == "WORD" and tok.value.lower() == value.lower()

    def expect_punct(self, value: str) -> Token:
        tok = self.next()
        if tok.kind != "PUNCT" or tok.value != value:
            raise ParseError(f"expected {value!r}, found {tok.value!r}", tok.line, tok.column)
        return tok

    def accept_punct(self, value: str) -> bool:
        if self.is_punct(value):
            self.pos += 1
            return True
        return False


def rename_variables(text: str, rename) -> str:
    """Rewrite every variable and blank-node label in ``text``.

    ``rename(name, is_blank)`` returns the new name (no sigil / ``_:``);
    variables are always written back with the ``?`` sigil.  Strings,
    IRIs and comments are left untouched.
    """
    out = []
    last = 0
    for tok in tokenize(text):
        if tok.kind == "VAR":
            out.append(text[last:tok.start] + "?" + rename(tok.value, False))
        elif tok.kind == "BNODE":
            out.append(text[last:tok.start] + "_:" + rename(tok.value[2:], True))
        else:
            continue
        last = tok.end
    out.append(text[last:])
    return "".join(out)
