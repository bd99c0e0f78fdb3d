"""Tokenizer shared by the expression and polynomial parsers."""

from __future__ import annotations

import re
from dataclasses import dataclass

LETTER_VARS = {"x": 1, "y": 2, "z": 3, "w": 4}

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^()\[\]]))")


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


@dataclass(frozen=True)
class Token:
    kind: str  # "num" | "ident" | "op" | "eof"
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            pos = len(text)
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            start = len(text) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", start)
        kind = m.lastgroup
        tokens.append(Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(Token("eof", "", len(text)))
    return tokens


def var_index(tok: Token) -> int:
    """Map an identifier token to a variable index (x1, x2, ... or x/y/z/w)."""
    name = tok.text
    if name in LETTER_VARS:
        return LETTER_VARS[name]
    m = re.fullmatch(r"x(\d+)", name)
    if m is None:
        raise ParseError(f"unknown identifier {name!r}", tok.pos)
    index = int(m.group(1))
    if index < 1:
        raise ParseError("variable indices start at 1", tok.pos)
    return index


class TokenStream:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def accept(self, op: str) -> bool:
        tok = self.peek()
        if tok.kind == "op" and tok.text == op:
            self.i += 1
            return True
        return False

    def expect(self, op: str) -> Token:
        tok = self.peek()
        if not (tok.kind == "op" and tok.text == op):
            shown = tok.text or "end of input"
            raise ParseError(f"expected {op!r}, found {shown!r}", tok.pos)
        return self.next()
