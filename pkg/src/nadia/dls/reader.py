"""Reader for the parenthesized surface syntax.

Produces a generic s-expression tree with source positions; the form
analyzer in parser.py turns that tree into declarations.  Symbols are
lowercased at read time, strings keep their case.  `;;` starts a comment
running to end of line.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from ..values import norm_symbol, norm_text
from .ast import Pos


class DlsSyntaxError(Exception):
    def __init__(self, message: str, pos: Pos, filename: str = "<dls>"):
        super().__init__(f"{filename}:{pos.line}:{pos.col}: error: {message}")
        self.message = message
        self.pos = pos
        self.line = pos.line
        self.col = pos.col
        self.filename = filename


@dataclass(frozen=True)
class SSymbol:
    name: str
    pos: Pos
    quoted: bool = False


@dataclass(frozen=True)
class SKeyword:
    name: str  # without the leading colon
    pos: Pos


@dataclass(frozen=True)
class SString:
    value: str
    pos: Pos


@dataclass(frozen=True)
class SList:
    items: tuple["SExpr", ...]
    pos: Pos


SExpr = Union[SSymbol, SKeyword, SString, SList]

_DELIMS = set("()'\";")


class _Reader:
    def __init__(self, text: str, filename: str):
        self.text = text
        self.filename = filename
        self.i = 0
        self.line = 1
        self.col = 1

    def error(self, message: str, pos: Pos | None = None) -> DlsSyntaxError:
        return DlsSyntaxError(message, pos or self.pos(), self.filename)

    def pos(self) -> Pos:
        return Pos(self.line, self.col)

    def peek(self) -> str:
        return self.text[self.i] if self.i < len(self.text) else ""

    def advance(self) -> str:
        ch = self.text[self.i]
        self.i += 1
        if ch == "\n":
            self.line += 1
            self.col = 1
        else:
            self.col += 1
        return ch

    def skip_blank(self):
        while self.i < len(self.text):
            ch = self.peek()
            if ch.isspace():
                self.advance()
            elif ch == ";":
                if self.text[self.i:self.i + 2] != ";;":
                    raise self.error("unexpected character ';'")
                while self.i < len(self.text) and self.peek() != "\n":
                    self.advance()
            else:
                return

    def read_all(self) -> list[SExpr]:
        forms = []
        while True:
            self.skip_blank()
            if self.i >= len(self.text):
                return forms
            forms.append(self.read_expr())

    def read_expr(self) -> SExpr:
        self.skip_blank()
        if self.i >= len(self.text):
            raise self.error("unexpected end of input")
        start = self.pos()
        ch = self.peek()
        if ch == "(":
            self.advance()
            items = []
            while True:
                self.skip_blank()
                if self.i >= len(self.text):
                    raise self.error("unclosed parenthesis", start)
                if self.peek() == ")":
                    self.advance()
                    return SList(tuple(items), start)
                items.append(self.read_expr())
        if ch == ")":
            raise self.error("unmatched ')'")
        if ch == "'":
            self.advance()
            nxt = self.peek()
            if nxt == "" or nxt.isspace() or nxt in "()\";":
                raise self.error("expected symbol after quote", start)
            sym = self.read_expr()
            if not isinstance(sym, SSymbol):
                raise self.error("expected symbol after quote", start)
            return SSymbol(sym.name, start, quoted=True)
        if ch == '"':
            return self.read_string()
        if ch == ":":
            self.advance()
            word = self.read_word()
            if not word:
                raise self.error("expected keyword name after ':'", start)
            return SKeyword(norm_symbol(word), start)
        word = self.read_word()
        if not word:
            raise self.error(f"unexpected character {ch!r}", start)
        return SSymbol(norm_symbol(word), start)

    def read_word(self) -> str:
        start = self.i
        while self.i < len(self.text):
            ch = self.peek()
            if ch.isspace() or ch in _DELIMS:
                break
            self.advance()
        return self.text[start:self.i]

    def read_string(self) -> SString:
        start = self.pos()
        self.advance()  # opening quote
        buf = []
        while True:
            if self.i >= len(self.text):
                raise self.error("unterminated string", start)
            ch = self.advance()
            if ch == '"':
                return SString(norm_text("".join(buf)), start)
            if ch == "\\":
                if self.i >= len(self.text):
                    raise self.error("unterminated string", start)
                esc = self.advance()
                buf.append({"n": "\n", "t": "\t"}.get(esc, esc))
            else:
                buf.append(ch)


def read_forms(text: str, filename: str = "<dls>") -> list[SExpr]:
    return _Reader(text, filename).read_all()
