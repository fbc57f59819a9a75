"""Tokenizer and recursive-descent parser for ground propositional ASP.

Accepted rule forms are ``head.``, ``head :- body.`` and ``:- body.`` where a
body is a comma separated list of atoms, each optionally prefixed by ``not``.
Atoms may carry ground argument lists (``edge(1,2)``); these are kept as
opaque symbols. ``%`` starts a comment that runs to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .program import BodyLiteral, Program, Rule, Sign

__all__ = [
    "ParseError",
    "LexError",
    "RangeSyntaxError",
    "VariableError",
    "Token",
    "tokenize",
    "parse_program",
    "parse_file",
]


class ParseError(ValueError):
    """Malformed program text. Carries a 1-based line and column."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.message = message
        self.line = line
        self.col = col
        super().__init__(f"{line}:{col}: {message}")


class LexError(ParseError):
    pass


class RangeSyntaxError(ParseError):
    pass


class VariableError(ParseError):
    pass


@dataclass(frozen=True)
class Token:
    kind: str  # one of: ident, not, if, comma, dot, lparen, rparen, eof
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>%[^\n]*)
  | (?P<if>:-)
  | (?P<comma>,)
  | (?P<dot>\.)
  | (?P<lparen>\()
  | (?P<rparen>\))
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*|[0-9]+)
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    """Split ``text`` into tokens, dropping whitespace and comments.

    The returned list does not include the end-of-input marker.
    """
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise LexError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        value = m.group()
        if kind == "ident" and value == "not":
            kind = "not"
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, value, line, col))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = pos + value.rindex("\n") + 1
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        if self.tokens:
            last = self.tokens[-1]
            eof = Token("eof", "", last.line, last.col + len(last.text))
        else:
            eof = Token("eof", "", 1, 1)
        self.tokens.append(eof)
        self.pos = 0

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            found = "end of input" if tok.kind == "eof" else repr(tok.text)
            raise ParseError(f"expected {what}, found {found}", tok.line, tok.col)
        return self.advance()

    def program(self) -> Program:
        rules = []
        while self.peek().kind != "eof":
            rules.append(self.rule())
        return Program(tuple(rules))

    def rule(self) -> Rule:
        head: Optional[str] = None
        if self.peek().kind != "if":
            head = self.atom()
            if self.peek().kind == "dot":
                self.advance()
                return Rule(head)
        self.expect("if", "':-' or '.'")
        body = [self.literal()]
        while self.peek().kind == "comma":
            self.advance()
            body.append(self.literal())
        self.expect("dot", "',' or '.' after body literal")
        return Rule(head, tuple(body))

    def literal(self) -> BodyLiteral:
        if self.peek().kind == "not":
            self.advance()
            tok = self.peek()
            if tok.kind == "not":
                raise ParseError("'not' may not be nested", tok.line, tok.col)
            return BodyLiteral(self.atom(), Sign.NEG)
        return BodyLiteral(self.atom(), Sign.POS)

    def atom(self) -> str:
        tok = self.peek()
        if tok.kind != "ident":
            found = "end of input" if tok.kind == "eof" else repr(tok.text)
            raise ParseError(f"expected atom, found {found}", tok.line, tok.col)
        if tok.text[0].isdigit():
            raise ParseError(f"atom name must start with a lowercase letter: {tok.text!r}",
                             tok.line, tok.col)
        return self.term()

    def term(self) -> str:
        tok = self.expect("ident", "term")
        if tok.text[0].isupper() or tok.text[0] == "_":
            raise VariableError(
                f"variable {tok.text!r} in a ground program; only ground atoms are accepted",
                tok.line, tok.col)
        if tok.text[0].isdigit() or self.peek().kind != "lparen":
            return tok.text
        self.advance()
        args = [self.argument()]
        while self.peek().kind == "comma":
            self.advance()
            args.append(self.argument())
        self.expect("rparen", "')'")
        return f"{tok.text}({','.join(args)})"

    def argument(self) -> str:
        arg = self.term()
        nxt = self.peek()
        if nxt.kind == "dot":
            if self.peek(1).kind == "dot":
                raise RangeSyntaxError(
                    "interval terms are not supported; expand the range into "
                    "separate ground atoms, e.g. ball(1). ball(2). ball(3).",
                    nxt.line, nxt.col)
            raise ParseError("unexpected '.' inside argument list", nxt.line, nxt.col)
        return arg


def parse_program(text: str) -> Program:
    return _Parser(text).program()


def parse_file(path) -> Program:
    with open(path, encoding="utf-8") as fh:
        return parse_program(fh.read())
