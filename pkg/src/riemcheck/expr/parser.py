"""Recursive-descent parser for the scalar expression grammar.

Grammar (whitespace insignificant):

    expr    : term (('+'|'-') term)*
    term    : unary (('*'|'/') unary)*
    unary   : '-' unary | power
    power   : atom ('^' exponent)?          -- exponent must be constant
    exponent: ['-'] NUMBER | '(' ['-'] NUMBER ')'
    atom    : NUMBER | IDENT | FUNC '(' expr ')' | '(' expr ')'
    IDENT   : [a-zA-Z][a-zA-Z0-9_]*
    FUNC    : exp | log | sin | cos | sqrt
    NUMBER  : digits with optional fraction and optional exponent (1e-5, 2.5E3)

'^' binds tighter than unary minus, so "-x^2" parses as -(x^2).
"""

from __future__ import annotations

import re

from .nodes import Const, Var, Unary, Binary, Pow, Expr

FUNCTIONS = ("exp", "log", "sin", "cos", "sqrt")

_TOKEN_RE = re.compile(
    r"\s*(?:"
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[a-zA-Z][a-zA-Z0-9_]*)"
    r"|(?P<op>[-+*/^()])"
    r")"
)


class ParseError(Exception):
    """Syntax or name error; `offset` is the byte offset into the input."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


def tokenize(text):
    pos = 0
    toks = []
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            at = pos + (len(text) - pos - len(stripped))
            raise ParseError(f"unexpected character {stripped[0]!r}", at)
        if m.lastgroup is None:
            break
        kind = m.lastgroup
        toks.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(("end", "", n))
    return toks


class _Parser:
    def __init__(self, text, allowed):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.allowed = None if allowed is None else frozenset(allowed)

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect_op(self, op):
        kind, val, off = self.peek()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", off)
        return self.take()

    def parse(self):
        e = self.expr()
        kind, val, off = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected trailing input {val!r}", off)
        return e

    def expr(self):
        e = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                e = Binary("add" if val == "+" else "sub", e, rhs)
            else:
                return e

    def term(self):
        e = self.unary()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                rhs = self.unary()
                e = Binary("mul" if val == "*" else "div", e, rhs)
            else:
                return e

    def unary(self):
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return Unary("neg", self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            return Pow(base, self.exponent())
        return base

    def exponent(self):
        kind, val, off = self.peek()
        if kind == "op" and val == "(":
            self.take()
            k = self._signed_number()
            self.expect_op(")")
            return k
        return self._signed_number()

    def _signed_number(self):
        sign = 1.0
        kind, val, off = self.peek()
        if kind == "op" and val == "-":
            self.take()
            sign = -1.0
            kind, val, off = self.peek()
        if kind != "num":
            raise ParseError("exponent must be a numeric constant", off)
        self.take()
        return sign * float(val)

    def atom(self):
        kind, val, off = self.take()
        if kind == "num":
            return Const(float(val))
        if kind == "ident":
            if val in FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return Unary(val, arg)
            if self.allowed is not None and val not in self.allowed:
                raise ParseError(f"unknown identifier {val!r}", off)
            return Var(val)
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect_op(")")
            return e
        raise ParseError(f"unexpected token {val!r}" if val else "unexpected end of input", off)


def parse(text: str, allowed=None) -> Expr:
    """Parse `text` into an expression tree.

    When `allowed` (an iterable of variable names) is given, any other
    identifier raises ParseError with its byte offset.
    """
    return _Parser(text, allowed).parse()
