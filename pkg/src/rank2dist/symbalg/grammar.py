"""Tokenizer and recursive-descent parser for the expression grammar.

Grammar (whitespace-insensitive)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' INTEGER)?
    atom   := INTEGER | SYMBOL | '(' expr ')'

Exponents are nonnegative integer literals.  The parser is generic over the
value type: callers supply the constructors for integers and symbols.
"""

from __future__ import annotations

import re
from typing import Callable, Generic, TypeVar

from ..errors import ParseError

T = TypeVar("T")

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


class _Token:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind: str, text: str, pos: int):
        self.kind = kind
        self.text = text
        self.pos = pos


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    start = text.rfind("\n", 0, pos) + 1
    return line, pos - start + 1


def tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1) is not None:
            tokens.append(_Token("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(_Token("sym", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^()":
                line, col = _line_col(text, m.start(3))
                raise ParseError(f"unexpected character {ch!r}", line, col)
            tokens.append(_Token("op", ch, m.start(3)))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class Parser(Generic[T]):
    def __init__(self, text: str, integer: Callable[[int], T], symbol: Callable[[str], T]):
        self.text = text
        self.integer = integer
        self.symbol = symbol
        self.tokens = tokenize(text)
        self.i = 0

    def _peek(self) -> _Token:
        return self.tokens[self.i]

    def _next(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def _fail(self, message: str, tok: _Token) -> ParseError:
        line, col = _line_col(self.text, tok.pos)
        return ParseError(message, line, col)

    def parse(self) -> T:
        if self._peek().kind == "end":
            raise self._fail("empty expression", self._peek())
        value = self._expr()
        tok = self._peek()
        if tok.kind != "end":
            raise self._fail(f"unexpected token {tok.text!r}", tok)
        return value

    def _expr(self) -> T:
        value = self._term()
        while self._peek().kind == "op" and self._peek().text in "+-":
            op = self._next().text
            rhs = self._term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def _term(self) -> T:
        value = self._unary()
        while self._peek().kind == "op" and self._peek().text in "*/":
            op = self._next().text
            rhs = self._unary()
            value = value * rhs if op == "*" else value / rhs
        return value

    def _unary(self) -> T:
        tok = self._peek()
        if tok.kind == "op" and tok.text in "+-":
            self._next()
            inner = self._unary()
            return -inner if tok.text == "-" else inner
        return self._power()

    def _power(self) -> T:
        base = self._atom()
        tok = self._peek()
        if tok.kind == "op" and tok.text == "^":
            self._next()
            exp_tok = self._peek()
            if exp_tok.kind != "int":
                raise self._fail("exponent must be a nonnegative integer literal", exp_tok)
            self._next()
            return base ** int(exp_tok.text)
        return base

    def _atom(self) -> T:
        tok = self._next()
        if tok.kind == "int":
            return self.integer(int(tok.text))
        if tok.kind == "sym":
            return self.symbol(tok.text)
        if tok.kind == "op" and tok.text == "(":
            value = self._expr()
            close = self._next()
            if not (close.kind == "op" and close.text == ")"):
                raise self._fail("expected ')'", close)
            return value
        raise self._fail(f"unexpected token {tok.text!r}" if tok.text else "unexpected end of input", tok)


def parse_with(text: str, integer: Callable[[int], T], symbol: Callable[[str], T]) -> T:
    return Parser(text, integer, symbol).parse()
