"""Recursive-descent parser for polynomial expressions.

Grammar::

    expr    := term (('+'|'-') term)*
    term    := factor ('*' factor)*
    factor  := base ('^' nonneg-integer)?
    base    := rational-literal | identifier | '(' expr ')' | '-' base
    rational-literal := integer ('/' positive-integer)?
    identifier := letter (letter|digit|'_')*

With ``allow_division=True`` a term may also contain ``'/' factor``.  That
mode only exists to read back printed rational functions of the form
``(N)/(D)``; ``a/b/c`` style chains are not meant to be written by hand.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable

from .polynomial import Polynomial
from .scalar import ScalarExpr


class ParseError(ValueError):
    def __init__(self, message: str, position: int | None = None, text: str | None = None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class UnknownIdentifier(ParseError):
    pass


class ZeroDenominator(ParseError):
    pass


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))")


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", bad, text)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, params: Iterable[str], allow_division: bool):
        self.text = text
        self.params = set(params)
        self.allow_division = allow_division
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, value, pos = self.take()
        if kind != "op" or value != op:
            raise ParseError(f"expected {op!r}", pos, self.text)

    def error(self, message: str):
        raise ParseError(message, self.peek()[2], self.text)

    def parse(self) -> ScalarExpr:
        value = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return value

    def expr(self) -> ScalarExpr:
        value = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> ScalarExpr:
        value = self.factor()
        while self.peek()[0] == "op" and (
            self.peek()[1] == "*" or (self.allow_division and self.peek()[1] == "/")
        ):
            op, pos = self.take()[1:]
            rhs = self.factor()
            if op == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    raise ZeroDenominator("division by zero", pos, self.text)
                value = value / rhs
        return value

    def factor(self) -> ScalarExpr:
        value = self.base()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            kind, digits, pos = self.take()
            if kind != "int":
                raise ParseError("exponent must be a non-negative integer", pos, self.text)
            value = value ** int(digits)
        return value

    def base(self) -> ScalarExpr:
        kind, value, pos = self.take()
        if kind == "int":
            num = int(value)
            nxt = self.peek()
            after = self.tokens[min(self.i + 1, len(self.tokens) - 1)]
            if nxt[0] == "op" and nxt[1] == "/" and after[0] == "int":
                self.take()
                self.take()
                den = int(after[1])
                if den == 0:
                    raise ZeroDenominator("zero denominator in rational literal", after[2], self.text)
                return ScalarExpr(Polynomial.constant(Fraction(num, den)))
            if nxt[0] == "op" and nxt[1] == "/" and not self.allow_division:
                raise ParseError("expected a positive integer denominator", after[2], self.text)
            return ScalarExpr(Polynomial.constant(num))
        if kind == "ident":
            if value not in self.params:
                raise UnknownIdentifier(f"unknown identifier {value!r}", pos, self.text)
            return ScalarExpr.symbol(value)
        if kind == "op" and value == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        if kind == "op" and value == "-":
            return -self.base()
        if kind == "end":
            raise ParseError("unexpected end of input", pos, self.text)
        raise ParseError(f"unexpected token {value!r}", pos, self.text)


def parse_scalar(text: str, params: Iterable[str] = (), *, allow_division: bool = False) -> ScalarExpr:
    """Parse ``text`` into an exact expression over the given parameter names."""
    return _Parser(text, params, allow_division).parse()


def parse_polynomial(text: str, params: Iterable[str] = ()) -> Polynomial:
    return parse_scalar(text, params).num
