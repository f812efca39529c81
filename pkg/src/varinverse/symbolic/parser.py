"""Recursive-descent parser for the scalar-field expression language.

Grammar (ASCII, whitespace ignored)::

    expr     := term (('+' | '-') term)*
    term     := '-' term | product
    product  := factor (('*' | '/') signed)*
    signed   := '-' signed | factor
    factor   := atom ('^' exponent)?
    exponent := '-' exponent | factor          (right-associative)
    atom     := number | ident | func '(' expr ')' | '(' expr ')'
    ident    := ('x' | 'y') digit+
    func     := sqrt | sin | cos | exp | log

A leading minus applies to the whole product that follows it, so
``-y1*y2/x2`` is ``Neg(Div(Mul(y1, y2), x2))`` and ``-y1^2`` is
``-(y1^2)``.
"""

from __future__ import annotations

import re

from .expr import FUNCTIONS, Add, Const, CoordIndex, Div, Expr, Func, Kind, Mul, Neg, Pow, Sub, Var


class ExprSyntaxError(ValueError):
    """Malformed expression text; ``offset`` is the byte offset of the problem."""

    def __init__(self, message: str, offset: int, text: str = ""):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.text = text


class IndexOutOfRange(ValueError):
    """A coordinate index exceeds the ambient dimension."""


_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()])"
    r")"
)
_COORD = re.compile(r"([xy])(\d+)\Z")


def _tokenize(text: str):
    try:
        text.encode("ascii")
    except UnicodeEncodeError as exc:
        raise ExprSyntaxError("non-ASCII character", exc.start, text) from None
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos or m.lastgroup is None:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ExprSyntaxError(f"unexpected character {text[start]!r}", start, text)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, n: int):
        self.text = text
        self.n = n
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, value: str):
        kind, val, off = self.take()
        if val != value or kind == "end":
            found = "end of input" if kind == "end" else repr(val)
            raise ExprSyntaxError(f"expected {value!r}, found {found}", off, self.text)

    def is_op(self, *values) -> bool:
        kind, val, _ = self.peek()
        return kind == "op" and val in values

    def parse(self) -> Expr:
        e = self.expr()
        kind, val, off = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected {val!r}", off, self.text)
        return e

    def expr(self) -> Expr:
        left = self.term()
        while self.is_op("+", "-"):
            _, op, _ = self.take()
            right = self.term()
            left = Add(left, right) if op == "+" else Sub(left, right)
        return left

    def term(self) -> Expr:
        if self.is_op("-"):
            self.take()
            return Neg(self.term())
        return self.product()

    def product(self) -> Expr:
        left = self.factor()
        while self.is_op("*", "/"):
            _, op, _ = self.take()
            right = self.signed()
            left = Mul(left, right) if op == "*" else Div(left, right)
        return left

    def signed(self) -> Expr:
        if self.is_op("-"):
            self.take()
            return Neg(self.signed())
        return self.factor()

    def factor(self) -> Expr:
        base = self.atom()
        if self.is_op("^"):
            self.take()
            return Pow(base, self.exponent())
        return base

    def exponent(self) -> Expr:
        if self.is_op("-"):
            self.take()
            return Neg(self.exponent())
        return self.factor()

    def atom(self) -> Expr:
        kind, val, off = self.take()
        if kind == "number":
            return Const(float(val))
        if kind == "ident":
            if val in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Func(val, arg)
            m = _COORD.match(val)
            if m is None:
                raise ExprSyntaxError(f"unknown identifier {val!r}", off, self.text)
            index = int(m.group(2))
            if index < 1 or index > self.n:
                raise IndexOutOfRange(
                    f"{val} at offset {off}: index must be in 1..{self.n}"
                )
            kind_ = Kind.BASE if m.group(1) == "x" else Kind.FIBER
            return Var(CoordIndex(kind_, index))
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect(")")
            return e
        found = "end of input" if kind == "end" else repr(val)
        raise ExprSyntaxError(f"expected a number, coordinate or '(', found {found}", off, self.text)


def parse_expr(text: str, n: int) -> Expr:
    """Parse ``text`` into an expression over coordinates x1..xn, y1..yn."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    return _Parser(text, n).parse()
