"""Recursive-descent parser for the expression DSL.

Grammar (whitespace insignificant, ``#`` starts a comment)::

    sum     := product (('+' | '-') product)*
    product := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' unary)?          # right-associative
    atom    := NUMBER | IDENT | IDENT '(' sum ')' | '(' sum ')'

Numbers are integers or decimals; ``p/q`` folds to an exact rational.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from . import nodes as N
from .nodes import Expr

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<num>\d+(?:\.\d*)?|\.\d+)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.message = message
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at column {pos + 1}: {text!r}")


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind != "ws":
            toks.append(_Tok(kind, m.group(), pos))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, vars: Sequence[str], constants: Mapping[str, Expr]):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.vars = set(vars)
        self.constants = constants

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, message: str, tok: _Tok | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, self.text, tok.pos)

    def take(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.take(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")

    def parse(self) -> Expr:
        if self.tok.kind == "end":
            raise self.error("empty expression")
        e = self.sum()
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}")
        return e

    def sum(self) -> Expr:
        e = self.product()
        while True:
            if self.take("+"):
                e = N.add(e, self.product())
            elif self.take("-"):
                e = N.add(e, N.neg(self.product()))
            else:
                return e

    def product(self) -> Expr:
        e = self.unary()
        while True:
            if self.take("*"):
                e = N.mul(e, self.unary())
            elif self.tok.kind == "op" and self.tok.text == "/":
                tok = self.tok
                self.i += 1
                den = self.unary()
                if N.is_const(den, 0):
                    raise self.error("division by literal zero", tok)
                e = N.div(e, den)
            else:
                return e

    def unary(self) -> Expr:
        if self.take("-"):
            return N.neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            tok = self.tok
            self.i += 1
            try:
                return N.power(base, self.unary())
            except ZeroDivisionError:
                raise self.error("zero raised to a negative power", tok) from None
        return base

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return N.Const(Fraction(tok.text))
        if tok.kind == "ident":
            self.i += 1
            if self.tok.kind == "op" and self.tok.text == "(":
                if tok.text not in N.FUNCTIONS:
                    raise self.error(f"unknown function {tok.text!r}", tok)
                self.i += 1
                arg = self.sum()
                if self.tok.kind == "op" and self.tok.text == ",":
                    raise self.error(f"{tok.text} takes exactly one argument")
                self.expect(")")
                return N.call(tok.text, arg)
            if tok.text in self.vars:
                return N.Var(tok.text)
            if tok.text in self.constants:
                return self.constants[tok.text]
            if tok.text in N.FUNCTIONS:
                raise self.error(f"{tok.text} takes exactly one argument", tok)
            raise self.error(f"undeclared identifier {tok.text!r}", tok)
        if self.take("("):
            e = self.sum()
            self.expect(")")
            return e
        raise self.error(f"unexpected {tok.text or 'end of input'!r}")


def parse(text: str, vars: Sequence[str] = (), constants: Mapping[str, Expr] | None = None) -> Expr:
    """Parse DSL text into an expression over ``vars``.

    ``constants`` maps extra identifiers (named parameters) to the
    expressions they stand for.
    """
    if len(set(vars)) != len(vars):
        raise ValueError(f"duplicate variable names in {list(vars)}")
    return _Parser(text, vars, constants or {}).parse()
