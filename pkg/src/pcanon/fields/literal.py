"""Element literal syntax shared by all field kinds.

A literal is an arithmetic expression over integers and the field's named
generators: ``2 + s + t``, ``t^2*s^-1``, ``3*t^(1/2) - 1/5``.  Rational
exponents are only accepted on bare generators (Hahn series).  A p-adic digit
string ``...1101`` stands for the integer with those base-p digits.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .base import Elem, FieldError

_TOKEN = re.compile(r"\s*(?:(\.\.\.[0-9]+)|([0-9]+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text: str):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.end() == pos:
            break
        if m.group(1):
            out.append(("digits", m.group(1)[3:], m.start(1)))
        elif m.group(2):
            out.append(("int", m.group(2), m.start(2)))
        elif m.group(3):
            out.append(("name", m.group(3), m.start(3)))
        elif m.group(4):
            out.append(("op", m.group(4), m.start(4)))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, field, text):
        self.field = field
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def error(self, msg):
        pos = self.toks[self.i][2] if self.i < len(self.toks) else len(self.text)
        raise FieldError(f"bad literal {self.text!r} at offset {pos}: {msg}")

    def peek(self, value=None):
        if self.i >= len(self.toks):
            return None
        tok = self.toks[self.i]
        if value is not None and tok[1] != value:
            return None
        return tok

    def take(self, value=None):
        tok = self.peek(value)
        if tok is None:
            self.error(f"expected {value!r}" if value else "unexpected end")
        self.i += 1
        return tok

    def expr(self) -> Elem:
        sign = 1
        if self.peek("-"):
            self.take()
            sign = -1
        elif self.peek("+"):
            self.take()
        acc = self.term()
        if sign < 0:
            acc = -acc
        while self.peek("+") or self.peek("-"):
            op = self.take()[1]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> Elem:
        acc = self.factor()
        while self.peek("*") or self.peek("/"):
            op = self.take()[1]
            rhs = self.factor()
            acc = acc * rhs if op == "*" else acc / rhs
        return acc

    def exponent(self) -> Fraction:
        if self.peek("("):
            self.take()
            sign = -1 if self.peek("-") and self.take() else 1
            num = int(self.take()[1])
            den = 1
            if self.peek("/"):
                self.take()
                den = int(self.take()[1])
            self.take(")")
            return sign * Fraction(num, den)
        sign = -1 if self.peek("-") and self.take() else 1
        tok = self.take()
        if tok[0] != "int":
            self.error("exponent must be an integer or a parenthesized fraction")
        return Fraction(sign * int(tok[1]))

    def factor(self) -> Elem:
        if self.peek("-"):
            self.take()
            return -self.factor()
        tok = self.take()
        kind, val, _ = tok
        if kind == "int":
            base = self.field(int(val))
            name = None
        elif kind == "digits":
            p = getattr(self.field, "residue_char", None) or self.field.characteristic
            if not p:
                self.error("digit strings need a p-adic field")
            base = self.field(int(val, p))
            name = None
        elif kind == "name":
            name = val
            base = None
        elif val == "(":
            base = self.expr()
            self.take(")")
            name = None
        else:
            self.error(f"unexpected {val!r}")
        if self.peek("^"):
            self.take()
            e = self.exponent()
            if name is not None:
                return self.field.variable_power(name, e)
            if e.denominator != 1:
                self.error("rational exponent on a compound base")
            return base ** int(e)
        if name is not None:
            return self.field.variable(name)
        return base


def evaluate(field, text: str) -> Elem:
    parser = _Parser(field, text)
    if not parser.toks:
        raise FieldError("empty literal")
    out = parser.expr()
    if parser.i != len(parser.toks):
        parser.error("trailing input")
    return out
