"""Recursive-descent parser for the text syntax.

Grammar (lowest precedence first)::

    formula  := quant | implies
    quant    := ("exists" | "forall") var ("," var)* "." formula
    implies  := or ("->" implies)?
    or       := and ("|" and)*
    and      := unary ("&" unary)*
    unary    := "~" unary | "(" formula ")" | quant | term ("=" | "!=") term
    term     := product (("+" | "-") product)*
    product  := factor ("*" factor)*
    factor   := "-" factor | atom ("^" INT)?
    atom     := var | INT | "(" term ")"

Unicode forms of the connectives and quantifiers are accepted, as are the
keywords ``not``, ``and``, ``or``.  Integer literals become 1 + ... + 1 and
powers become repeated products, so the tree uses only the ring signature.
"""
from __future__ import annotations

import re

from .ast import (
    Add, And, Eq, Exists, Forall, Formula, Implies, Mul, Neg, Not, Or, Term, Var,
    numeral, power,
)


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, offset: int, text: str):
        self.offset = offset
        self.text = text
        super().__init__(f"{message} at offset {offset}")


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op>->|!=|[()+\-*^=.,~&|¬∧∨→∃∀])
""", re.VERBOSE)

_ALIASES = {"¬": "~", "not": "~", "∧": "&", "and": "&", "∨": "|", "or": "|",
            "→": "->", "∃": "exists", "∀": "forall"}
_KEYWORDS = {"exists", "forall", "~", "&", "|"}
_AFTER_TERM = {"=", "!=", "+", "-", "*", "^"}


def tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    i = 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[i]!r}", i, text)
        kind = m.lastgroup
        val = m.group()
        if kind != "ws":
            val = _ALIASES.get(val, val)
            if kind == "name" and val in _KEYWORDS:
                kind = "op"
            out.append((kind, val, i))
        i = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    # helpers
    @property
    def tok(self):
        return self.toks[self.i]

    def peek(self, k: int = 0):
        return self.toks[min(self.i + k, len(self.toks) - 1)][1]

    def error(self, message: str):
        return FormulaSyntaxError(message, self.tok[2], self.text)

    def expect(self, val: str):
        if self.tok[1] != val or self.tok[0] == "end":
            found = self.tok[1] or "end of input"
            raise self.error(f"expected {val!r}, found {found!r}")
        self.i += 1

    def accept(self, val: str) -> bool:
        if self.tok[0] != "end" and self.tok[1] == val:
            self.i += 1
            return True
        return False

    # formulas
    def formula(self) -> Formula:
        if self.peek() in ("exists", "forall"):
            return self.quant()
        return self.implies()

    def quant(self) -> Formula:
        kind = Exists if self.tok[1] == "exists" else Forall
        self.i += 1
        names = [self.var_name()]
        while self.accept(","):
            names.append(self.var_name())
        self.expect(".")
        body = self.formula()
        for n in reversed(names):
            body = kind(n, body)
        return body

    def var_name(self) -> str:
        if self.tok[0] != "name":
            raise self.error("expected a variable")
        name = self.tok[1]
        self.i += 1
        return name

    def implies(self) -> Formula:
        left = self.disj()
        if self.accept("->"):
            return Implies(left, self.formula())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.accept("|"):
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.accept("&"):
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        if self.accept("~"):
            return Not(self.unary())
        if self.peek() in ("exists", "forall"):
            return self.quant()
        if self.peek() == "(":
            save = self.i
            first = None
            try:
                self.i += 1
                f = self.formula()
                self.expect(")")
                if self.peek() not in _AFTER_TERM:
                    return f
            except FormulaSyntaxError as e:
                first = e
            self.i = save
            try:
                return self.equation()
            except FormulaSyntaxError as e:
                # report whichever reading got further
                if first is not None and first.offset > e.offset:
                    raise first from None
                raise
        return self.equation()

    def equation(self) -> Formula:
        left = self.term()
        if self.accept("="):
            return Eq(left, self.term())
        if self.accept("!="):
            return Not(Eq(left, self.term()))
        found = self.tok[1] or "end of input"
        raise self.error(f"expected '=' or '!=', found {found!r}")

    # terms
    def term(self) -> Term:
        t = self.product()
        while True:
            if self.accept("+"):
                t = Add(t, self.product())
            elif self.peek() == "-" and self.tok[0] == "op":
                self.i += 1
                t = Add(t, Neg(self.product()))
            else:
                return t

    def product(self) -> Term:
        t = self.factor()
        while self.accept("*"):
            t = Mul(t, self.factor())
        return t

    def factor(self) -> Term:
        if self.accept("-"):
            return Neg(self.factor())
        a = self.atom()
        if self.accept("^"):
            if self.tok[0] != "int":
                raise self.error("expected an integer exponent")
            n = int(self.tok[1])
            if n < 1:
                raise self.error("exponent must be positive")
            self.i += 1
            a = power(a, n)
        return a

    def atom(self) -> Term:
        kind, val, _ = self.tok
        if kind == "name":
            self.i += 1
            return Var(val)
        if kind == "int":
            self.i += 1
            return numeral(int(val))
        if self.accept("("):
            t = self.term()
            self.expect(")")
            return t
        raise self.error(f"unexpected {val or 'end of input'!r}")


def parse(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    if p.tok[0] != "end":
        raise p.error(f"unexpected {p.tok[1]!r}")
    return f


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    if p.tok[0] != "end":
        raise p.error(f"unexpected {p.tok[1]!r}")
    return t
