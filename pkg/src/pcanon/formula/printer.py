"""Minimal-parenthesis printing; output reparses to the same tree."""
from __future__ import annotations

from .ast import (
    Add, And, Const, Eq, Exists, Forall, Formula, Implies, Mul, Neg, Not, Or, Term, Var,
    as_numeral, as_power,
)

# term precedence
_SUM, _PROD, _UNARY, _ATOM = 1, 2, 3, 4


def _term(t: Term) -> tuple[str, int]:
    n = as_numeral(t)
    if n is not None:
        return str(n), _ATOM
    if isinstance(t, Var):
        return t.name, _ATOM
    if isinstance(t, Const):
        return str(t.value), _ATOM
    if isinstance(t, Add):
        left = _wrap(t.left, _SUM)
        if isinstance(t.right, Neg):
            return f"{left} - {_wrap(t.right.arg, _PROD)}", _SUM
        return f"{left} + {_wrap(t.right, _PROD)}", _SUM
    if isinstance(t, Mul):
        pw = as_power(t)
        if pw is not None:
            return f"{pw[0].name}^{pw[1]}", _ATOM
        return f"{_wrap(t.left, _PROD)} * {_wrap(t.right, _UNARY)}", _PROD
    if isinstance(t, Neg):
        return f"-{_wrap(t.arg, _UNARY)}", _UNARY
    raise TypeError(f"not a term: {t!r}")


def _wrap(t: Term, level: int) -> str:
    s, prec = _term(t)
    return s if prec >= level else f"({s})"


def print_term(t: Term) -> str:
    return _term(t)[0]


# formula precedence
_QUANT, _IMP, _OR, _AND, _NOT, _FATOM = 0, 1, 2, 3, 4, 5


def _formula(f: Formula) -> tuple[str, int]:
    if isinstance(f, Eq):
        return f"{print_term(f.left)} = {print_term(f.right)}", _FATOM
    if isinstance(f, Not):
        if isinstance(f.arg, Eq):
            return f"{print_term(f.arg.left)} != {print_term(f.arg.right)}", _FATOM
        return f"~{_fwrap(f.arg, _NOT)}", _NOT
    if isinstance(f, Exists):
        return f"exists {f.var}. {print_formula(f.body)}", _QUANT
    if isinstance(f, Forall):
        return f"forall {f.var}. {print_formula(f.body)}", _QUANT
    if isinstance(f, Implies):
        return f"{_fwrap(f.left, _IMP + 1)} -> {_fwrap(f.right, _IMP)}", _IMP
    for cls, op, level in ((Or, "|", _OR), (And, "&", _AND)):
        if isinstance(f, cls):
            return f"{_fwrap(f.left, level)} {op} {_fwrap(f.right, level + 1)}", level
    raise TypeError(f"not a formula: {f!r}")


def _fwrap(f: Formula, level: int) -> str:
    s, prec = _formula(f)
    return s if prec >= level else f"({s})"


def print_formula(f: Formula) -> str:
    return _formula(f)[0]
