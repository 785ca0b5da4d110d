"""Deterministic random formulas for differential testing of the evaluator."""
from __future__ import annotations

import random

from .ast import Add, And, Eq, Exists, Forall, Formula, Implies, Mul, Neg, Not, Or, Term, Var, numeral, power

_BOUND = ("y", "z", "w")


def random_term(rng: random.Random, names: list[str], depth: int = 2) -> Term:
    if depth == 0 or rng.random() < 0.3:
        if names and rng.random() < 0.7:
            return Var(rng.choice(names))
        return numeral(rng.randrange(4))
    k = rng.randrange(4)
    if k == 0:
        return Add(random_term(rng, names, depth - 1), random_term(rng, names, depth - 1))
    if k == 1:
        return Mul(random_term(rng, names, depth - 1), random_term(rng, names, depth - 1))
    if k == 2:
        return Neg(random_term(rng, names, depth - 1))
    return power(Var(rng.choice(names)) if names else numeral(2), rng.choice((2, 3)))


def _shaped(rng: random.Random, var: str, names: list[str], p: int) -> Formula:
    """An existential of a shape the oracle registry recognises."""
    rhs = random_term(rng, names, 1)
    y = Var(var)
    if rng.random() < 0.5:
        return Exists(var, Eq(power(y, rng.choice((2, 3, p))), rhs))
    return Exists(var, Eq(Add(power(y, p), Neg(y)), rhs))


def random_formula(rng: random.Random, free: list[str], qdepth: int = 3, size: int = 3, p: int = 2) -> Formula:
    """A formula with free variables among ``free`` and quantifier depth <= qdepth."""
    if size == 0 or rng.random() < 0.2:
        if qdepth and rng.random() < 0.3:
            return _shaped(rng, _BOUND[len(_BOUND) - qdepth], free, p)
        return Eq(random_term(rng, free), random_term(rng, free))
    k = rng.randrange(6)
    if k == 0:
        return Not(random_formula(rng, free, qdepth, size - 1, p))
    if k in (1, 2, 3):
        cls = (And, Or, Implies)[k - 1]
        return cls(random_formula(rng, free, qdepth, size - 1, p), random_formula(rng, free, qdepth, size - 1, p))
    if qdepth == 0:
        return Eq(random_term(rng, free), random_term(rng, free))
    var = _BOUND[len(_BOUND) - qdepth]
    cls = Exists if k == 4 else Forall
    return cls(var, random_formula(rng, free + [var], qdepth - 1, size - 1, p))


def corpus(n: int = 200, seed: int = 0, free=("x",), qdepth: int = 3, p: int = 2) -> list[Formula]:
    rng = random.Random(seed)
    return [random_formula(rng, list(free), qdepth, 4, p) for _ in range(n)]
