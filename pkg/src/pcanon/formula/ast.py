"""Abstract syntax for ring-language terms and formulas."""
from __future__ import annotations

from dataclasses import dataclass


class Term:
    __slots__ = ()

    def free_vars(self) -> frozenset[str]:
        raise NotImplementedError

    def __str__(self) -> str:
        from .printer import print_term

        return print_term(self)


@dataclass(frozen=True)
class Var(Term):
    name: str

    def free_vars(self):
        return frozenset({self.name})


@dataclass(frozen=True)
class Const(Term):
    value: int  # 0 or 1

    def __post_init__(self):
        if self.value not in (0, 1):
            raise ValueError("ring constants are 0 and 1")

    def free_vars(self):
        return frozenset()


@dataclass(frozen=True)
class Add(Term):
    left: Term
    right: Term

    def free_vars(self):
        return self.left.free_vars() | self.right.free_vars()


@dataclass(frozen=True)
class Mul(Term):
    left: Term
    right: Term

    def free_vars(self):
        return self.left.free_vars() | self.right.free_vars()


@dataclass(frozen=True)
class Neg(Term):
    arg: Term

    def free_vars(self):
        return self.arg.free_vars()


ZERO = Const(0)
ONE = Const(1)


def numeral(n: int) -> Term:
    """n as 1 + 1 + ... + 1 (left associated); negative n via Neg."""
    if n < 0:
        return Neg(numeral(-n))
    if n <= 1:
        return Const(n)
    t: Term = ONE
    for _ in range(n - 1):
        t = Add(t, ONE)
    return t


def power(t: Term, n: int) -> Term:
    if n < 1:
        raise ValueError("exponent must be positive")
    out = t
    for _ in range(n - 1):
        out = Mul(out, t)
    return out


def as_numeral(t: Term) -> int | None:
    """Inverse of :func:`numeral` for n >= 2."""
    n = 0
    while isinstance(t, Add) and t.right == ONE:
        n += 1
        t = t.left
    if n and t == ONE:
        return n + 1
    return None


def as_power(t: Term) -> tuple[Var, int] | None:
    """Inverse of :func:`power` on a variable, for exponents >= 2."""
    factors = []
    while isinstance(t, Mul):
        factors.append(t.right)
        t = t.left
    factors.append(t)
    if len(factors) > 1 and isinstance(t, Var) and all(f == t for f in factors):
        return t, len(factors)
    return None


class Formula:
    __slots__ = ()

    def free_vars(self) -> frozenset[str]:
        raise NotImplementedError

    @property
    def is_sentence(self) -> bool:
        return not self.free_vars()

    def quantifier_depth(self) -> int:
        raise NotImplementedError

    def __str__(self) -> str:
        from .printer import print_formula

        return print_formula(self)


@dataclass(frozen=True)
class Eq(Formula):
    left: Term
    right: Term

    def free_vars(self):
        return self.left.free_vars() | self.right.free_vars()

    def quantifier_depth(self):
        return 0


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula

    def free_vars(self):
        return self.arg.free_vars()

    def quantifier_depth(self):
        return self.arg.quantifier_depth()


@dataclass(frozen=True)
class _Binary(Formula):
    left: Formula
    right: Formula

    def free_vars(self):
        return self.left.free_vars() | self.right.free_vars()

    def quantifier_depth(self):
        return max(self.left.quantifier_depth(), self.right.quantifier_depth())


class And(_Binary):
    pass


class Or(_Binary):
    pass


class Implies(_Binary):
    pass


@dataclass(frozen=True)
class _Quantifier(Formula):
    var: str
    body: Formula

    def free_vars(self):
        return self.body.free_vars() - {self.var}

    def quantifier_depth(self):
        return 1 + self.body.quantifier_depth()


class Exists(_Quantifier):
    pass


class Forall(_Quantifier):
    pass
