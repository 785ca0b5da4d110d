"""Three-valued evaluation of formulas in a field model.

Connectives follow strong Kleene logic.  Quantifiers range over all elements
of a finite field.  Over an infinite field a quantifier is first offered to
the oracle registry, which recognises formula shapes with a decision
procedure behind them; otherwise witnesses are enumerated from the model's
graded element generator up to ``budget``.  An existential without a witness
and a universal without a counterexample are Unknown, never False or True.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

from ..fields.base import Elem, Field
from ..tri import FALSE, TRUE, Tri
from .ast import (
    Add, And, Const, Eq, Exists, Forall, Formula, Implies, Mul, Neg, Not, Or, Term, Var,
)
from .parser import parse

DEFAULT_BUDGET = 256


class UnboundVariable(KeyError):
    pass


class ArityError(ValueError):
    pass


def eval_term(K: Field, t: Term, env: dict) -> Elem:
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise UnboundVariable(t.name) from None
    if isinstance(t, Const):
        return K.one if t.value else K.zero
    if isinstance(t, Add):
        return eval_term(K, t.left, env) + eval_term(K, t.right, env)
    if isinstance(t, Mul):
        return eval_term(K, t.left, env) * eval_term(K, t.right, env)
    if isinstance(t, Neg):
        return -eval_term(K, t.arg, env)
    raise TypeError(f"not a term: {t!r}")


# polynomial view of a term in one distinguished variable
def term_polynomial(K: Field, t: Term, var: str, env: dict) -> dict[int, Elem]:
    if isinstance(t, Var) and t.name == var:
        return {1: K.one}
    if isinstance(t, (Var, Const)):
        return {0: eval_term(K, t, env)}
    if isinstance(t, Neg):
        return {d: -c for d, c in term_polynomial(K, t.arg, var, env).items()}
    a = term_polynomial(K, t.left, var, env)
    b = term_polynomial(K, t.right, var, env)
    out: dict[int, Elem] = {}
    if isinstance(t, Add):
        for d, c in itertools.chain(a.items(), b.items()):
            out[d] = out.get(d, K.zero) + c
    else:
        for (d1, c1), (d2, c2) in itertools.product(a.items(), b.items()):
            out[d1 + d2] = out.get(d1 + d2, K.zero) + c1 * c2
    return out


def _is_prime(n: int) -> bool:
    return n > 1 and all(n % k for k in range(2, int(n**0.5) + 1))


@dataclass(frozen=True)
class OracleVerdict:
    name: str
    verdict: Tri


def polynomial_existential(K: Field, f: Formula, env: dict) -> OracleVerdict | None:
    """exists y. P(y) = Q(y) for the one-variable shapes with a decision procedure."""
    if not (isinstance(f, Exists) and isinstance(f.body, Eq)):
        return None
    lhs = term_polynomial(K, f.body.left, f.var, env)
    rhs = term_polynomial(K, f.body.right, f.var, env)
    poly = dict(lhs)
    for d, c in rhs.items():
        poly[d] = poly.get(d, K.zero) - c
    poly = {d: c for d, c in poly.items() if not c.is_zero()}
    if not poly:
        return OracleVerdict("identity", TRUE)
    deg = max(poly)
    if deg == 0:
        return OracleVerdict("nonzero constant", FALSE)
    if deg == 1:
        return OracleVerdict("linear", TRUE)
    lead = poly[deg]
    c0 = poly.get(0, K.zero)
    if set(poly) <= {0, deg} and _is_prime(deg):
        if c0.is_zero():
            return OracleVerdict("pure power", TRUE)
        return OracleVerdict("pth_power", K.pth_power_test(-c0 / lead, deg))
    p = K.characteristic
    if deg == p and set(poly) <= {0, 1, p} and 1 in poly and (poly[1] + lead).is_zero():
        return OracleVerdict("artin_schreier", K.artin_schreier_test(-c0 / lead))
    return _root_search(K, [poly.get(d, K.zero) for d in range(deg + 1)])


def _root_search(K: Field, coeffs: list[Elem]) -> OracleVerdict | None:
    # complete for henselian rank-one places with finite residue field
    from ..topology import has_root
    from ..valuation import chain

    members = chain(K)
    v = members[0]
    if v.depth != 1 or not v.residue_field.is_finite or not all(st.certified_henselian for st in v.stages):
        return None
    r = has_root(v, coeffs)
    return None if r.is_unknown else OracleVerdict("root_search", r)


def negated_polynomial_universal(K: Field, f: Formula, env: dict) -> OracleVerdict | None:
    """forall y. ~(P(y) = Q(y)), the negation of an existential shape."""
    if not (isinstance(f, Forall) and isinstance(f.body, Not) and isinstance(f.body.arg, Eq)):
        return None
    r = polynomial_existential(K, Exists(f.var, f.body.arg), env)
    return None if r is None else OracleVerdict(r.name, ~r.verdict)


Oracle = Callable[[Field, Formula, dict], "OracleVerdict | None"]


class OracleRegistry:
    def __init__(self, oracles: list[Oracle] | None = None):
        self.oracles: list[Oracle] = list(oracles or [])

    def register(self, oracle: Oracle) -> Oracle:
        self.oracles.append(oracle)
        return oracle

    def decide(self, K: Field, f: Formula, env: dict) -> OracleVerdict | None:
        for oracle in self.oracles:
            r = oracle(K, f, env)
            if r is not None:
                return r
        return None


DEFAULT_ORACLES = OracleRegistry([polynomial_existential, negated_polynomial_universal])


class Evaluator:
    def __init__(self, K: Field, budget: int = DEFAULT_BUDGET, oracles: OracleRegistry | None = DEFAULT_ORACLES,
                 oracles_on_finite: bool = False):
        self.K = K
        self.budget = budget
        self.oracles = oracles
        self.oracles_on_finite = oracles_on_finite
        self.log: list[str] = []

    def run(self, f: Formula, env: dict) -> Tri:
        if isinstance(f, Eq):
            return Tri.of(eval_term(self.K, f.left, env) == eval_term(self.K, f.right, env))
        if isinstance(f, Not):
            return ~self.run(f.arg, env)
        if isinstance(f, And):
            left = self.run(f.left, env)
            return left if left.is_false else left & self.run(f.right, env)
        if isinstance(f, Or):
            left = self.run(f.left, env)
            return left if left.is_true else left | self.run(f.right, env)
        if isinstance(f, Implies):
            left = self.run(f.left, env)
            return TRUE if left.is_false else left.implies(self.run(f.right, env))
        if isinstance(f, (Exists, Forall)):
            return self.quantifier(f, env)
        raise TypeError(f"not a formula: {f!r}")

    def quantifier(self, f, env) -> Tri:
        K = self.K
        use_oracle = self.oracles is not None and (not K.is_finite or self.oracles_on_finite)
        if use_oracle:
            r = self.oracles.decide(K, f, env)
            if r is not None:
                self.log.append(f"oracle {r.name}: {r.verdict}")
                return r.verdict
        exists = isinstance(f, Exists)
        if K.is_finite:
            domain, exhaustive = K.elements(), True
        else:
            domain, exhaustive = itertools.islice(K.graded_elements(), self.budget), False
        seen_unknown = None
        tried = 0
        for x in domain:
            tried += 1
            v = self.run(f.body, {**env, f.var: x})
            if v.is_true if exists else v.is_false:
                return v
            if v.is_unknown and seen_unknown is None:
                seen_unknown = v
        if seen_unknown is not None:
            return seen_unknown
        if exhaustive:
            return FALSE if exists else TRUE
        what = "witness" if exists else "counterexample"
        return Tri.unknown(f"no {what} for {f.var} among {tried} enumerated elements", budget=self.budget)


def _coerce_assignment(K: Field, assignment) -> dict:
    env = {}
    for k, val in (assignment or {}).items():
        env[k] = val if isinstance(val, Elem) else K.parse(val) if isinstance(val, str) else K(val)
    return env


def evaluate(K: Field, formula: Formula | str, assignment: dict | None = None, budget: int = DEFAULT_BUDGET,
             oracles: OracleRegistry | None = DEFAULT_ORACLES, oracles_on_finite: bool = False) -> Tri:
    if isinstance(formula, str):
        formula = parse(formula)
    env = _coerce_assignment(K, assignment)
    missing = formula.free_vars() - set(env)
    if missing:
        raise UnboundVariable(", ".join(sorted(missing)))
    return Evaluator(K, budget, oracles, oracles_on_finite).run(formula, env)


def brute_force(K: Field, formula: Formula, assignment: dict | None = None) -> bool:
    """Two-valued reference semantics by exhaustive search; finite fields only."""
    if not K.is_finite:
        raise ValueError("brute force needs a finite field")
    elements = list(K.elements())

    def go(f, env) -> bool:
        if isinstance(f, Eq):
            return eval_term(K, f.left, env) == eval_term(K, f.right, env)
        if isinstance(f, Not):
            return not go(f.arg, env)
        if isinstance(f, And):
            return go(f.left, env) and go(f.right, env)
        if isinstance(f, Or):
            return go(f.left, env) or go(f.right, env)
        if isinstance(f, Implies):
            return (not go(f.left, env)) or go(f.right, env)
        pick = any if isinstance(f, Exists) else all
        return pick(go(f.body, {**env, f.var: x}) for x in elements)

    return go(formula, _coerce_assignment(K, assignment))


def defined_set(K: Field, formula: Formula | str, budget: int = DEFAULT_BUDGET) -> Callable[[Elem], Tri]:
    """x -> eval(K, formula, {x}) for a formula with exactly one free variable."""
    if isinstance(formula, str):
        formula = parse(formula)
    free = formula.free_vars()
    if len(free) != 1:
        raise ArityError(f"expected one free variable, found {sorted(free)}")
    (name,) = free

    def member(x) -> Tri:
        return evaluate(K, formula, {name: x}, budget)

    member.variable = name
    return member


def normalize(f: Formula) -> Formula:
    """Rename bound variables to _0, _1, ... in order of binding."""
    counter = itertools.count()

    def rt(t, ren):
        if isinstance(t, Var):
            return Var(ren.get(t.name, t.name))
        if isinstance(t, Neg):
            return Neg(rt(t.arg, ren))
        if isinstance(t, (Add, Mul)):
            return type(t)(rt(t.left, ren), rt(t.right, ren))
        return t

    def go(f, ren):
        if isinstance(f, Eq):
            return Eq(rt(f.left, ren), rt(f.right, ren))
        if isinstance(f, Not):
            return Not(go(f.arg, ren))
        if isinstance(f, (And, Or, Implies)):
            return type(f)(go(f.left, ren), go(f.right, ren))
        new = f"_{next(counter)}"
        return type(f)(new, go(f.body, {**ren, f.var: new}))

    return go(f, {})


def shape(f: Formula) -> str:
    return str(normalize(f))
