"""Ring-language formulas: syntax tree, parser, printer and evaluator."""
from .ast import (
    ONE, ZERO, Add, And, Const, Eq, Exists, Forall, Formula, Implies, Mul, Neg, Not, Or, Term, Var,
    numeral, power,
)
from .evaluate import (
    DEFAULT_ORACLES, ArityError, Evaluator, OracleRegistry, OracleVerdict, UnboundVariable,
    brute_force, defined_set, eval_term, evaluate, normalize, shape,
)
from .parser import FormulaSyntaxError, parse, parse_term, tokenize
from .printer import print_formula, print_term

__all__ = [
    "ONE", "ZERO", "Add", "And", "Const", "Eq", "Exists", "Forall", "Formula", "Implies", "Mul", "Neg",
    "Not", "Or", "Term", "Var", "numeral", "power", "DEFAULT_ORACLES", "ArityError", "Evaluator",
    "OracleRegistry", "OracleVerdict", "UnboundVariable", "brute_force", "defined_set", "eval_term",
    "evaluate", "normalize", "shape", "FormulaSyntaxError", "parse", "parse_term", "tokenize",
    "print_formula", "print_term",
]
