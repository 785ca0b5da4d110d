import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pcanon import zoo
from pcanon.fields import FiniteField, PAdicField, Rationals
from pcanon.formula import (
    Eq, Exists, FormulaSyntaxError, UnboundVariable, Var, brute_force, defined_set, evaluate, normalize, parse,
    parse_term, print_formula, numeral,
)
from pcanon.formula.corpus import corpus, random_formula

from oracles import is_cube_q3, is_square_q2


@settings(max_examples=300)
@given(st.integers(0, 10**9), st.integers(0, 3), st.integers(0, 4))
def test_print_parse_round_trip(seed, qdepth, size):
    f = random_formula(random.Random(seed), ["x", "x2"], qdepth=qdepth, size=size, p=3)
    assert parse(print_formula(f)) == f


@settings(max_examples=200)
@given(st.integers(0, 10**9))
def test_normalize_is_idempotent_and_preserves_printing_round_trip(seed):
    f = random_formula(random.Random(seed), ["x"], qdepth=3, size=3)
    g = normalize(f)
    assert normalize(g) == g
    assert parse(print_formula(g)) == g
    assert g.free_vars() == f.free_vars()


@pytest.mark.parametrize("q", [2, 3, 4, 5, 9])
def test_evaluator_agrees_with_brute_force(q):
    K = FiniteField(q)
    fs = corpus(n=60, seed=q, p=K.characteristic)
    xs = list(K.elements())[:4]
    for f in fs:
        for x in xs:
            for use_oracles in (False, True):
                got = evaluate(K, f, {"x": x}, oracles_on_finite=use_oracles)
                assert got.definite
                assert got.is_true == brute_force(K, f, {"x": x}), print_formula(f)


def test_parser_accepts_aliases():
    a = parse("∃y. y*y = x ∧ ¬(x = 0)")
    b = parse("exists y. y*y = x and not (x = 0)")
    assert a == b
    assert parse("exists y, z. y = z") == Exists("y", Exists("z", Eq(Var("y"), Var("z"))))
    assert parse("x != 1") == parse("~(x = 1)")
    assert parse_term("3") == numeral(3)


def test_implication_is_right_associative():
    assert print_formula(parse("x = 0 -> x = 1 -> x = 2")) == "x = 0 -> x = 1 -> x = 2"
    assert parse("(x = 0 -> x = 1) -> x = 2") != parse("x = 0 -> x = 1 -> x = 2")


@pytest.mark.parametrize("text,offset", [("x = = y", 4), ("exists . x = 0", 7), ("x +", 3), ("(x = y", 6)])
def test_syntax_errors_report_offsets(text, offset):
    with pytest.raises(FormulaSyntaxError) as e:
        parse(text)
    assert e.value.offset == offset


def test_unbound_variable():
    with pytest.raises(UnboundVariable):
        evaluate(FiniteField(3), "y = x", {"x": 1})


@settings(max_examples=100, deadline=None)
@given(st.fractions(max_denominator=50).filter(lambda q: q != 0))
def test_square_oracle_on_q2(x):
    got = evaluate(zoo.load("q2"), "exists y. y^2 = x", {"x": x})
    assert got.definite and got.is_true == is_square_q2(x)


@settings(max_examples=60, deadline=None)
@given(st.integers(-300, 300).filter(bool))
def test_cube_oracle_on_q3(n):
    got = evaluate(PAdicField(3, precision=32), "exists y. y^3 = x", {"x": n})
    assert got.definite and got.is_true == is_cube_q3(Fraction(n))


def test_artin_schreier_oracle_on_laurent_series():
    K = zoo.load("f2_t")
    t = K.variable("t")
    assert evaluate(K, "exists y. y^2 + y = x", {"x": t}).is_true
    assert evaluate(K, "exists y. y^2 + y = x", {"x": t.inverse()}).is_false


def test_root_search_oracle_on_q2():
    K = zoo.load("q2")
    assert evaluate(K, "exists y. y^3 + y + 1 = 0").definite
    assert evaluate(K, "exists y. y^2 + y + 2 = 0").is_true
    assert evaluate(K, "exists y. y^2 + y + 1 = 0").is_false


def test_search_failure_is_unknown_not_false():
    got = evaluate(Rationals(), "exists y. y^3 + y = x + 7", {"x": 1}, budget=64)
    assert got.is_unknown


def test_universal_via_negated_oracle():
    assert evaluate(Rationals(), "forall y. y^2 != x", {"x": 2}).is_true
    assert evaluate(Rationals(), "forall y. y^2 != x", {"x": 4}).is_false


def test_defined_set_of_squares_in_f9():
    K = FiniteField(9)
    S = defined_set(K, "exists y. y^2 = x")
    assert S.variable == "x"
    assert sum(S(a).is_true for a in K.elements()) == 5


def test_examples():
    assert evaluate(FiniteField(5), "exists y. y^2 = x", {"x": 4}).is_true
    assert evaluate(zoo.load("q2"), "exists y. y^2 = x", {"x": 17}).is_true
    assert evaluate(zoo.load("q2"), "exists y. y^2 = x", {"x": 5}).is_false
    assert evaluate(FiniteField(7), "x*0 = 1", {"x": 3}).is_false
