from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pcanon import zoo
from pcanon.fields import FiniteField, PAdicField, Rationals
from pcanon.topology import (
    TopologyError, ball_basis, basis_from_descriptor, check_axioms, contained, discrete_basis, has_root,
    parse_polynomial, rational_ball_basis, thm54_construct, topologies_equivalent, u_f_a, ufa_basis,
)
from pcanon.valuation import Valuation, chain

from oracles import is_cube_q3, is_square_q2


def _native(name):
    K = zoo.load(name)
    return K, chain(K)[0]


@settings(max_examples=60, deadline=None)
@given(st.integers(-400, 400).filter(bool))
def test_root_search_squares_q2(n):
    K, v = _native("q2")
    assert has_root(v, parse_polynomial(K, f"X^2 - ({n})")).is_true == is_square_q2(Fraction(n))


@settings(max_examples=40, deadline=None)
@given(st.integers(-300, 300).filter(bool))
def test_root_search_cubes_q3(n):
    K = PAdicField(3, precision=32)
    v = chain(K)[0]
    assert has_root(v, parse_polynomial(K, f"X^3 - ({n})")).is_true == is_cube_q3(Fraction(n))


def test_root_search_finite_field_is_exhaustive():
    K = FiniteField(7)
    v = chain(K)[0]
    assert has_root(v, parse_polynomial(K, "X^2 + 1")).is_false
    assert has_root(v, parse_polynomial(K, "X^2 - 2")).is_true


def test_ball_containment_is_exact():
    K, v = _native("q2")
    B = ball_basis(v)
    assert contained(B.set(3), B.set(1)).is_true
    assert contained(B.set(1), B.set(3)).is_false


def test_ball_containment_across_a_composite_chain():
    K = zoo.load("rcf_sq_t")
    fine, coarse = chain(K)[0], chain(K)[1]
    assert topologies_equivalent(ball_basis(coarse), ball_basis(fine), depth=4).verdict.is_true


def test_ball_axioms_q2():
    rep = check_axioms(ball_basis(chain(zoo.load("q2"))[0]), samples=150, n_max=2)
    assert rep.ok, rep.to_json()


def test_discrete_basis_fails_first_axiom():
    rep = check_axioms(discrete_basis(zoo.load("q2")), samples=50, n_max=1)
    assert rep["1"].verdict.is_false


def test_trivial_valuation_basis_fails_first_axiom():
    K = zoo.load("q2")
    rep = check_axioms(ball_basis(Valuation(K, 0)), samples=50, n_max=1)
    assert rep["1"].verdict.is_false


def test_padic_balls_on_q_are_inequivalent():
    Q = Rationals()
    rep = topologies_equivalent(rational_ball_basis(Q, 2), rational_ball_basis(Q, 3), depth=3, samples=32)
    assert rep.verdict.is_false and rep.failures


def test_ufa_preconditions():
    K, v = _native("q2")
    with pytest.raises(TopologyError):
        u_f_a(v, "X^2 - 1", 3)      # reducible
    with pytest.raises(TopologyError):
        u_f_a(v, "X - 5", 1)        # degree one
    with pytest.raises(TopologyError):
        u_f_a(v, "X^2 - 5", 0)      # f'(a) = 0


def test_ufa_contains_zero_and_f_values():
    K, v = _native("q2")
    U = u_f_a(v, "X^2 - 5", 1)
    assert U.member(K.zero).is_true
    for x in (3, 7, Fraction(1, 3)):
        fx = K(x) ** 2 - 5
        assert U.member(fx.inverse() - K(-4).inverse()).is_true


def test_ufa_equivalent_to_balls_small_depth():
    K, v = _native("q2")
    rep = topologies_equivalent(ufa_basis(v, "X^2 - 5", 1), ball_basis(v), depth=3, samples=48)
    assert rep.verdict.is_true, rep.to_json()


def test_descriptors():
    K = zoo.load("q2")
    assert basis_from_descriptor(K, {"kind": "balls"}).kind == "balls"
    assert basis_from_descriptor(K, {"kind": "ufa", "f": "X^2 - 5", "a": "1"}).kind == "ufa"
    with pytest.raises(TopologyError):
        basis_from_descriptor(K, {"kind": "cones"})


def test_construction_from_extensions():
    K = zoo.load("q2")
    res = thm54_construct(K, [K], 2, depth=3, samples=32)
    assert res(K(3)) and not res(K(Fraction(1, 2)))
    assert res.ring_check.is_true
    assert res.equivalence.verdict.is_true
    with pytest.raises(TopologyError):
        thm54_construct(K, [], 2)
