from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pcanon.ogroup import ConvexSubgroup, OrderedGroup, component_is_p_divisible

from oracles import has_p_divisible_nontrivial_convex, tags_p_divisible

TAGS = ["Z", "Q", "Z[1/2]", "Z[1/3]"]
towers = st.lists(st.sampled_from(TAGS), min_size=1, max_size=3)


def coords_for(tags, data):
    out = []
    for t in tags:
        den = {"Z": 1, "Q": data.draw(st.sampled_from([1, 2, 3, 5])), "Z[1/2]": 2, "Z[1/3]": 3}[t]
        out.append(Fraction(data.draw(st.integers(-20, 20)), den if t != "Q" else den))
    return out


@given(towers, st.sampled_from([2, 3, 5]))
def test_p_divisible_convex_matches_suffix_oracle(tags, p):
    assert OrderedGroup(tags).has_p_divisible_nontrivial_convex(p) == has_p_divisible_nontrivial_convex(tags, p)


@given(st.sampled_from(TAGS), st.sampled_from([2, 3, 5, 7]))
def test_component_divisibility(tag, p):
    assert component_is_p_divisible(tag, p) == tags_p_divisible(tag, p)


@given(towers, st.data())
def test_lex_order_is_total_and_translation_invariant(tags, data):
    G = OrderedGroup(tags)
    a, b, c = (G.element(*coords_for(tags, data)) for _ in range(3))
    assert (a < b) + (b < a) + (a == b) == 1
    if a < b:
        assert a + c < b + c
    assert (a + b) - b == a
    assert a + (-a) == G.zero()


@given(towers)
def test_convex_subgroups_are_nested(tags):
    G = OrderedGroup(tags)
    subs = G.convex_subgroups()
    assert len(subs) == len(tags) + 1
    assert subs[0].is_trivial
    for small, big in zip(subs, subs[1:]):
        assert all(g in big for g in (G.basis(i) for i in range(G.rank)) if g in small)


def test_divided_by():
    G = OrderedGroup(["Z", "Q"])
    assert G.element(2, 1).divided_by(2) == G.element(1, Fraction(1, 2))
    assert G.element(1, 1).divided_by(2) is None


def test_quotient_projection():
    G = OrderedGroup(["Z", "Q"])
    delta = G.convex_subgroups()[1]
    Q = G.quotient_by_convex(delta)
    assert Q.tower == ("Z",) or list(Q.tower) == ["Z"]
    assert G.element(3, 7).project(Q) == Q.element(3)


def test_dimension_mismatch():
    G = OrderedGroup(["Z", "Q"])
    with pytest.raises(ValueError):
        G.element(1)


@pytest.mark.parametrize("tags,p,expected", [
    (["Z"], 2, False), (["Q"], 3, True), (["Z", "Q"], 5, True), (["Q", "Z"], 2, False),
    (["Z", "Z", "Q"], 3, True),
])
def test_examples(tags, p, expected):
    assert OrderedGroup(tags).has_p_divisible_nontrivial_convex(p) is expected
