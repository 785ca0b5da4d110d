import pytest
from hypothesis import given, strategies as st

from pcanon.tri import FALSE, TRUE, Tri, all_of, any_of

tris = st.sampled_from([TRUE, FALSE, Tri.unknown("budget")])


def refinements(t):
    return [TRUE, FALSE] if t.is_unknown else [t]


@given(tris, tris)
def test_de_morgan(a, b):
    assert (~(a & b)).value == ((~a) | (~b)).value
    assert (~(a | b)).value == ((~a) & (~b)).value


@given(tris, tris)
def test_kleene_monotone(a, b):
    # refining an Unknown argument never flips a definite result
    for op in (lambda x, y: x & y, lambda x, y: x | y, lambda x, y: x.implies(y)):
        r = op(a, b)
        if r.definite:
            for a2 in refinements(a):
                for b2 in refinements(b):
                    assert op(a2, b2).value == r.value


def test_unknown_refuses_bool():
    with pytest.raises(ValueError):
        bool(Tri.unknown("x"))


def test_folds():
    assert all_of([]).is_true and any_of([]).is_false
    assert all_of([TRUE, Tri.unknown("u")]).is_unknown
    assert all_of([Tri.unknown("u"), FALSE]).is_false
    assert any_of([Tri.unknown("u"), TRUE]).is_true


def test_json():
    assert TRUE.to_json() == {"verdict": True}
    assert Tri.unknown("r", steps=3).to_json() == {"verdict": "unknown", "reason": "r", "budget": {"steps": 3}}
