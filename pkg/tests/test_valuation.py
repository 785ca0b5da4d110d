import pytest
from hypothesis import given, settings, strategies as st

from pcanon import zoo
from pcanon.valuation import (
    HClass, ValuationError, canonical_2_star, canonical_p_henselian, chain, classify_H,
    hensel_counterexample, is_p_henselian, trivial,
)

CASES = [(n, int(p), d) for n in zoo.names() for p, d in zoo.entry(n)["expected"].items()]


@pytest.mark.parametrize("name,p,exp", CASES, ids=[f"{n}-p{p}" for n, p, _ in CASES])
def test_canonical_depth_matches_hand_analysis(name, p, exp):
    K = zoo.load(name)
    assert canonical_p_henselian(K, p).depth == exp["canonical_depth"]
    if "star_depth" in exp:
        assert canonical_2_star(K).depth == exp["star_depth"]


@pytest.mark.parametrize("name", zoo.names())
def test_chain_is_finest_first_and_ends_trivial(name):
    K = zoo.load(name)
    vs = chain(K)
    assert [v.depth for v in vs] == list(range(len(vs) - 1, -1, -1))
    assert vs[-1].is_trivial and vs[-1] == trivial(K)
    for v in vs:
        assert v.value_group.rank == v.depth


def test_composite_value_and_residue():
    K = zoo.load("rcf_sq_t")
    fine, mid, _ = chain(K)
    g = fine.value_group.element(1, 2)
    x = fine.monomial(g)
    assert fine.value(x).coords == g.coords
    assert mid.value(x).coords == (1,)
    # s^-1 lies in the t-adic ring but not in the composite one
    s_inv = fine.monomial(fine.value_group.element(0, -1))
    assert mid.in_ring(s_inv) and not fine.in_ring(s_inv)
    assert fine.in_ring(fine.monomial(fine.value_group.element(0, 1)))


def test_rcf_star_is_strictly_coarser():
    K = zoo.load("rcf_sq_t")
    assert canonical_2_star(K).depth < canonical_p_henselian(K, 2).depth


def test_q_with_2adic_valuation_is_not_henselian():
    K = zoo.load("q_v2")
    v = chain(K)[0]
    assert is_p_henselian(v, 2).is_false
    verdict, (f, root) = hensel_counterexample(v, 2)
    assert verdict.is_false
    assert [str(c) for c in f] == ["2", "1", "1"]
    with pytest.raises(ValuationError):
        classify_H(v, 2)


def test_classification_q2_and_fields_with_p_closed_residue():
    v = chain(zoo.load("q2"))[0]
    assert classify_H(v, 2) is HClass.H1
    w = chain(zoo.load("c_t"))[0]
    assert classify_H(w, 2) is HClass.H2


def test_residue_maps_are_ring_homomorphisms_on_samples():
    v = chain(zoo.load("f3_s_t"))[0]
    xs = v.ring_samples(height=3, units_per_stratum=2, seed=1)
    for a in xs[:10]:
        for b in xs[:10]:
            assert v.residue(a * b) == v.residue(a) * v.residue(b)
            assert v.residue(a + b) == v.residue(a) + v.residue(b)


@settings(max_examples=60, deadline=None)
@given(st.integers(-20, 20).filter(bool), st.integers(-20, 20).filter(bool))
def test_value_is_additive(a, b):
    K = zoo.load("q2")
    v = chain(K)[0]
    x, y = K(a), K(b)
    assert v.value(x * y).coords == (v.value(x) + v.value(y)).coords
