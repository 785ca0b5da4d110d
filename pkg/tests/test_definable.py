from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pcanon import zoo
from pcanon.definable import (
    PreconditionError, clause_branch, condition_three_holds, cor42_criterion, kummer_factor,
    lemma41_coarsening_witness, lemma43_criterion, lemma44_equiv, lemma45_criterion, obs34_epsilon,
    obs34_eta, phensel_clause, psi_dispatch,
)
from pcanon.valuation import canonical_2_star, canonical_p_henselian, chain

from oracles import is_square_q2

PSI_CASES = [(n, int(p), d) for n in zoo.names() for p, d in zoo.entry(n)["expected"].items()
             if d["branch"] != "euclidean"]
EUCLIDEAN = [n for n in zoo.names() if zoo.entry(n)["expected"].get("2", {}).get("branch") == "euclidean"]


@pytest.mark.parametrize("name,p,exp", PSI_CASES, ids=[f"{n}-p{p}" for n, p, _ in PSI_CASES])
def test_psi_holds_exactly_at_canonical_member(name, p, exp):
    K = zoo.load(name)
    assert condition_three_holds(K, p)
    for v in chain(K):
        rep = psi_dispatch(v, p)
        assert rep.verdict.definite, (v.label(), rep.verdict)
        assert rep.verdict.is_true == (v.depth == exp["canonical_depth"]), v.label()
        if v.depth == exp["canonical_depth"]:
            assert clause_branch(rep) == exp["branch"]


@pytest.mark.parametrize("name", EUCLIDEAN)
def test_euclidean_case_eta_is_star_valuation(name):
    K = zoo.load(name)
    assert not condition_three_holds(K, 2)
    assert obs34_eta(K).valuation == canonical_2_star(K)


def test_epsilon_sentence():
    assert obs34_epsilon(zoo.load("rcf_t")).verdict.is_true
    assert obs34_epsilon(zoo.load("rcf")).verdict.is_false
    assert obs34_epsilon(zoo.load("q2")).verdict.is_false


def test_phensel_clause_rejects_q_with_2adic_valuation():
    v = chain(zoo.load("q_v2"))[0]
    rep = phensel_clause(v, 2)
    assert rep.verdict.is_false
    assert rep.witnesses


@pytest.mark.parametrize("name,p", [("q2", 2), ("f2_t", 2), ("q3_zeta3", 3)])
def test_phensel_clause_accepts_henselian(name, p):
    K = zoo.load(name)
    assert phensel_clause(chain(K)[0], p).verdict.is_true


def test_kummer_factor_q2():
    assert kummer_factor(zoo.load("q2"), 2) == 4


@settings(max_examples=80, deadline=None)
@given(st.integers(-500, 500))
def test_lemma44_q2_against_mod8_oracle(a):
    K = zoo.load("q2")
    v = chain(K)[0]
    left, right = lemma44_equiv(v, 2, a)
    assert left.is_true == right.is_true == is_square_q2(Fraction(1 + 4 * a))


@settings(max_examples=30, deadline=None)
@given(st.integers(-60, 60), st.integers(-5, 5))
def test_lemma44_q3_zeta3(a, b):
    K = zoo.load("q3_zeta3")
    v = chain(K)[0]
    x = K.embed(a) + K.zeta_p(3) * b
    left, right = lemma44_equiv(v, 3, x)
    assert left.definite and left.is_true == right.is_true


def test_lemma44_needs_mixed_characteristic():
    with pytest.raises(PreconditionError):
        lemma44_equiv(chain(zoo.load("f2_t"))[0], 2, 1)


def test_cor42():
    assert cor42_criterion(chain(zoo.load("c_sq_t"))[0], 3).verdict.is_false
    assert cor42_criterion(chain(zoo.load("c_t"))[0], 2).verdict.is_true


def test_lemma43_and_45_preconditions():
    with pytest.raises(PreconditionError):
        lemma43_criterion(chain(zoo.load("q2"))[0], 2)
    with pytest.raises(PreconditionError):
        lemma45_criterion(chain(zoo.load("f2_t"))[0], 2)


def test_lemma43_on_perfect_char_p():
    K = zoo.load("fbar3_perf_t")
    can = canonical_p_henselian(K, 3)
    for v in chain(K):
        if not v.is_trivial:
            assert lemma43_criterion(v, 3).verdict.is_true == (v == can)


def test_lemma45_on_mixed_perfect():
    K = zoo.load("mixed_perfect")
    can = canonical_p_henselian(K, 2)
    assert lemma45_criterion(can, 2).verdict.is_true


HYP1 = ["f3_s_t", "q2", "c_t", "f3u_t", "f3u_s_t", "f2u_t", "q3_zeta3"]
HYP2 = [("f3u_t", 0), ("f3u_s_t", 1), ("f3u_s_t", 0), ("f2u_t", 0)]


def _p(K):
    return 3 if K.characteristic == 3 or "3" in K.name() else 2


@pytest.mark.parametrize("name", HYP1)
def test_lemma41_hypothesis_one(name):
    K = zoo.load(name)
    p = _p(K)
    v = chain(K)[0]
    w = chain(K)[-1]
    rep = lemma41_coarsening_witness(v, w, p, hypothesis=1)
    assert rep.verdict.is_true
    assert str(rep.witnesses[0][0]).startswith(f"X^{p}")


@pytest.mark.parametrize("name,wdepth", HYP2)
def test_lemma41_hypothesis_two(name, wdepth):
    K = zoo.load(name)
    p = K.characteristic
    v = chain(K)[0]
    w = v.coarsen_to(wdepth)
    assert lemma41_coarsening_witness(v, w, p, hypothesis=2).verdict.is_true


def test_lemma41_rejects_non_coarsening():
    K = zoo.load("q2")
    v = chain(K)[0]
    with pytest.raises(PreconditionError):
        lemma41_coarsening_witness(v, v, 2)
    with pytest.raises(PreconditionError):
        lemma41_coarsening_witness(v, chain(K)[-1], 2, hypothesis=2)


def test_report_json_shape():
    rep = psi_dispatch(chain(zoo.load("q2"))[0], 2)
    js = rep.to_json()
    assert set(js) >= {"verdict", "clause_trace", "witnesses", "branch"}
