import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pcanon import zoo
from pcanon.fields import (
    Attributes, FiniteField, MixedSeries, PAdicField, QuotientExtension, RationalFunctionField, Rationals,
    SeriesField, StubField, field_from_descriptor, load_field, sanity_check_attributes,
)
from pcanon.fields.base import FieldError

from oracles import finite_field_power_map, is_cube_q3, is_square_q2, is_square_qp

QS = [2, 3, 4, 5, 8, 9, 25, 27]
fractions = st.fractions(max_denominator=200).filter(lambda q: q != 0 and abs(q.numerator) < 10**6)


@pytest.mark.parametrize("q", QS)
def test_finite_field_axioms(q):
    K = FiniteField(q)
    els = list(K.elements())
    assert len(els) == q and len(set(els)) == q
    rng = random.Random(q)
    for _ in range(200):
        a, b, c = (rng.choice(els) for _ in range(3))
        assert (a + b) * c == a * c + b * c
        assert a * b == b * a
        if not a.is_zero():
            assert a * a.inverse() == K.one


@pytest.mark.parametrize("q", QS)
@pytest.mark.parametrize("p", [2, 3])
def test_finite_power_test_matches_exponent_criterion(q, p):
    K = FiniteField(q)
    ref = finite_field_power_map(q, p)
    for x in K.elements():
        if not x.is_zero():
            assert K.pth_power_test(x, p).is_true == ref(x)


@pytest.mark.parametrize("q", QS)
def test_finite_artin_schreier_matches_image(q):
    K = FiniteField(q)
    p = K.characteristic
    image = {y**p - y for y in K.elements()}
    for x in K.elements():
        assert K.artin_schreier_test(x).is_true == (x in image)


@settings(max_examples=300)
@given(fractions)
def test_q2_squares_match_mod8(x):
    K = PAdicField(2, precision=64)
    assert K.pth_power_test(K(x), 2).is_true == is_square_q2(x)


@settings(max_examples=200)
@given(fractions, st.sampled_from([3, 5, 7]))
def test_qp_squares_match_legendre(x, p):
    K = PAdicField(p, precision=32)
    assert K.pth_power_test(K(x), 2).is_true == is_square_qp(x, p)


@settings(max_examples=200)
@given(fractions)
def test_q3_cubes(x):
    K = PAdicField(3, precision=32)
    assert K.pth_power_test(K(x), 3).is_true == is_cube_q3(x)


@settings(max_examples=200)
@given(fractions, fractions)
def test_padic_field_ops(a, b):
    K = PAdicField(2, precision=64)
    x, y = K(a), K(b)
    assert (x * y - K(a * b)).is_zero()
    assert (x + y - K(a + b)).is_zero()
    assert (x * x.inverse() - 1).is_zero()


def test_rationals_squares():
    Q = Rationals()
    for n in range(1, 60):
        assert Q.pth_power_test(Q(n), 2).is_true == (int(n**0.5) ** 2 == n)
    assert Q.pth_power_test(Q(Fraction(9, 4)), 2).is_true
    assert Q.pth_power_test(Q(-1), 3).is_true


def laurent(K, rng, lo=-3, hi=3):
    t = K.variable(K.var)
    acc = K.zero
    base = list(itertools.islice(K.base.elements(), 50)) if K.base.is_finite else [K.base(i) for i in range(-3, 4)]
    for e in range(lo, hi + 1):
        acc = acc + K.place_lift(rng.choice(base)) * t**e
    return acc


@pytest.mark.parametrize("p", [2, 3])
def test_series_artin_schreier_image(p):
    K = SeriesField(FiniteField(p), "t")
    rng = random.Random(p)
    for _ in range(40):
        y = laurent(K, rng)
        assert K.artin_schreier_test(y**p - y).is_true
    t = K.variable("t")
    assert K.artin_schreier_test(t).is_true  # positive valuation: Hensel
    assert K.artin_schreier_test(t.inverse()).is_false
    assert K.artin_schreier_test(t ** (-p)).is_false


@pytest.mark.parametrize("p", [2, 3])
def test_series_pth_powers(p):
    K = SeriesField(FiniteField(5), "t")
    rng = random.Random(p)
    for _ in range(30):
        y = laurent(K, rng, 0, 3)
        if y.is_zero():
            continue
        assert K.pth_power_test(y**p, p).is_true
    t = K.variable("t")
    assert K.pth_power_test(t, p).is_false


def test_series_inverse_is_exact_to_truncation():
    K = SeriesField(FiniteField(3), "t")
    t = K.variable("t")
    x = 1 + t + t**2
    assert (x * x.inverse() - 1).is_zero()


def test_hahn_q_roots():
    K = SeriesField(StubField("C", 0, Attributes(alg_closed=True)), "t", "Q")
    t = K.variable("t")
    assert K.pth_power_test(t, 2).is_true
    assert K.is_p_closed(3)


def test_quotient_zeta3():
    K = zoo.load("q3_zeta3")
    z = K.zeta_p(3)
    assert z**3 == K.one and z != K.one
    rng = random.Random(0)
    for _ in range(20):
        y = K.embed(rng.randint(1, 50)) + z * rng.randint(0, 9)
        if not y.is_zero():
            assert K.pth_power_test(y**3, 3).is_true
    assert K.pth_power_test(K.embed(3), 3).is_false
    a, b = K.embed(2) + z, K.embed(5) - 3 * z
    assert (K.norm(a * b) - K.norm(a) * K.norm(b)).is_zero()


def test_ratfunc():
    K = RationalFunctionField(3)
    u = K.variable("u")
    assert K.pth_power_test(u**3, 3).is_true
    assert K.pth_power_test(u, 3).is_false
    assert K.pth_power_test((u + 1) ** 2, 2).is_true
    assert K.pth_power_test(u + 1, 2).is_false
    assert K.artin_schreier_test(u**3 - u).is_true


def test_mixed_series_squares():
    K = zoo.load("mixed_perfect")
    s = K.variable("s")
    assert K.pth_power_test(1 + 4 * s, 2).is_true
    assert K.pth_power_test(1 + 4 * s.inverse(), 2).is_false
    assert K.pth_power_test(K(2), 2).is_false


@pytest.mark.parametrize("name", zoo.names())
def test_descriptor_round_trip(name):
    K = zoo.load(name)
    assert field_from_descriptor(K.descriptor()) == K
    assert load_field(K.to_json()) == K


def test_bad_descriptor():
    with pytest.raises(FieldError):
        field_from_descriptor({"kind": "Nope"})


def test_sanity_catches_misdeclaration():
    bad = FiniteField(5, Attributes(euclidean=True))
    report = sanity_check_attributes(bad, samples=50)
    assert not report.ok and report.counterexamples
    good = zoo.load("q2")
    assert sanity_check_attributes(good, samples=50).ok
