"""Neighbourhood bases of 0, the t-henselian axioms, and topology comparison.

Basis sets are membership predicates with a constructive sampler, so
containment can be tested at both ends: sample members of the smaller set
and ask the larger one.  Ball bases of valuations on one place chain carry
enough structure for exact containment verdicts.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .fields.base import Elem, Field, FieldError
from .formula.parser import parse_term
from .formula.evaluate import term_polynomial
from .tri import FALSE, TRUE, Tri, all_of
from .valuation import Valuation, canonical_p_henselian, chain

DEFAULT_DEPTH = 8
DEFAULT_SAMPLES = 128


class TopologyError(ValueError):
    pass


# polynomials are coefficient lists, constant term first
def poly_eval(coeffs: list[Elem], x: Elem) -> Elem:
    acc = x.field.zero
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def poly_deriv(coeffs: list[Elem]) -> list[Elem]:
    return [c * i for i, c in enumerate(coeffs)][1:]


def parse_polynomial(K: Field, text: str, var: str = "X") -> list[Elem]:
    """Ring-syntax polynomial text to a coefficient list over K."""
    d = term_polynomial(K, parse_term(text), var, {})
    n = max((k for k, c in d.items() if not c.is_zero()), default=0)
    return [d.get(k, K.zero) for k in range(n + 1)]


def _rank_one_value(v: Valuation, x: Elem) -> Fraction | None:
    g = v.value(x)
    return None if g is None else g.coords[0]


def _zero_precision(x: Elem) -> Fraction | None:
    """Lower bound for the valuation of an element known to be 0 only up to precision."""
    raw = x.raw
    if isinstance(raw, tuple) and len(raw) == 3 and raw[1] == 0 and x.field.kind == "PAdic":
        return Fraction(raw[0])
    return None


def has_root(v: Valuation, coeffs: list[Elem], hints=(), max_depth: int | None = None,
             budget: int = 4096) -> Tri:
    """Does the polynomial have a root in the field?

    Finite fields are searched exhaustively.  For a henselian rank-one
    valuation with finite residue field, residue classes of the integral
    rescaling are refined until Hensel's lemma applies (True) or no class
    survives (False).  Elsewhere a Hensel certificate at a hint point is
    the only way to answer True.
    """
    K = v.field
    coeffs = list(coeffs)
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    if len(coeffs) <= 1:
        return Tri.of(not coeffs)
    if K.is_finite:
        return Tri.of(any(poly_eval(coeffs, x).is_zero() for x in K.elements()))
    if coeffs[0].is_zero():
        return TRUE
    lead = coeffs[-1]
    g = [c / lead for c in coeffs]
    henselian = not v.is_trivial and all(st.certified_henselian for st in v.stages)
    if henselian:
        for x0 in hints:
            if _hensel_ok(v, g, K(x0)):
                return TRUE
    if henselian and v.depth == 1 and v.residue_field.is_finite:
        return _class_search(v, g, max_depth, budget)
    return Tri.unknown("no root certificate and no complete search for this valued field")


def _hensel_ok(v: Valuation, g: list[Elem], x0: Elem) -> bool:
    if not v.in_ring(x0) or not all(v.in_ring(c) for c in g):
        return False
    fx = poly_eval(g, x0)
    d = v.value(poly_eval(poly_deriv(g), x0))
    if d is None:
        return False
    if fx.is_zero():
        lb = _zero_precision(fx)
        return lb is not None and v.depth == 1 and lb > 2 * d.coords[0]
    return v.value(fx) > d * 2


def _class_search(v: Valuation, g: list[Elem], max_depth, budget) -> Tri:
    K = v.field
    n = len(g) - 1
    vals = [_rank_one_value(v, c) for c in g]
    k = 0
    for i in range(n):
        if vals[i] is not None and vals[i] < 0:
            k = max(k, math.ceil(-vals[i] / (n - i)))
    pi = v.monomial(v.value_group.basis(0))
    # h(y) = pi^{nk} g(y / pi^k) is monic with integral coefficients
    h = [c * pi ** ((n - i) * k) for i, c in enumerate(g)]
    hd = poly_deriv(h)
    R = v.residue_field
    digits = [v.lift(r) for r in R.elements()]
    if max_depth is None:
        max_depth = getattr(K, "precision", 32)
    frontier = [K.zero]
    work = 0
    for m in range(max_depth):
        scale = pi**m
        nxt = []
        for c in frontier:
            for r in digits:
                work += 1
                if work > budget:
                    return Tri.unknown("residue-class search exceeded its budget", budget=budget)
                y = c + scale * r
                hy = poly_eval(h, y)
                dy = v.value(poly_eval(hd, y))
                if hy.is_zero():
                    lb = _zero_precision(hy)
                    if dy is not None and lb is not None and lb > 2 * dy.coords[0]:
                        return TRUE
                    nxt.append(y)
                    continue
                val = _rank_one_value(v, hy)
                if dy is not None and val > 2 * dy.coords[0]:
                    return TRUE
                if val >= m + 1:
                    nxt.append(y)
        if not nxt:
            return FALSE
        frontier = nxt
    return Tri.unknown("residue classes still open at the precision limit", depth=max_depth)


# basis sets
@dataclass
class BasisSet:
    label: str
    member: Callable[[Elem], Tri]
    sampler: Callable[[random.Random, int], list]
    ball: tuple | None = None  # (valuation, gamma) for valuation balls

    def sample(self, rng: random.Random, n: int) -> list[Elem]:
        return self.sampler(rng, n)

    def __contains__(self, x) -> bool:
        return self.member(x).is_true


@dataclass
class NeighborhoodBasis:
    host: Field
    kind: str
    make: Callable[[int], BasisSet]
    descriptor: dict = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False)

    def set(self, k: int) -> BasisSet:
        if k not in self._cache:
            self._cache[k] = self.make(k)
        return self._cache[k]

    def sets(self, n: int) -> list[BasisSet]:
        return [self.set(k) for k in range(n)]

    def to_json(self) -> dict:
        return dict(self.descriptor, kind=self.kind)


def _unit_pool(v: Valuation, rng: random.Random, n: int) -> list[Elem]:
    """Elements of the valuation ring: residue lifts, strata monomials and random ring elements."""
    K = v.field
    pool = v.ring_samples(2, 3, rng.randrange(1 << 30)) if not v.is_trivial else []
    try:
        extra = [x for x in K.sample(rng, 4 * n) if v.in_ring(x)]
    except (NotImplementedError, FieldError):
        extra = []
    return pool + extra


def ball_basis(v: Valuation) -> NeighborhoodBasis:
    """Balls {x : v(x) >= k * e} with e the generator of the leading value component."""
    K = v.field

    def make(k: int) -> BasisSet:
        if v.is_trivial:
            return BasisSet("K", lambda x: TRUE, lambda rng, n: [K.zero] + K.sample(rng, n), (v, None))
        gamma = v.value_group.basis(0) * k
        mono = v.monomial(gamma)

        def member(x, gamma=gamma):
            x = K(x)
            if x.is_zero():
                return TRUE
            return Tri.of(v.value(x) >= gamma)

        def sampler(rng, n, mono=mono):
            pool = _unit_pool(v, rng, n)
            rng.shuffle(pool)
            return [K.zero] + [mono * u for u in pool[:n]]

        return BasisSet(f"ball v >= {gamma} ({v.label()})", member, sampler, (v, gamma))

    return NeighborhoodBasis(K, "balls", make, {"valuation": v.to_json()})


def rational_ball_basis(K: Field, p: int) -> NeighborhoodBasis:
    """p-adic balls on a field of rational numbers, whatever its native place."""
    if K.kind != "Rationals":
        raise TopologyError("rational_ball_basis needs a field of rationals")

    def vp(q: Fraction) -> int:
        n, d, k = q.numerator, q.denominator, 0
        while n % p == 0:
            n //= p
            k += 1
        while d % p == 0:
            d //= p
            k -= 1
        return k

    def make(k: int) -> BasisSet:
        def member(x):
            x = K(x)
            return Tri.of(x.is_zero() or vp(Fraction(x.raw)) >= k)

        def sampler(rng, n):
            out = [K.zero]
            for _ in range(n):
                num = rng.randint(-50, 50)
                den = rng.randint(1, 30)
                while den % p == 0:
                    den += 1
                out.append(K(Fraction(num * p**k, den)))
            return out

        return BasisSet(f"{p}-adic ball >= {k}", member, sampler)

    return NeighborhoodBasis(K, "balls", make, {"valuation": f"{p}-adic"})


def discrete_basis(K: Field) -> NeighborhoodBasis:
    def make(k):
        return BasisSet("{0}", lambda x: Tri.of(K(x).is_zero()), lambda rng, n: [K.zero])

    return NeighborhoodBasis(K, "discrete", make, {})


def u_f_a(v: Valuation, f, a) -> BasisSet:
    """U_{f,a} = {f(x)^-1 - f(a)^-1 : x in K}, membership by root search."""
    K = v.field
    coeffs = parse_polynomial(K, f) if isinstance(f, str) else list(f)
    a = K.parse(a) if isinstance(a, str) else K(a)
    _check_ufa(v, coeffs, a)
    inv_fa = poly_eval(coeffs, a).inverse()

    def member(y):
        y = K(y)
        s = y + inv_fa
        if s.is_zero():
            return FALSE
        b = s.inverse()
        g = list(coeffs)
        g[0] = g[0] - b
        return has_root(v, g, hints=(a, -a))

    def sampler(rng, n):
        out = []
        for x in [a] + _unit_pool(v, rng, n) + K.sample(rng, n):
            fx = poly_eval(coeffs, x)
            if not fx.is_zero():
                out.append(fx.inverse() - inv_fa)
            if len(out) >= n + 1:
                break
        return out

    return BasisSet(f"U[{_fmt_poly(coeffs)}, {a}]", member, sampler)


def _fmt_poly(coeffs) -> str:
    terms = [f"({c})*X^{i}" for i, c in enumerate(coeffs) if not c.is_zero()]
    return " + ".join(reversed(terms))


def _check_ufa(v: Valuation, coeffs, a):
    K = v.field
    if len(coeffs) < 3:
        raise TopologyError("f must have degree > 1")
    if poly_eval(poly_deriv(coeffs), a).is_zero():
        raise TopologyError("f'(a) must be nonzero")
    if poly_eval(coeffs, a).is_zero():
        raise TopologyError("f(a) must be nonzero")
    if len(coeffs) in (3, 4):
        # degree 2 or 3: irreducible iff no root
        if has_root(v, coeffs).is_true:
            raise TopologyError("f must be irreducible")
    if hasattr(K, "rational_roots") and K.rational_roots(coeffs):
        raise TopologyError("f must be irreducible")


def ufa_basis(v: Valuation, f, a, scale=None) -> NeighborhoodBasis:
    """Sets c^k * U_{f,a}; c defaults to the uniformizing monomial of v."""
    K = v.field
    U = u_f_a(v, f, a)
    if scale is None:
        c = v.monomial(v.value_group.basis(0))
    else:
        c = K.parse(scale) if isinstance(scale, str) else K(scale)

    def make(k):
        ck = c**k
        inv = ck.inverse()
        return BasisSet(f"{c}^{k} * {U.label}", lambda y: U.member(K(y) * inv),
                        lambda rng, n: [ck * u for u in U.sample(rng, n)])

    return NeighborhoodBasis(K, "ufa", make, {"f": str(f), "a": str(a), "scale": str(c)})


def basis_from_descriptor(K: Field, d: dict) -> NeighborhoodBasis:
    kind = d.get("kind")
    members = chain(K)
    if kind == "balls":
        val = d.get("valuation", "native")
        if isinstance(val, int) or (isinstance(val, str) and val.isdigit() and K.kind == "Rationals"):
            return rational_ball_basis(K, int(val))
        depth = d.get("depth", members[0].depth) if val == "native" else int(val)
        return ball_basis(Valuation(K, depth))
    if kind == "ufa":
        return ufa_basis(members[0], d["f"], d.get("a", "1"), d.get("scale"))
    if kind == "discrete":
        return discrete_basis(K)
    raise TopologyError(f"unknown basis kind {kind!r}")


# axioms
@dataclass
class AxiomResult:
    axiom: str
    verdict: Tri
    found: list = field(default_factory=list)
    counterexample: object = None

    def to_json(self):
        return {"axiom": self.axiom, "verdict": self.verdict.to_json(), "found": [str(f) for f in self.found],
                "counterexample": None if self.counterexample is None else str(self.counterexample)}


@dataclass
class AxiomReport:
    basis: NeighborhoodBasis
    results: list

    @property
    def ok(self) -> bool:
        return all(r.verdict.is_true for r in self.results)

    def __getitem__(self, axiom: str) -> AxiomResult:
        return next(r for r in self.results if r.axiom == axiom)

    def to_json(self):
        return {"basis": self.basis.to_json(), "ok": self.ok, "axioms": [r.to_json() for r in self.results]}


def _search_V(basis, test, search):
    """First basis set V (index >= 0) for which ``test(V)`` finds no counterexample."""
    last = None
    for j in range(search):
        bad = test(basis.set(j))
        if bad is None:
            return j, None
        last = bad
    return None, last


def check_axioms(basis: NeighborhoodBasis, samples: int = 1000, n_max: int = 3, seed: int = 0,
                 n_sets: int = 4, search: int = 12, polys_per_n: int = 64) -> AxiomReport:
    K = basis.host
    rng = random.Random(seed)
    Us = basis.sets(n_sets)
    per = max(1, samples // n_sets)
    pool = [x for x in K.sample(rng, samples) if not x.is_zero()]
    for U in Us:
        pool += [x for x in U.sample(rng, 8) if not x.is_zero()]
    results = []

    # (1) every U strictly contains {0}; every x != 0 escapes some V
    first = AxiomResult("1", TRUE)
    for i, U in enumerate(Us):
        if not U.member(K.zero).is_true:
            first.verdict, first.counterexample = FALSE, f"0 not in {U.label}"
            break
        if not any(not x.is_zero() and U.member(x).is_true for x in U.sample(rng, 16)):
            first.verdict, first.counterexample = FALSE, f"{U.label} contains only 0"
            break
    if first.verdict.is_true:
        for x in pool[:samples]:
            if not any(basis.set(j).member(x).is_false for j in range(search)):
                first.verdict, first.counterexample = FALSE, x
                break
    results.append(first)

    def universal(name, make_test):
        res = AxiomResult(name, TRUE)
        for i, U in enumerate(Us):
            j, bad = _search_V(basis, make_test(U), search)
            if j is None:
                res.verdict, res.counterexample = FALSE, bad
                return res
            res.found.append(f"U{i} <- V{j}")
        return res

    def pairs(V):
        s = V.sample(rng, per)
        return [(rng.choice(s), rng.choice(s)) for _ in range(per)]

    def diff_test(U):
        def t(V):
            for a, b in pairs(V):
                if not U.member(a - b).is_true:
                    return (a, b)
            return None
        return t

    def prod_test(U):
        def t(V):
            for a, b in pairs(V):
                if not U.member(a * b).is_true:
                    return (a, b)
            return None
        return t

    xs = pool[: max(4, per // 16)]

    def scaled_test(U):
        def t_all(V):
            for x in xs:
                for y in V.sample(rng, 16):
                    if not U.member(x * y).is_true:
                        return (x, y)
            return None
        return t_all

    def vtop_test(U):
        outside = [x for x in pool if U.member(x).is_false]

        def t(V):
            vs = [z for z in V.sample(rng, per) if not z.is_zero()]
            for _ in range(per):
                if not outside or not vs:
                    break
                x = rng.choice(outside)
                y = rng.choice(vs) / x
                if U.member(y).is_false:
                    return (x, y)
            return None
        return t

    results.append(universal("2", diff_test))
    results.append(universal("3", prod_test))
    # (4) needs V for each x, so search per x
    fourth = AxiomResult("4", TRUE)
    for i, U in enumerate(Us):
        for x in xs:
            def t(V, x=x, U=U):
                for y in V.sample(rng, 16):
                    if not U.member(x * y).is_true:
                        return (x, y)
                return None
            j, bad = _search_V(basis, t, search)
            if j is None:
                fourth.verdict, fourth.counterexample = FALSE, bad
                break
        if fourth.verdict.is_false:
            break
        fourth.found.append(f"U{i}: V found for {len(xs)} x")
    results.append(fourth)
    results.append(universal("5", vtop_test))

    # (6) some U makes every X^{n+1} + X^n + (deg <= n-1 over U) have a root
    v = chain(K)[0]
    for n in range(1, n_max + 1):
        res = AxiomResult(f"6[n={n}]", FALSE)
        for j in range(search):
            U = basis.set(j)
            us = U.sample(rng, 32)
            polys = [[u] + [K.zero] * (n - 1) + [K.one, K.one] for u in us if not u.is_zero()][:4]
            for _ in range(polys_per_n):
                polys.append([rng.choice(us) if rng.random() < 0.7 else K.zero for _ in range(n)] + [K.one, K.one])
            ok = TRUE
            for coeffs in polys:
                r = has_root(v, coeffs, hints=(K(-1), K.zero))
                if not r.is_true:
                    ok = r
                    res.counterexample = _fmt_poly(coeffs)
                    break
            if ok.is_true:
                res.verdict = TRUE
                res.counterexample = None
                res.found.append(U.label)
                break
            if ok.is_unknown:
                res.verdict = ok
        results.append(res)
    return AxiomReport(basis, results)


# containment and equivalence
def _ball_containment(S: BasisSet, T: BasisSet) -> Tri | None:
    """Exact verdict for S inside T when both are balls on one place chain."""
    if S.ball is None or T.ball is None:
        return None
    (w, delta), (v, gamma) = S.ball, T.ball
    if w.field != v.field:
        return None
    if gamma is None:
        return TRUE
    if delta is None:
        return FALSE
    if w.depth >= v.depth:
        return Tri.of(delta.project(v.value_group) >= gamma)
    return Tri.of(delta > gamma.project(w.value_group))


def contained(S: BasisSet, T: BasisSet, samples: int = DEFAULT_SAMPLES, rng=None) -> Tri:
    """Is S inside T?  Exact for balls; otherwise sampled, with a counterexample meaning False."""
    r = _ball_containment(S, T)
    if r is not None:
        return r
    rng = rng or random.Random(0)
    unknown = None
    for x in S.sample(rng, samples):
        m = T.member(x)
        if m.is_false:
            return FALSE
        if m.is_unknown and unknown is None:
            unknown = m
    if unknown is not None:
        return unknown
    return Tri(True, f"no escaping element among {samples} samples")


@dataclass
class EquivalenceReport:
    verdict: Tri
    refinements: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    def to_json(self):
        return {"verdict": self.verdict.to_json(), "refinements": self.refinements, "failures": self.failures}


def _refines(b1, b2, depth, samples, rng, search):
    """For each of the first ``depth`` sets of b1, a set of b2 inside it."""
    found, failures, verdicts = [], [], []
    for i in range(depth):
        T = b1.set(i)
        best = None
        certified_fail = 0
        for j in range(search):
            c = contained(b2.set(j), T, samples, rng)
            if c.is_true:
                best = (j, c)
                break
            if c.is_false:
                certified_fail += 1
        if best is None:
            if certified_fail == search:
                failures.append(f"no set among the first {search} of the second basis lies in set {i}")
                verdicts.append(FALSE)
            else:
                verdicts.append(Tri.unknown(f"containment undecided for set {i}"))
            continue
        how = "sampled" if best[1].reason else "exact"
        found.append(f"{i} <- {best[0]} ({how})")
        verdicts.append(TRUE)
    return found, failures, all_of(verdicts)


def topologies_equivalent(b1: NeighborhoodBasis, b2: NeighborhoodBasis, depth: int = DEFAULT_DEPTH,
                          samples: int = DEFAULT_SAMPLES, seed: int = 0, search: int | None = None) -> EquivalenceReport:
    if b1.host != b2.host:
        raise TopologyError("bases live on different fields")
    rng = random.Random(seed)
    search = search or 2 * depth + 8
    f12, x12, t12 = _refines(b1, b2, depth, samples, rng, search)
    f21, x21, t21 = _refines(b2, b1, depth, samples, rng, search)
    rep = EquivalenceReport(t12 & t21)
    rep.refinements = [f"first {s}" for s in f12] + [f"second {s}" for s in f21]
    rep.failures = x12 + x21
    return rep


# a definable valuation for the t-henselian topology from finitely many extensions
@dataclass
class Thm54Result:
    member: Callable[[Elem], bool]
    restrictions: list
    equivalence: EquivalenceReport
    ring_check: Tri

    def __call__(self, x) -> bool:
        return self.member(x)

    def to_json(self):
        return {"restrictions": [r.to_json() for r in self.restrictions],
                "equivalence": self.equivalence.to_json(), "ring_check": self.ring_check.to_json()}


def _embedding(K: Field, L: Field) -> Callable[[Elem], Elem]:
    if L == K:
        return lambda x: x
    if getattr(L, "base", None) == K and hasattr(L, "embed"):
        return L.embed
    raise TopologyError(f"{L} is not presented as an extension of {K}")


def _ring_basis(K: Field, member, c: Elem) -> NeighborhoodBasis:
    members_pool = [x for x in itertools.islice(K.graded_elements(), 400) if member(x)]

    def make(k):
        ck = c**k
        inv = ck.inverse()
        return BasisSet(f"({c})^{k} O", lambda x: Tri.of(member(K(x) * inv)),
                        lambda rng, n: [ck * rng.choice(members_pool) for _ in range(n)] + [K.zero])

    return NeighborhoodBasis(K, "ring", make, {"scale": str(c)})


def thm54_construct(K: Field, extensions: list, p: int, depth: int = DEFAULT_DEPTH, samples: int = 64,
                    seed: int = 0) -> Thm54Result:
    """The join of the restrictions of v_L^p over the listed extensions L of K."""
    if not extensions:
        raise TopologyError("extension list is empty")
    from .fields.descriptor import field_from_descriptor

    restrictions = []
    members = []
    for L in extensions:
        if isinstance(L, dict):
            L = field_from_descriptor(L)
        if L.is_p_closed(p):
            raise TopologyError(f"{L} is {p}-closed")
        if L.characteristic != p and not L.has_zeta(p):
            raise TopologyError(f"{L} has no primitive {p}-th root of unity")
        vL = canonical_p_henselian(L, p)
        emb = _embedding(K, L)
        restrictions.append(vL)
        members.append(lambda x, vL=vL, emb=emb: vL.in_ring(emb(K(x))))

    def member(x) -> bool:
        # the restrictions are comparable, so the finest common coarsening is their union
        return any(m(x) for m in members)

    rng = random.Random(seed)
    pool = [x for x in K.sample(rng, samples) if not x.is_zero()]
    checks = []
    for m1, m2 in itertools.combinations(members, 2):
        a = all(m2(x) for x in pool if m1(x))
        b = all(m1(x) for x in pool if m2(x))
        checks.append(Tri.of(a or b))
    inside = [x for x in pool if member(x)]
    for x, y in zip(inside, reversed(inside)):
        checks.append(Tri.of(member(x + y) and member(x * y)))
    for x in pool:
        checks.append(Tri.of(member(x) or member(x.inverse())))
    native = chain(K)[0]
    c = native.monomial(native.value_group.basis(0))
    if not member(c) or member(c.inverse()):
        raise TopologyError("constructed ring is trivial on the native uniformizer")
    eq = topologies_equivalent(ball_basis(native), _ring_basis(K, member, c), depth, samples, seed)
    return Thm54Result(member, restrictions, eq, all_of(checks))
