"""Decision procedures for the first-order characterizations of v_K^p.

Each procedure returns a :class:`CriterionReport`: a three-valued verdict,
concrete witnesses, and a trace of which clause decided it.  Universal
statements over the maximal ideal are checked on value-stratified samples;
a single counterexample decides False, and True needs either exhaustion of
the samples plus a structural certificate, or a witness for every sample.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .fields.base import Elem, Field, FieldError
from .tri import FALSE, TRUE, Tri, all_of
from .valuation import (
    HClass,
    Valuation,
    chain,
    classify_H,
    is_p_henselian,
)


class PreconditionError(ValueError):
    """The criterion does not apply to this valued field."""


@dataclass
class CriterionReport:
    verdict: Tri
    witnesses: list = field(default_factory=list)
    trace: list = field(default_factory=list)
    valuation: Valuation | None = None
    branch: str | None = None

    def witness(self, element, role: str):
        self.witnesses.append((element, role))
        return self

    def to_json(self) -> dict:
        out = {"verdict": self.verdict.to_json(), "clause_trace": list(self.trace),
               "witnesses": [{"element": str(e), "role": r} for e, r in self.witnesses]}
        if self.branch is not None:
            out["branch"] = self.branch
        if self.valuation is not None:
            out["valuation"] = self.valuation.to_json()
        return out


def _default_height(v: Valuation) -> int:
    return 12 if v.depth == 1 else 3


def _mx_samples(v: Valuation, height, units, seed):
    return v.maximal_ideal_samples(height or _default_height(v), units, seed)


def _require_root_of_unity(K: Field, p: int):
    if K.characteristic != p and not K.has_zeta(p):
        raise PreconditionError(f"{K} has characteristic {K.characteristic} and no primitive {p}-th root of unity")


def kummer_factor(K: Field, p: int) -> Elem:
    """(zeta_p - 1)^p; for p = 2 this is 4."""
    return (K.zeta_p(p) - 1) ** p


# clause (ii)(2)
def artin_schreier_mod_pm(v: Valuation, m: Elem, p: int, steps: int = 64) -> Tri:
    """Is m in {y^p - y} + p*m_v?  Iterates y -> y^p - m, which contracts on m_v."""
    if all(st.certified_henselian for st in v.stages):
        # Hensel's lemma: y^p - y - m has a root since m is in the maximal ideal
        return TRUE
    K = v.field
    y = K.zero
    pinv = K(p).inverse()
    try:
        for _ in range(steps):
            f = y**p - y - m
            if f.is_zero() or v.in_maximal_ideal(f * pinv):
                return TRUE
            y = y**p - m
    except FieldError as e:
        return Tri.unknown(f"iteration left the representable range: {e}")
    return Tri.unknown("fixed-point iteration did not reach p*m_v", steps=steps)


def phensel_clause(v: Valuation, p: int, height: int | None = None, units: int = 4, seed: int = 0) -> CriterionReport:
    K = v.field
    _require_root_of_unity(K, p)
    rep = CriterionReport(TRUE, valuation=v)
    if v.is_trivial:
        rep.trace.append("(ii)(2) trivial valuation: maximal ideal is zero")
        return rep
    certified = is_p_henselian(v, p)
    samples = _mx_samples(v, height, units, seed)
    verdicts = []
    if K.characteristic == p:
        rep.trace.append("(ii)(2) char p: m_v inside the Artin-Schreier image")
        for m in samples:
            t = K.artin_schreier_test(m)
            if t.is_false:
                rep.verdict = FALSE
                return rep.witness(m, "element of m_v outside the Artin-Schreier image")
            verdicts.append(t)
    else:
        rep.trace.append("(ii)(2) char not p: 1 + p^2 m_v in p-th powers, m_v in AS + p m_v")
        p2 = K(p * p)
        for m in samples:
            t = K.pth_power_test(1 + p2 * m, p)
            if t.is_false:
                rep.verdict = FALSE
                rep.witness(m, "element m of m_v")
                return rep.witness(1 + p2 * m, "1 + p^2 m is not a p-th power")
            u = artin_schreier_mod_pm(v, m, p)
            if u.is_false:
                rep.verdict = FALSE
                return rep.witness(m, "element of m_v outside AS + p m_v")
            verdicts += [t, u]
    sampled = all_of(verdicts)
    if sampled.is_true and not certified.is_true:
        rep.verdict = Tri.unknown("no counterexample among samples, no henselianity certificate",
                                  samples=len(samples))
    else:
        rep.verdict = sampled
    rep.trace.append(f"{len(samples)} stratified samples")
    return rep


# value-group criterion
def cor42_criterion(v: Valuation, p: int) -> CriterionReport:
    K = v.field
    if not is_p_henselian(v, p).is_true:
        raise PreconditionError("valuation is not certified p-henselian")
    if not K.has_zeta(p):
        raise PreconditionError(f"no primitive {p}-th root of unity in {K}")
    if v.residue_characteristic == p:
        raise PreconditionError("residue characteristic equals p")
    if not v.residue_field.is_p_closed(p):
        raise PreconditionError("residue field is not p-closed")
    G = v.value_group
    rep = CriterionReport(Tri.of(not G.has_p_divisible_nontrivial_convex(p)), valuation=v)
    rep.trace.append(f"value group {G}: no nontrivial {p}-divisible convex subgroup")
    if rep.verdict.is_false:
        rep.witness(G.p_divisible_convex_witness(p), "p-divisible convex subgroup")
    return rep


def _proper_h2_coarsening(v: Valuation, p: int) -> Valuation | None:
    for d in range(v.depth - 1, -1, -1):
        w = v.coarsen_to(d)
        if is_p_henselian(w, p).is_true and classify_H(w, p) is HClass.H2:
            return w
    return None


def _is_w_unit(w: Valuation, x: Elem) -> bool:
    g = w.value(x)
    return g is not None and g.is_zero()


def _universal_search(v: Valuation, p: int, height, units, seed, leaves_set, certificate_role) -> CriterionReport:
    """For each sampled x in m_v find a in O_v with ``leaves_set(x, a)`` True."""
    rep = CriterionReport(TRUE, valuation=v)
    if v.is_trivial:
        rep.trace.append("trivial valuation: vacuous")
        return rep
    cands = v.ring_samples(1, units, seed)
    unknown = 0
    witnessed = 0
    for x in _mx_samples(v, height, units, seed):
        found = False
        for a in cands:
            t = leaves_set(x, a)
            if t.is_true:
                found = True
                break
            if t.is_unknown:
                unknown += 1
        if found:
            witnessed += 1
            continue
        w = _proper_h2_coarsening(v, p)
        if w is not None and _is_w_unit(w, x):
            rep.verdict = FALSE
            rep.trace.append(f"x is a unit for the coarser H2 member {w.label()}")
            rep.witness(x, certificate_role)
            return rep
        rep.verdict = Tri.unknown("no escaping element found and no coarsening certificate", unknown=unknown)
        rep.witness(x, "unresolved element of m_v")
        return rep
    rep.trace.append(f"every one of {witnessed} sampled x has an escaping element")
    return rep


# char p refinement
def lemma43_criterion(v: Valuation, p: int, height: int | None = None, units: int = 3, seed: int = 0) -> CriterionReport:
    K = v.field
    if K.characteristic != p:
        raise PreconditionError(f"needs characteristic {p}, {K} has {K.characteristic}")
    if not is_p_henselian(v, p).is_true:
        raise PreconditionError("valuation is not certified p-henselian")
    if not v.residue_field.is_p_closed(p):
        raise PreconditionError("residue field is not p-closed")

    def escapes(x, a):
        return ~K.artin_schreier_test(a / x)

    rep = _universal_search(v, p, height, units, seed, escapes,
                            "x in m_v with x^-1 O_v inside the Artin-Schreier image")
    rep.trace.insert(0, "forall x in m_v: x^-1 O_v not inside the Artin-Schreier image")
    return rep


# Kummer vs Artin-Schreier in mixed characteristic
def _require_mixed(v: Valuation, p: int):
    K = v.field
    if K.characteristic != 0 or v.residue_characteristic != p:
        raise PreconditionError(f"needs characteristic (0, {p})")
    if not K.has_zeta(p):
        raise PreconditionError(f"no primitive {p}-th root of unity in {K}")
    if not is_p_henselian(v, p).is_true:
        raise PreconditionError("valuation is not certified p-henselian")


def lemma44_equiv(v: Valuation, p: int, a) -> tuple[Tri, Tri]:
    """Both sides of: 1 + (1 - zeta)^p a is a p-th power iff X^p - X - a-bar has a residue root."""
    _require_mixed(v, p)
    K = v.field
    a = K(a)
    if not v.in_ring(a):
        raise PreconditionError(f"{a} is not in the valuation ring")
    z = K.zeta_p(p)
    left = K.pth_power_test(1 + (1 - z) ** p * a, p)
    right = v.residue_field.artin_schreier_test(v.residue(a))
    return left, right


# mixed characteristic, perfect residue
def lemma45_criterion(v: Valuation, p: int, height: int | None = None, units: int = 3, seed: int = 0) -> CriterionReport:
    _require_mixed(v, p)
    R = v.residue_field
    if not (R.is_perfect() and R.is_p_closed(p)):
        raise PreconditionError("residue field must be perfect and p-closed")
    if not v.value_group.has_p_divisible_nontrivial_convex(p):
        raise PreconditionError("value group has no nontrivial p-divisible convex subgroup")
    K = v.field
    c = kummer_factor(K, p)

    def escapes(x, a):
        return ~K.pth_power_test(1 + c * a / x, p)

    rep = _universal_search(v, p, height, units, seed, escapes,
                            "x in m_v with 1 + x^-1 (zeta-1)^p O_v inside the p-th powers")
    rep.trace.insert(0, "forall x in m_v: 1 + x^-1 (zeta-1)^p O_v not inside the p-th powers")
    return rep


# roots over coarsened residue fields
def lemma41_coarsening_witness(v: Valuation, w: Valuation, p: int, hypothesis: int | None = None) -> CriterionReport:
    """An explicit degree-p polynomial over Kw without a root there.

    ``hypothesis`` selects branch 1 (no p-divisible convex subgroup) or 2
    (imperfect residue of characteristic p); by default the first that holds.
    """
    K = v.field
    if v.is_trivial:
        raise PreconditionError("v must be non-trivial")
    if w.field != K or w.depth >= v.depth:
        raise PreconditionError("w must be a proper coarsening of v")
    _require_root_of_unity(K, p)
    G = v.value_group
    hyp1 = not G.has_p_divisible_nontrivial_convex(p)
    R = v.residue_field
    hyp2 = R.characteristic == p and not R.is_perfect()
    if hypothesis is None:
        hypothesis = 1 if hyp1 else 2 if hyp2 else None
    if hypothesis not in (1, 2) or not (hyp1 if hypothesis == 1 else hyp2):
        raise PreconditionError(f"hypothesis {hypothesis} of the coarsening lemma does not hold")
    vbar = v.induced_on_residue(w)
    Kw = vbar.field
    delta = vbar.value_group
    rep = CriterionReport(TRUE, valuation=v)
    if hypothesis == 1:
        rep.trace.append("hypothesis (1): no nontrivial p-divisible convex subgroup")
        i = next(i for i, tag in enumerate(delta.tower) if delta.basis(i).divided_by(p) is None)
        g = delta.basis(i)
        x = vbar.monomial(g)
        if Kw.characteristic != p:
            poly = f"X^{p} - ({x})"
            t = Kw.pth_power_test(x, p)
            rep.trace.append(f"value of x is {g}, not in p*Delta; Kummer witness")
        else:
            x = x.inverse()
            g = -g
            poly = f"X^{p} - X - ({x})"
            t = Kw.artin_schreier_test(x)
            rep.trace.append(f"value of x is {g} < 0; a root would have value {g}/{p}, outside Delta")
    else:
        rep.trace.append("hypothesis (2): imperfect residue field of characteristic p")
        abar = R.non_pth_power(p)
        if abar is None:
            raise PreconditionError(f"no representable non-{p}-th power in {R}")
        a = vbar.lift(abar)
        if Kw.characteristic != p:
            poly = f"X^{p} - ({a})"
            x = a
            t = Kw.pth_power_test(a, p)
        else:
            g = vbar.value_strata(1)[0]
            y = vbar.monomial(g)
            x = a * y ** (-p)
            poly = f"X^{p} - X - ({x})"
            t = Kw.artin_schreier_test(x)
            rep.trace.append(f"a = {a}, x = {y}")
    rep.witness(poly, f"degree-{p} polynomial over {Kw.name()} without a root")
    rep.witness(x, "constant term")
    rep.verdict = ~t if not t.is_unknown else t
    return rep


# clause dispatch for the sentence characterizing v_K^p
def psi_dispatch(v: Valuation, p: int, seed: int = 0) -> CriterionReport:
    K = v.field
    _require_root_of_unity(K, p)
    rep = CriterionReport(TRUE, valuation=v)
    if K.is_p_closed(p):
        rep.branch = "(i)"
        rep.trace.append("(i) K = K(p): O_v must be K")
        rep.verdict = Tri.of(v.is_trivial)
        return rep
    rep.trace.append("(ii)(1) O_v is a valuation ring (chain member)")
    ph = phensel_clause(v, p, seed=seed)
    rep.trace += ph.trace
    rep.witnesses += ph.witnesses
    if ph.verdict.is_false:
        rep.verdict = FALSE
        rep.branch = "(2)"
        return rep
    R = v.residue_field
    if not R.is_p_closed(p):
        rep.branch = "(3)"
        not_hens = not R.is_p_henselian_field(p)
        not_eucl = p != 2 or not R.is_euclidean()
        rep.trace.append(f"(3) Kv != Kv(p): Kv not p-henselian = {not_hens}"
                         + (f", Kv not Euclidean = {not_eucl}" if p == 2 else ""))
        rep.verdict = ph.verdict & Tri.of(not_hens and not_eucl)
        return rep
    G = v.value_group
    if not G.has_p_divisible_nontrivial_convex(p):
        rep.branch = "(4a)"
        rep.trace.append("(4a) Kv = Kv(p), no nontrivial p-divisible convex subgroup")
        rep.verdict = ph.verdict
        return rep
    if K.characteristic == p:
        sub = lemma43_criterion(v, p, seed=seed)
        rep.branch = "(4b)"
        rep.trace.append("(4b) char p")
    elif R.characteristic == p and not R.is_perfect():
        rep.branch = "(4c)"
        rep.trace.append("(4c) char (0, p), Kv imperfect")
        rep.verdict = ph.verdict
        return rep
    elif R.characteristic == p:
        sub = lemma45_criterion(v, p, seed=seed)
        rep.branch = "(4d)"
        rep.trace.append("(4d) char (0, p), Kv perfect")
    else:
        rep.branch = "(4)"
        rep.trace.append("(4) p-divisible convex subgroup in residue characteristic 0: no branch applies")
        rep.verdict = FALSE
        return rep
    rep.trace += sub.trace
    rep.witnesses += sub.witnesses
    rep.verdict = ph.verdict & sub.verdict
    return rep


def clause_branch(report: CriterionReport) -> str | None:
    """The deciding branch tag such as ``"(3)"`` or ``"(4b)"``."""
    return report.branch


def condition_three_holds(K: Field, p: int) -> bool:
    """p != 2 or the residue field of v_K^p is not Euclidean."""
    from .valuation import canonical_p_henselian

    return p != 2 or not canonical_p_henselian(K, p).residue_field.is_euclidean()


# the Euclidean case
def obs34_eta(K: Field) -> CriterionReport:
    """The unique chain member that is 2-henselian, has Euclidean residue and no 2-divisible convex subgroup."""
    if K.is_p_closed(2):
        raise PreconditionError(f"{K} is 2-closed")
    found = []
    trace = []
    for v in chain(K):
        i = is_p_henselian(v, 2).is_true
        ii = v.residue_field.is_euclidean()
        iii = not v.value_group.has_p_divisible_nontrivial_convex(2)
        trace.append(f"{v.label()}: 2-henselian={i} Euclidean residue={ii} no 2-divisible convex={iii}")
        if i and ii and iii:
            found.append(v)
    if len(found) != 1:
        raise PreconditionError(f"expected exactly one member satisfying (i)-(iii), found {len(found)}")
    return CriterionReport(TRUE, trace=trace, valuation=found[0])


def _certified_not_euclidean(K: Field, samples: int = 64) -> Tri:
    if K.attrs.euclidean is not None:
        return Tri.of(not K.attrs.euclidean)
    if K.is_euclidean():
        return FALSE
    if K.characteristic == 2:
        return TRUE
    import itertools

    for x in itertools.islice(K.graded_elements(), samples):
        if x.is_zero():
            continue
        a, b = K.pth_power_test(x, 2), K.pth_power_test(-x, 2)
        if a.definite and b.definite and a.is_true == b.is_true:
            return TRUE
    return Tri.unknown("no sampled element separates x and -x from the squares")


def obs34_epsilon(K: Field) -> CriterionReport:
    """K is not Euclidean and the residue field of v_K^2 is Euclidean."""
    rep = CriterionReport(TRUE)
    ne = _certified_not_euclidean(K)
    rep.trace.append(f"K not Euclidean: {ne}")
    if ne.is_false:
        rep.verdict = FALSE
        return rep
    try:
        eta = obs34_eta(K)
    except PreconditionError as e:
        rep.trace.append(str(e))
        rep.verdict = FALSE
        return rep
    rep.valuation = eta.valuation
    ok = not eta.valuation.is_trivial and eta.valuation.residue_field.is_euclidean()
    rep.trace.append(f"eta selects {eta.valuation.label()}")
    rep.verdict = ne & Tri.of(ok)
    return rep
