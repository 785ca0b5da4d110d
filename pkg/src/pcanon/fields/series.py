"""Truncated series fields over a coefficient field.

``group`` selects the exponent group and with it the field being modeled:

* ``"Z"``     formal Laurent series ``k((t))``;
* ``"Q"``     Hahn series ``k((t^Q))`` (full well-ordered support modeled
              through finitely supported truncations);
* ``"Z[1/p]"`` the perfect hull of ``k((t))`` in characteristic p, i.e.
              Laurent series in some ``t^(1/p^n)``.

Raw values are ``(terms, prec)`` where ``terms`` is a tuple of
``(exponent, coefficient)`` sorted by exponent and ``prec`` is the exponent
from which on nothing is known (``None`` for elements known exactly).
"""
from __future__ import annotations

import itertools
from fractions import Fraction

from ..ogroup import component_contains, component_is_p_divisible
from ..ogroup import OrderedGroup
from ..tri import FALSE, TRUE, Tri, all_of
from .base import Attributes, Elem, Field, FieldError

DEFAULT_TRUNCATION = 32
DEFAULT_SUPPORT_BOUND = 64


def _min(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class SeriesField(Field):
    kind = "LaurentSeries"

    def __init__(self, base: Field, variable: str = "t", group: str = "Z",
                 truncation: int = DEFAULT_TRUNCATION, support_bound: int = DEFAULT_SUPPORT_BOUND,
                 attrs: Attributes | None = None):
        super().__init__(attrs)
        self.base = base
        self.var = variable
        self.group = OrderedGroup([group]).tower[0]
        self.truncation = truncation
        self.support_bound = support_bound
        self.characteristic = base.characteristic
        self.residue_char = getattr(base, "residue_char", None)
        self.kind = "LaurentSeries" if self.group == "Z" else "HahnSeries"
        self.place_residue = base
        if self.group not in ("Z", "Q") and self.characteristic:
            inverted = self.group[len("Z[1/"):-1]
            if int(inverted) != self.characteristic:
                raise FieldError("perfect-hull series need exponent group Z[1/char]")

    def name(self):
        inner = self.base.name()
        if self.group == "Z":
            return f"{inner}(({self.var}))"
        if self.group == "Q":
            return f"{inner}(({self.var}^Q))"
        return f"{inner}(({self.var}))^perf"

    def descriptor(self):
        d = {"kind": self.kind, "base": self.base.descriptor(), "variable": self.var,
             "truncation": self.truncation}
        if self.group != "Z":
            d["group"] = self.group
            d["support_bound"] = self.support_bound
        return self._with_attrs(d)

    # raw helpers
    def _norm(self, terms: dict, prec):
        items = sorted((e, c) for e, c in terms.items() if not c.is_zero() and (prec is None or e < prec))
        if len(items) > self.support_bound:
            cut = items[self.support_bound][0]
            prec = _min(prec, cut)
            items = items[: self.support_bound]
        return (tuple(items), prec)

    def _val(self, a):
        return a[0][0][0] if a[0] else None

    def _from_fraction(self, q):
        c = self.base(q)
        return self._norm({Fraction(0): c}, None)

    def from_terms(self, terms, prec=None) -> Elem:
        acc = {}
        for e, c in terms:
            e = Fraction(e)
            if not component_contains(self.group, e):
                raise FieldError(f"exponent {e} not in {self.group}")
            acc[e] = acc.get(e, self.base.zero) + self.base(c)
        return Elem(self, self._norm(acc, None if prec is None else Fraction(prec)))

    def _add(self, a, b):
        acc = dict(a[0])
        for e, c in b[0]:
            acc[e] = acc[e] + c if e in acc else c
        return self._norm(acc, _min(a[1], b[1]))

    def _neg(self, a):
        return (tuple((e, -c) for e, c in a[0]), a[1])

    def _mul(self, a, b):
        va, vb = self._val(a), self._val(b)
        prec = None
        if a[1] is not None:
            prec = _min(prec, a[1] + (vb if vb is not None else (b[1] or 0)))
        if b[1] is not None:
            prec = _min(prec, b[1] + (va if va is not None else (a[1] or 0)))
        if not a[0] or not b[0]:
            return ((), prec)
        acc = {}
        for (e1, c1), (e2, c2) in itertools.product(a[0], b[0]):
            e = e1 + e2
            if prec is not None and e >= prec:
                continue
            acc[e] = acc[e] + c1 * c2 if e in acc else c1 * c2
        return self._norm(acc, prec)

    def _inv(self, a):
        (e0, c0), rest = a[0][0], a[0][1:]
        rel = Fraction(self.truncation)
        if a[1] is not None:
            rel = min(rel, a[1] - e0)
        if not rest and a[1] is None:
            return (((-e0, c0.inverse()),), None)
        ci = c0.inverse()
        h = ((tuple((e - e0, c * ci) for e, c in rest)), rel)
        # 1/(1+h) = sum (-h)^k, truncated at rel
        total = self._norm({Fraction(0): self.base.one}, rel)
        term = total
        neg_h = self._neg(h)
        for _ in range(4 * self.support_bound + int(rel) * 8 + 8):
            term = self._mul(term, neg_h)
            term = self._norm(dict(term[0]), rel)
            if not term[0]:
                break
            total = self._add(total, term)
        else:
            raise FieldError("series inversion did not converge within the support bound")
        shifted = {e - e0: c * ci for e, c in total[0]}
        return self._norm(shifted, None if total[1] is None else total[1] - e0)

    def _is_zero(self, a):
        return not a[0]

    def _key(self, a):
        return (tuple((e, c.field._key(c.raw)) for e, c in a[0]), a[1])

    def _format(self, a):
        parts = []
        for e, c in a[0]:
            cs = str(c)
            if e == 0:
                parts.append(cs)
                continue
            mono = self.var if e == 1 else (f"{self.var}^{e}" if e.denominator == 1 else f"{self.var}^({e})")
            if cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            elif any(ch in cs for ch in "+ ") or (cs.startswith("-") and not cs[1:].isdigit()):
                parts.append(f"({cs})*{mono}")
            else:
                parts.append(f"{cs}*{mono}")
        if a[1] is not None:
            p = a[1]
            parts.append(f"O({self.var}^{p})" if p.denominator == 1 else f"O({self.var}^({p}))")
        return " + ".join(parts) if parts else "0"

    def variable(self, name):
        if name == self.var:
            return self.place_monomial(1)
        return self.place_lift(self.base.variable(name))

    def variable_power(self, name, exponent):
        if name == self.var:
            return self.place_monomial(exponent)
        return self.place_lift(self.base.variable_power(name, exponent))

    # element access
    def terms(self, x: Elem):
        return x.raw[0]

    def precision_of(self, x: Elem):
        return x.raw[1]

    def is_exact(self, x: Elem) -> bool:
        return x.raw[1] is None

    def graded_elements(self):
        yield self.zero
        base_elems = []
        base_iter = self.base.graded_elements()
        for h in itertools.count(1):
            try:
                base_elems.append(next(base_iter))
            except StopIteration:
                pass
            coeffs = [c for c in base_elems if not c.is_zero()]
            exps = sorted({Fraction(n, d) for d in self._denominators(h) for n in range(-h * d, h * d + 1)
                           if abs(Fraction(n, d)) <= h}, key=lambda e: (abs(e), e))
            for e in exps:
                for c in coeffs:
                    if abs(e) == h or c is coeffs[-1]:
                        yield self.from_terms([(e, c)])
                        yield self.from_terms([(0, self.base.one), (e, c)]) if e > 0 else self.from_terms([(e, c), (0, self.base.one)])

    def _denominators(self, h):
        if self.group == "Z":
            return [1]
        if self.group == "Q":
            return list(range(1, h + 1))
        ell = int(self.group[len("Z[1/"):-1])
        return [ell**k for k in range(0, max(1, h // 2) + 1)]

    def sample(self, rng, n, exact=True):
        out = []
        for _ in range(n):
            k = rng.randint(1, 4)
            v = rng.randint(-3, 4)
            dens = self._denominators(3)
            terms = {}
            for i in range(k):
                d = rng.choice(dens)
                e = Fraction(v) + Fraction(rng.randint(0, 3 * d), d) if i else Fraction(v)
                c = self.base.sample(rng, 1)[0]
                if c.is_zero():
                    c = self.base.one
                terms[e] = c
            out.append(self.from_terms(terms.items()))
        return out

    # native place
    place_henselian = True

    @property
    def place_name(self):
        return f"{self.var}-adic"

    @property
    def place_tag(self):
        return self.group

    def place_value(self, x):
        return self._val(x.raw)

    def place_angular(self, x):
        return x.raw[0][0][1]

    def place_monomial(self, g):
        g = Fraction(g)
        if not component_contains(self.group, g):
            raise FieldError(f"{g} is not in the exponent group {self.group}")
        return Elem(self, (((g, self.base.one),), None))

    def place_lift(self, r):
        return Elem(self, self._norm({Fraction(0): self.base(r)}, None))

    def stages(self):
        from .stage import native_stages

        return native_stages(self)

    # attributes
    def _computed_zeta(self, p):
        return self.base.has_zeta(p)

    def _zeta(self, p):
        return self.place_lift(self.base.zeta_p(p))

    def _computed_real_closed(self):
        return self.group == "Q" and self.base.is_real_closed()

    def sign(self, x):
        # the series ordering: sign of the leading coefficient
        if x.is_zero():
            return 0
        return self.base.sign(Elem(self.base, self.place_angular(x).raw))

    def _computed_euclidean(self):
        return self.base.is_euclidean() and component_is_p_divisible(self.group, 2)

    def is_alg_closed(self):
        if self.attrs.alg_closed is not None:
            return self.attrs.alg_closed
        return self.group == "Q" and self.base.is_alg_closed()

    def _computed_perfect(self):
        return self.group != "Z" and self.base.is_perfect()

    def _computed_p_closed(self, p):
        if self.characteristic == p:
            if self.group == "Q":
                return self.base.is_perfect() and self.base.is_p_closed(p)
            return False
        if component_is_p_divisible(self.group, p):
            return self.base.is_p_closed(p)
        if self.base.has_zeta(p):
            return False
        raise FieldError(f"p-closedness of {self} for p={p} must be declared")

    def non_pth_power(self, p):
        if self.characteristic == p and self.group == "Z":
            return self.place_monomial(1)
        c = self.base.non_pth_power(p)
        return None if c is None else self.place_lift(c)

    # power tests
    def _pth_power_test(self, x, p):
        terms, prec = x.raw
        e0, c0 = terms[0]
        if self.characteristic != p:
            if not component_contains(self.group, e0 / p):
                return FALSE
            return self.base.pth_power_test(c0, p)
        # characteristic p: x is a p-th power iff every term is
        verdicts = []
        for e, c in terms:
            if not component_contains(self.group, e / p):
                return FALSE
            verdicts.append(self.base.pth_power_test(c, p))
        out = all_of(verdicts)
        if out.is_true and prec is not None and not self.base.is_perfect():
            return Tri.unknown("truncated tail may hold a non-p-th-power coefficient", precision=str(prec))
        return out

    def pth_root(self, x, p):
        x = self(x)
        if x.is_zero():
            return x
        if self.characteristic != p:
            return self._kummer_root(x, p)
        out = []
        for e, c in x.raw[0]:
            if not component_contains(self.group, e / p):
                return None
            r = self.base.pth_root(c, p)
            if r is None:
                return None
            out.append((e / p, r))
        prec = x.raw[1]
        return Elem(self, self._norm(dict(out), None if prec is None else prec / p))

    def _kummer_root(self, x, p):
        (e0, c0) = x.raw[0][0]
        if not component_contains(self.group, e0 / p):
            return None
        r0 = self.base.pth_root(c0, p)
        if r0 is None:
            return None
        lead = Elem(self, (((e0, c0),), None))
        u = x / lead  # 1 + h
        h = u - 1
        # binomial series (1+h)^(1/p)
        total = self.one
        term = self.one
        coef = Fraction(1)
        for k in range(1, self.truncation + 1):
            coef = coef * (Fraction(1, p) - (k - 1)) / k
            term = term * h
            if term.is_zero():
                break
            total = total + term * coef
        return Elem(self, (((e0 / p, r0),), None)) * total

    def _artin_schreier_test(self, x):
        p = self.characteristic
        terms, prec = x.raw
        if prec is not None and prec <= 0:
            return Tri.unknown("constant term lost to truncation", precision=str(prec))
        neg = {e: c for e, c in terms if e < 0}
        const = next((c for e, c in terms if e == 0), None)
        verdict = TRUE
        if neg:
            verdict = self._reduce_negative(neg, p)
        if verdict.is_false:
            return verdict
        if const is not None:
            verdict = verdict & self.base.artin_schreier_test(const)
        return verdict

    def _reduce_negative(self, neg: dict, p: int) -> Tri:
        if self.group == "Q":
            if self.base.is_perfect():
                return TRUE
            return Tri.unknown("iterated p-th roots over an imperfect base")
        closest = max(neg)
        cur = dict(neg)
        for _ in range(64 * self.support_bound):
            cur = {e: c for e, c in cur.items() if not c.is_zero() and e < 0}
            if not cur:
                return TRUE
            e = min(cur)
            c = cur.pop(e)
            if e > closest or not component_contains(self.group, e / p):
                return FALSE
            t = self.base.pth_power_test(c, p)
            if not t.is_true:
                return t if t.is_unknown else FALSE
            r = self.base.pth_root(c, p)
            # x - (y^p - y) with y = r t^(e/p) moves the term to exponent e/p
            cur[e / p] = cur[e / p] + r if e / p in cur else r
        return Tri.unknown("Artin-Schreier reduction exceeded its step budget")
