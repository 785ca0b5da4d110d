"""Mixed-characteristic fields with a 2-adic stage above an s-adic stage.

Elements are finite sums ``sum c_q s^q`` with coefficients in a p-adic field
``C`` (typically ``W(k)[1/p]`` for a declared perfect residue ``k``) and
exponents in an archimedean group.  The valuation is the Gauss valuation
composed with the s-adic one: first the minimal p-adic value of a
coefficient, then the least exponent among the coefficients attaining it.
So the coarsest stage is p-adic with residue ``k((s^G))`` and the finer stage
is s-adic on that residue, which gives value group ``Z x G``.

The field modeled is the henselization of this valued field.  Inverses are
computed where the p-adic Neumann series converges; elements whose inverse
would need infinite s-support raise :class:`FieldError`.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

from ..ogroup import OrderedGroup, component_contains
from ..tri import FALSE, Tri
from .base import Attributes, Elem, Field, FieldError, PrecisionError
from .padic import PAdicField
from .series import SeriesField

MAX_SUPPORT = 2048


class MixedSeries(Field):
    kind = "MixedSeries"

    def __init__(self, coefficients: PAdicField, variable: str = "s", group: str = "Z[1/2]",
                 attrs: Attributes | None = None):
        super().__init__(attrs)
        if not isinstance(coefficients, PAdicField):
            raise FieldError("MixedSeries needs p-adic coefficients")
        self.C = coefficients
        self.p = coefficients.p
        self.residue_char = self.p
        self.var = variable
        self.group = OrderedGroup([group]).tower[0]
        k = coefficients.place_residue
        self.place_residue = SeriesField(k, variable, self.group)

    def name(self):
        return f"{self.C.name()}{{{{{self.var}^{self.group}}}}}"

    def descriptor(self):
        return self._with_attrs({"kind": "MixedSeries", "coefficients": self.C.descriptor(),
                                 "variable": self.var, "group": self.group})

    # raw: (terms, N): terms sorted by exponent with nonzero coefficients,
    # every coefficient (present or not) known modulo p^N
    def _norm(self, acc: dict, n: int):
        cap = Elem(self.C, self.C._zero(n))
        items = []
        for e, c in sorted(acc.items()):
            c = c + cap
            if not c.is_zero():
                items.append((e, c))
        if len(items) > MAX_SUPPORT:
            raise FieldError("support bound exceeded")
        return (tuple(items), n)

    def _from_fraction(self, q):
        c = self.C(q)
        return self._norm({Fraction(0): c}, self.C.absolute_precision(c))

    def from_terms(self, terms) -> Elem:
        acc = {}
        for e, c in terms:
            e = Fraction(e)
            if not component_contains(self.group, e):
                raise FieldError(f"exponent {e} not in {self.group}")
            acc[e] = acc.get(e, self.C.zero) + self.C(c)
        n = min((self.C.absolute_precision(c) for c in acc.values()), default=self.C.precision)
        return Elem(self, self._norm(acc, n))

    def _add(self, a, b):
        acc = dict(a[0])
        for e, c in b[0]:
            acc[e] = acc[e] + c if e in acc else c
        return self._norm(acc, min(a[1], b[1]))

    def _neg(self, a):
        return (tuple((e, -c) for e, c in a[0]), a[1])

    def _mul(self, a, b):
        ca = self._content(a) if a[0] else a[1]
        cb = self._content(b) if b[0] else b[1]
        n = min(a[1] + cb, b[1] + ca)
        acc = {}
        for (e1, c1), (e2, c2) in itertools.product(a[0], b[0]):
            e = e1 + e2
            acc[e] = acc[e] + c1 * c2 if e in acc else c1 * c2
        return self._norm(acc, n)

    def _is_zero(self, a):
        return not a[0]

    def _key(self, a):
        return (tuple((e, c.raw) for e, c in a[0]), a[1])

    def _content(self, a):
        return min(self.C.valuation(c) for _, c in a[0])

    def _inv(self, a):
        if not a[0]:
            raise ZeroDivisionError("inverse of zero")
        k = self._content(a)
        e0, c0 = next((e, c) for e, c in a[0] if self.C.valuation(c) == k)
        ci = c0.inverse()
        lead_inv = (((-e0, ci),), self.C.absolute_precision(ci))
        m = self._add(self._mul(a, lead_inv), self._neg(self._from_fraction(1)))
        if not m[0]:
            return self._mul(self._from_fraction(1), lead_inv) if m[1] >= self.C.precision else \
                self._mul(self._norm({Fraction(0): self.C.one}, m[1]), lead_inv)
        if self._content(m) < 1:
            raise FieldError("inverse needs infinite s-support; not representable in this model")
        # 1/(1+m) = sum (-m)^j converges p-adically; the omitted tail lies in p^cap
        cap = m[1]
        total = self._from_fraction(1)
        term = total
        neg_m = self._neg(m)
        while term[0] and self._content(term) < cap:
            term = self._mul(term, neg_m)
            total = self._add(total, term)
        total = self._norm(dict(total[0]), min(total[1], cap))
        return self._mul(total, lead_inv)

    def _format(self, a):
        if not a[0]:
            return f"O({self.p}^{a[1]})"
        parts = []
        for e, c in a[0]:
            cs = str(c)
            if e == 0:
                parts.append(cs)
                continue
            mono = self.var if e == 1 else (f"{self.var}^{e}" if e.denominator == 1 else f"{self.var}^({e})")
            parts.append(mono if cs == "1" else f"({cs})*{mono}")
        return " + ".join(parts)

    def variable(self, name):
        if name == self.var:
            return self.variable_power(name, Fraction(1))
        raise FieldError(f"unknown symbol {name!r} in {self}")

    def variable_power(self, name, exponent):
        if name != self.var:
            raise FieldError(f"unknown symbol {name!r} in {self}")
        return self.from_terms([(exponent, 1)])

    def monomial(self, k: int, q, c=1) -> Elem:
        """c * p^k * s^q."""
        c = self.C(c) * self.C(self.p) ** k
        return Elem(self, self._norm({Fraction(q): c}, self.C.absolute_precision(c)))

    def graded_elements(self):
        yield self.zero
        for h in itertools.count(1):
            for k in range(-h, h + 1):
                for n in range(-h, h + 1):
                    if max(abs(k), abs(n)) == h:
                        yield self.monomial(k, n)
                        yield self.monomial(k, n) + 1

    def sample(self, rng, n):
        out = []
        dens = [1, self.p, self.p**2] if self.group != "Z" else [1]
        for _ in range(n):
            terms = {}
            for _ in range(rng.randint(1, 3)):
                q = Fraction(rng.randint(-4, 4), rng.choice(dens))
                if not component_contains(self.group, q):
                    q = Fraction(q.numerator)
                terms[q] = self.C.sample(rng, 1)[0]
            x = Elem(self, self._norm(terms, min(self.C.absolute_precision(c) for c in terms.values())))
            out.append(x if not x.is_zero() else self.one)
        return out

    # the coarse p-adic stage
    place_tag = "Z"
    place_henselian = True

    @property
    def place_name(self):
        return f"{self.p}-adic"

    def place_value(self, x):
        return self._content(x.raw) if x.raw[0] else None

    def place_angular(self, x):
        k = self._content(x.raw)
        if x.raw[1] <= k:
            raise PrecisionError("leading p-adic layer not known")
        res = self.place_residue
        terms = []
        for e, c in x.raw[0]:
            if self.C.valuation(c) == k:
                terms.append((e, self.C.place_angular(c)))
        return res.from_terms(terms)

    def place_monomial(self, g):
        return self.monomial(int(g), 0)

    def place_lift(self, r):
        r = self.place_residue(r)
        if r.raw[1] is not None:
            raise PrecisionError("cannot lift a truncated residue series")
        return Elem(self, self._norm({e: self.C.place_lift(c) for e, c in r.raw[0]}, self.C.precision))

    def stages(self):
        from .stage import native_stages

        return native_stages(self)

    # attributes
    def _computed_zeta(self, p):
        return False

    def _computed_p_closed(self, p):
        return False

    # power tests
    def _pth_power_test(self, x, q):
        k = self._content(x.raw)
        res = self.place_residue
        if q != self.p:
            # residue characteristic differs from q: value and angular component decide
            if k % q:
                return FALSE
            ang = self.place_angular(x)
            e0 = res.place_value(ang)
            if not component_contains(self.group, e0 / q):
                return FALSE
            return res.base.pth_power_test(res.place_angular(ang), q)
        if q != 2:
            return Tri.unknown("p-th powers in residue characteristic p are implemented for p = 2")
        if k % 2:
            return FALSE
        u = x * self.monomial(-k, 0)
        ubar = self.place_angular(u)
        t = res.pth_power_test(ubar, 2)
        if not t.is_true:
            return t
        r = res.pth_root(ubar, 2)
        if r is None:
            return Tri.unknown("square root of the residue is not computable")
        # u = y0^2 (1 + 2 z'); squares need z' in 2 O, then 1 + 4 z'' by residue Artin-Schreier
        y0 = self.place_lift(r)
        d = u - y0 * y0
        if self._abs_precision(d) < 3:
            return Tri.unknown("coefficient precision below the square-class bound", precision=self._abs_precision(d))
        if d.is_zero():
            return Tri.of(True)
        if self._content(d.raw) < 2:
            return FALSE
        z2 = self.place_angular(d * self.monomial(-2, 0)) if self._content(d.raw) == 2 else res.zero
        if z2.is_zero():
            return Tri.of(True)
        return res.artin_schreier_test(z2 / (r * r))

    def _abs_precision(self, x: Elem) -> int:
        return x.raw[1]
