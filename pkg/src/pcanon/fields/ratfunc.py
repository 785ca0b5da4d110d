"""Rational function fields F_p(u) with exact arithmetic."""
from __future__ import annotations

import itertools
from fractions import Fraction

import sympy

from ..tri import FALSE, TRUE, Tri
from .base import Attributes, Elem, Field, FieldError
from .finite import FiniteField, is_prime


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def _padd(a, b, p):
    n = max(len(a), len(b))
    return _trim(((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n))


def _pneg(a, p):
    return tuple((-c) % p for c in a)


def _pmul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _pdivmod(a, b, p):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    q = [0] * max(len(a) - len(b) + 1, 0)
    inv = pow(b[-1], -1, p)
    while len(r) >= len(b) and r:
        c = r[-1] * inv % p
        shift = len(r) - len(b)
        q[shift] = c
        for i, bc in enumerate(b):
            r[shift + i] = (r[shift + i] - c * bc) % p
        r = list(_trim(r))
    return _trim(q), _trim(r)


def _pgcd(a, b, p):
    while b:
        a, b = b, _pdivmod(a, b, p)[1]
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return tuple(c * inv % p for c in a)


class RationalFunctionField(Field):
    kind = "RationalFunctionField"

    def __init__(self, p: int, variable: str = "u", attrs: Attributes | None = None):
        super().__init__(attrs)
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.var = variable
        self._prime = FiniteField(p)

    def name(self):
        return f"F_{self.p}({self.var})"

    def descriptor(self):
        return self._with_attrs({"kind": "RationalFunctionField", "p": self.p, "variable": self.var})

    # raw: (numerator, monic denominator), coprime, constant-first coefficients
    def _make(self, num, den):
        p = self.p
        num, den = _trim(num), _trim(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return ((), (1,))
        g = _pgcd(num, den, p)
        num = _pdivmod(num, g, p)[0]
        den = _pdivmod(den, g, p)[0]
        inv = pow(den[-1], -1, p)
        return (tuple(c * inv % p for c in num), tuple(c * inv % p for c in den))

    def _from_fraction(self, q):
        p = self.p
        if q.denominator % p == 0:
            raise ZeroDivisionError(f"{q} is not defined in characteristic {p}")
        return self._make((q.numerator * pow(q.denominator, -1, p) % p,), (1,))

    def _add(self, a, b):
        p = self.p
        return self._make(_padd(_pmul(a[0], b[1], p), _pmul(b[0], a[1], p), p), _pmul(a[1], b[1], p))

    def _neg(self, a):
        return (_pneg(a[0], self.p), a[1])

    def _mul(self, a, b):
        return self._make(_pmul(a[0], b[0], self.p), _pmul(a[1], b[1], self.p))

    def _inv(self, a):
        if not a[0]:
            raise ZeroDivisionError("inverse of zero")
        return self._make(a[1], a[0])

    def _is_zero(self, a):
        return not a[0]

    def _key(self, a):
        return a

    def _poly_str(self, c):
        terms = []
        for i in range(len(c) - 1, -1, -1):
            if not c[i]:
                continue
            mono = "" if i == 0 else (self.var if i == 1 else f"{self.var}^{i}")
            if not mono:
                terms.append(str(c[i]))
            else:
                terms.append(mono if c[i] == 1 else f"{c[i]}*{mono}")
        return " + ".join(terms) if terms else "0"

    def _format(self, a):
        num = self._poly_str(a[0])
        if a[1] == (1,):
            return num
        return f"({num})/({self._poly_str(a[1])})"

    def variable(self, name):
        if name == self.var:
            return Elem(self, ((0, 1), (1,)))
        raise FieldError(f"unknown symbol {name!r} in {self}")

    def polynomial(self, coeffs) -> Elem:
        return Elem(self, self._make(tuple(c % self.p for c in coeffs), (1,)))

    def graded_elements(self):
        p = self.p
        for deg in itertools.count(0):
            for tail in itertools.product(range(p), repeat=deg + 1):
                if deg and tail[-1] == 0:
                    continue
                if not any(tail):
                    if deg == 0:
                        yield self.zero
                    continue
                yield self.polynomial(tail)
                if deg:
                    yield Elem(self, self._make((1,), tail))

    def sample(self, rng, n):
        out = []
        for _ in range(n):
            num = tuple(rng.randrange(self.p) for _ in range(rng.randrange(1, 4)))
            den = tuple(rng.randrange(self.p) for _ in range(rng.randrange(1, 3))) + (1,)
            out.append(Elem(self, self._make(num, den)))
        return out

    # attributes
    def _computed_zeta(self, p):
        return (self.p - 1) % p == 0

    def _zeta(self, p):
        z = self._prime.zeta_p(p)
        return self(int(z.raw[0]))

    def _computed_perfect(self):
        return False

    def _computed_p_closed(self, p):
        return False

    def _computed_p_henselian_field(self, p):
        return False

    def non_pth_power(self, p):
        return self.variable(self.var) if p == self.p else None

    # p-th powers
    def _factor(self, poly):
        U = sympy.Symbol("U")
        expr = sum(int(c) * U**i for i, c in enumerate(poly))
        lc, facs = sympy.factor_list(sympy.Poly(expr, U, modulus=self.p))
        return int(lc) % self.p, [(tuple(int(c) % self.p for c in reversed(f.all_coeffs())), e) for f, e in facs]

    def _pth_power_test(self, x, q):
        num, den = x.raw
        if q == self.p:
            return Tri.of(all(c == 0 for i, c in enumerate(num) if i % q) and
                          all(c == 0 for i, c in enumerate(den) if i % q))
        return Tri.of(self.pth_root(x, q) is not None)

    def pth_root(self, x, q):
        x = self(x)
        if x.is_zero():
            return x
        num, den = x.raw
        if q == self.p:
            if not self._pth_power_test(x, q).is_true:
                return None
            return Elem(self, self._make(num[::q], den[::q]))
        parts = []
        for poly in (num, den):
            lc, facs = self._factor(poly)
            if any(e % q for _, e in facs):
                return None
            r = self._prime.pth_root(self._prime(lc), q) if lc != 1 else self._prime.one
            if r is None:
                return None
            acc = (int(r.raw[0]),)
            for f, e in facs:
                for _ in range(e // q):
                    acc = _pmul(acc, f, self.p)
            parts.append(acc)
        return Elem(self, self._make(parts[0], parts[1]))

    def _artin_schreier_test(self, x):
        """Decided when x is a Laurent polynomial in u; Unknown otherwise."""
        num, den = x.raw
        p = self.p
        if any(den[:-1]):
            return Tri.unknown("Artin-Schreier test with poles away from u = 0, infinity")
        shift = len(den) - 1
        terms = {i - shift: c for i, c in enumerate(num) if c}
        while True:
            nonconst = [e for e in terms if e != 0]
            if not nonconst:
                break
            # pole at infinity first, then at u = 0
            e = max(nonconst, key=abs)
            if e % p:
                return FALSE
            c = terms.pop(e)
            terms[e // p] = (terms.get(e // p, 0) + c) % p
            if not terms[e // p]:
                del terms[e // p]
        return TRUE if not terms else FALSE
