"""Finite fields F_q, q = p^k, as polynomials modulo an irreducible of degree k."""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

from ..tri import FALSE, TRUE, Tri
from .base import Attributes, Elem, Field, FieldError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            k = 0
            while q % p == 0:
                q //= p
                k += 1
            if q != 1:
                raise FieldError("field order must be a prime power")
            return p, k
    raise FieldError("field order must be a prime power")


def _polymulmod(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _has_root_free_factor(poly, p, k):
    # brute-force irreducibility: no factor of degree <= k/2
    def divides(f, g):
        r = list(g)
        while len(r) >= len(f) and any(r):
            if r[-1] == 0:
                r.pop()
                continue
            c = r[-1] * pow(f[-1], -1, p) % p
            shift = len(r) - len(f)
            for i, fc in enumerate(f):
                r[shift + i] = (r[shift + i] - c * fc) % p
            r.pop()
        return not any(r)

    for d in range(1, k // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            f = list(tail) + [1]
            if divides(f, poly):
                return False
    return True


@lru_cache(maxsize=None)
def conway_like_modulus(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically first monic irreducible of degree k over F_p."""
    for tail in itertools.product(range(p), repeat=k):
        if tail[0] == 0 and k > 1:
            continue
        poly = list(tail) + [1]
        if _has_root_free_factor(poly, p, k):
            return tuple(poly)
    raise AssertionError("no irreducible polynomial found")


class FiniteField(Field):
    kind = "FiniteField"
    is_finite = True

    def __init__(self, q: int, attrs: Attributes | None = None, generator: str = "g"):
        super().__init__(attrs)
        self.q = q
        self.p, self.k = prime_power(q)
        self.characteristic = self.p
        self.modulus = conway_like_modulus(self.p, self.k)
        self.generator = generator

    def name(self):
        return f"F_{self.q}"

    def descriptor(self):
        if self.k == 1:
            return self._with_attrs({"kind": "PrimeField", "p": self.p})
        return self._with_attrs({"kind": "FiniteField", "q": self.q})

    # raw values are tuples of k coefficients, constant term first
    def _reduce(self, coeffs):
        c = list(coeffs)
        k, p, m = self.k, self.p, self.modulus
        while len(c) > k:
            top = c.pop()
            if top:
                shift = len(c) - k
                for i in range(k):
                    c[shift + i] = (c[shift + i] - top * m[i]) % p
        c += [0] * (k - len(c))
        return tuple(x % p for x in c)

    def _add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def _neg(self, a):
        return tuple(-x % self.p for x in a)

    def _mul(self, a, b):
        if self.k == 1:
            return (a[0] * b[0] % self.p,)
        return self._reduce(_polymulmod(a, b, self.p))

    def _inv(self, a):
        return (Elem(self, a) ** (self.q - 2)).raw

    def _is_zero(self, a):
        return not any(a)

    def _key(self, a):
        return a

    def _from_fraction(self, q: Fraction):
        if q.denominator % self.p == 0:
            raise ZeroDivisionError(f"{q} has no image in {self}")
        v = q.numerator * pow(q.denominator, -1, self.p) % self.p
        return (v,) + (0,) * (self.k - 1)

    def _format(self, a):
        if self.k == 1:
            return str(a[0])
        terms = []
        for i in range(self.k - 1, -1, -1):
            c = a[i]
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                mono = self.generator if i == 1 else f"{self.generator}^{i}"
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(terms) if terms else "0"

    def variable(self, name):
        if name == self.generator and self.k > 1:
            return Elem(self, self._reduce([0, 1]))
        return super().variable(name)

    def index(self, x: Elem) -> int:
        return sum(c * self.p**i for i, c in enumerate(x.raw))

    def from_index(self, n: int) -> Elem:
        digits = []
        for _ in range(self.k):
            n, r = divmod(n, self.p)
            digits.append(r)
        return Elem(self, tuple(digits))

    def elements(self):
        for n in range(self.q):
            yield self.from_index(n)

    graded_elements = elements

    def sample(self, rng, n):
        return [self.from_index(rng.randrange(self.q)) for _ in range(n)]

    def frobenius(self, x: Elem) -> Elem:
        return x ** self.p

    def trace(self, x: Elem) -> int:
        """Absolute trace to the prime field, as an integer mod p."""
        acc = x
        total = x
        for _ in range(self.k - 1):
            acc = acc ** self.p
            total = total + acc
        if any(total.raw[1:]):
            raise AssertionError("trace left the prime field")
        return total.raw[0]

    def _computed_zeta(self, p):
        return (self.q - 1) % p == 0

    def _zeta(self, p):
        for x in self.elements():
            if not x.is_zero() and x != 1 and (x ** p) == 1:
                return x
        return None

    def _computed_p_closed(self, p):
        return False

    def _computed_p_henselian_field(self, p):
        return False

    def _pth_power_test(self, x, p):
        if p == self.p:
            return TRUE
        g = (self.q - 1) % p
        if g != 0:
            return TRUE
        return Tri.of(x ** ((self.q - 1) // p) == 1)

    def pth_root(self, x, p):
        x = self(x)
        if x.is_zero():
            return x
        if p == self.p:
            return x ** (self.q // p)
        for y in self.elements():
            if y ** p == x:
                return y
        return None

    def _artin_schreier_test(self, x):
        return Tri.of(self.trace(x) == 0)

    def artin_schreier_root(self, x: Elem) -> Elem | None:
        for y in self.elements():
            if y ** self.p - y == x:
                return y
        return None


def PrimeField(p: int, attrs: Attributes | None = None) -> FiniteField:
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    return FiniteField(p, attrs)
