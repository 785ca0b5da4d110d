"""The rationals, optionally carrying a p-adic place, and declared stub fields."""
from __future__ import annotations

from fractions import Fraction

from ..tri import FALSE, TRUE, Tri
from .base import Attributes, Elem, Field, FieldError
from .finite import FiniteField, is_prime


def integer_root(n: int, k: int) -> int | None:
    """Exact k-th root of a non-negative integer, or None."""
    if n < 0:
        raise ValueError("negative radicand")
    if n < 2:
        return n
    r = int(round(n ** (1.0 / k)))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**k == n:
            return cand
    # float estimate can drift for very large n
    lo, hi = 0, 1 << (n.bit_length() // k + 1)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid**k < n:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo**k == n else None


def rational_root(q: Fraction, k: int) -> Fraction | None:
    if q < 0:
        if k % 2 == 0:
            return None
        r = rational_root(-q, k)
        return None if r is None else -r
    a = integer_root(q.numerator, k)
    b = integer_root(q.denominator, k)
    if a is None or b is None:
        return None
    return Fraction(a, b)


def v_p(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def frac_valuation(q: Fraction, p: int) -> int:
    return v_p(q.numerator, p) - v_p(q.denominator, p)


def rationals_by_height():
    """0, 1, -1, 2, -2, 1/2, -1/2, ... (each reduced fraction once)."""
    yield Fraction(0)
    h = 1
    while True:
        for b in range(1, h + 1):
            for a in (h,) if b < h else range(1, h + 1):
                if a == h or b == h:
                    f = Fraction(a, b)
                    if f.numerator == a and f.denominator == b:
                        yield f
                        yield -f
        h += 1


class _ExactRationalMixin:
    def _add(self, a, b):
        return a + b

    def _neg(self, a):
        return -a

    def _mul(self, a, b):
        return a * b

    def _inv(self, a):
        return 1 / a

    def _is_zero(self, a):
        return a == 0

    def _key(self, a):
        return a

    def _from_fraction(self, q):
        return Fraction(q)

    def _format(self, a):
        return str(a)

    def graded_elements(self):
        for q in rationals_by_height():
            yield Elem(self, q)

    def sample(self, rng, n):
        out = []
        for _ in range(n):
            num = rng.randint(-60, 60)
            den = rng.randint(1, 30)
            out.append(Elem(self, Fraction(num, den)))
        return out

    def sign(self, x):
        return (x.raw > 0) - (x.raw < 0)


class Rationals(_ExactRationalMixin, Field):
    """Q, with the p-adic place ``place`` as native (non-henselian) tower."""

    kind = "Rationals"

    def __init__(self, place: int | None = None, attrs: Attributes | None = None):
        super().__init__(attrs)
        if place is not None and not is_prime(place):
            raise FieldError(f"{place} is not prime")
        self.place = place
        self.place_residue = FiniteField(place) if place else None

    def name(self):
        return "Q" if self.place is None else f"(Q, v_{self.place})"

    def descriptor(self):
        d = {"kind": "Rationals"}
        if self.place is not None:
            d["place"] = self.place
        return self._with_attrs(d)

    place_tag = "Z"
    place_henselian = False

    @property
    def place_name(self):
        return f"{self.place}-adic"

    def place_value(self, x):
        return None if x.raw == 0 else frac_valuation(x.raw, self.place)

    def place_angular(self, x):
        q = x.raw / Fraction(self.place) ** frac_valuation(x.raw, self.place)
        return self.place_residue(q)

    def place_monomial(self, g):
        return Elem(self, Fraction(self.place) ** int(g))

    def place_lift(self, r):
        return Elem(self, Fraction(r.raw[0]))

    def stages(self):
        from .stage import native_stages

        return native_stages(self) if self.place else []

    def _computed_p_closed(self, p):
        return False

    def _computed_p_henselian_field(self, p):
        return False

    def _pth_power_test(self, x, p):
        return Tri.of(rational_root(x.raw, p) is not None)

    def pth_root(self, x, p):
        r = rational_root(self(x).raw, p)
        return None if r is None else Elem(self, r)

    def rational_roots(self, coeffs: list[Elem]) -> list[Elem]:
        """Rational roots of sum coeffs[i] X^i (exact)."""
        import sympy

        X = sympy.Symbol("X")
        poly = sympy.Poly([sympy.Rational(c.raw.numerator, c.raw.denominator) for c in reversed(coeffs)], X, domain="QQ")
        return [Elem(self, Fraction(int(r.p), int(r.q))) for r in poly.ground_roots()]


class StubField(_ExactRationalMixin, Field):
    """A field known only through declared attributes.

    Elements are those of the prime field (exact rationals in characteristic
    0, residues mod p otherwise); everything else about the field, e.g. being
    real closed or algebraically closed, is declared.  Square tests on a real
    closed stub are sign tests.
    """

    kind = "Stub"

    def __init__(self, label: str, characteristic: int = 0, attrs: Attributes | None = None):
        super().__init__(attrs)
        self.label = label
        self.characteristic = characteristic
        if characteristic:
            self._prime = FiniteField(characteristic)

    def name(self):
        return self.label

    def descriptor(self):
        return self._with_attrs({"kind": "Stub", "label": self.label, "characteristic": self.characteristic})

    def _wrap(self, method, *args):
        return getattr(self._prime, method)(*args)

    def _from_fraction(self, q):
        if self.characteristic:
            return self._prime._from_fraction(q)[0]
        return Fraction(q)

    def _add(self, a, b):
        return (a + b) % self.characteristic if self.characteristic else a + b

    def _neg(self, a):
        return -a % self.characteristic if self.characteristic else -a

    def _mul(self, a, b):
        return a * b % self.characteristic if self.characteristic else a * b

    def _inv(self, a):
        return pow(a, -1, self.characteristic) if self.characteristic else 1 / a

    def graded_elements(self):
        if self.characteristic:
            # prime subfield first, then repeats: stubs expose no further elements
            for n in range(self.characteristic):
                yield Elem(self, n)
            return
        yield from super().graded_elements()

    def sample(self, rng, n):
        if self.characteristic:
            return [Elem(self, rng.randrange(self.characteristic)) for _ in range(n)]
        return super().sample(rng, n)

    def sign(self, x):
        if self.characteristic:
            raise FieldError(f"{self} is not ordered")
        return super().sign(x)

    def _computed_p_henselian_field(self, p):
        return False

    def _pth_power_test(self, x, p):
        if p == self.characteristic:
            # representable elements lie in the perfect prime field
            return TRUE
        if self.characteristic == 0 and rational_root(x.raw, p) is not None:
            return TRUE
        if self.characteristic and self._prime.pth_power_test(self._prime(x.raw), p).is_true:
            return TRUE
        if self.attrs.p_closed is not None and p in self.attrs.p_closed and self.has_zeta(p):
            return TRUE
        return Tri.unknown(f"{p}-th powers in {self.label} are not declared")

    def pth_root(self, x, p):
        x = self(x)
        if self.characteristic == p:
            return x
        if self.characteristic == 0:
            r = rational_root(x.raw, p)
            return None if r is None else Elem(self, r)
        r = self._prime.pth_root(self._prime(x.raw), p)
        return None if r is None else Elem(self, r.raw[0])

    def _artin_schreier_test(self, x):
        r = FiniteField(self.characteristic).artin_schreier_test(FiniteField(self.characteristic)(x.raw))
        if r.is_true:
            return TRUE
        return Tri.unknown(f"Artin-Schreier image of {self.label} is not declared")

    def artin_schreier_root(self, x):
        pf = FiniteField(self.characteristic)
        r = pf.artin_schreier_root(pf(x.raw))
        return None if r is None else Elem(self, r.raw[0])
