"""p-adic fields with capped relative precision.

A nonzero element is stored as ``(val, unit, rel)`` meaning
``p^val * unit`` with ``unit`` known modulo ``p^rel``; zero is stored as
``(N, 0, 0)``, i.e. zero modulo ``p^N``.  Absolute precision propagates
through every operation so results never claim digits they do not have.

With a declared ``residue`` stub (for instance an algebraically closed field
of characteristic p) the same elements model ``W(k)[1/p]``: arithmetic is
unchanged because Q_p embeds, only the power tests change.
"""
from __future__ import annotations

from fractions import Fraction

from ..tri import FALSE, TRUE, Tri
from .base import Attributes, Elem, Field, FieldError, PrecisionError
from .finite import FiniteField, is_prime
from .rationals import frac_valuation, rationals_by_height, v_p

DEFAULT_PRECISION = 64


class PAdicField(Field):
    kind = "PAdic"

    def __init__(self, p: int, precision: int = DEFAULT_PRECISION, residue: Field | None = None,
                 attrs: Attributes | None = None):
        super().__init__(attrs)
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        self.p = p
        self.residue_char = p
        self.precision = precision
        self._declared_residue = residue
        self.place_residue = residue if residue is not None else FiniteField(p)
        self._mod = p**precision

    def name(self):
        if self._declared_residue is not None:
            return f"W({self._declared_residue.name()})[1/{self.p}]"
        return f"Q_{self.p}"

    def descriptor(self):
        d = {"kind": "PAdic", "p": self.p, "precision": self.precision}
        if self._declared_residue is not None:
            d["residue"] = self._declared_residue.descriptor()
        return self._with_attrs(d)

    def with_precision(self, precision: int) -> "PAdicField":
        return PAdicField(self.p, precision, self._declared_residue, self.attrs)

    # raw arithmetic
    def _zero(self, n):
        return (n, 0, 0)

    def _from_fraction(self, q):
        q = Fraction(q)
        if q == 0:
            return self._zero(self.precision)
        p = self.p
        a, b = q.numerator, q.denominator
        va, vb = v_p(a, p), v_p(b, p)
        ua, ub = a // p**va, b // p**vb
        unit = ua * pow(ub, -1, self._mod) % self._mod
        return (va - vb, unit, self.precision)

    def _abs(self, a):
        return a[0] + a[2]

    def _add(self, a, b):
        p = self.p
        n = min(self._abs(a), self._abs(b))
        m = min(a[0], b[0])
        if n <= m:
            return self._zero(n)
        mod = p ** (n - m)
        s = (a[1] * p ** (a[0] - m) + b[1] * p ** (b[0] - m)) % mod
        if s == 0:
            return self._zero(n)
        k = v_p(s, p)
        val = m + k
        return (val, (s // p**k) % p ** (n - val), n - val)

    def _neg(self, a):
        if a[1] == 0:
            return a
        return (a[0], -a[1] % self.p ** a[2], a[2])

    def _mul(self, a, b):
        if a[1] == 0 or b[1] == 0:
            if a[1] == 0 and b[1] == 0:
                return self._zero(a[0] + b[0])
            z, nz = (a, b) if a[1] == 0 else (b, a)
            return self._zero(z[0] + nz[0])
        r = min(a[2], b[2])
        return (a[0] + b[0], a[1] * b[1] % self.p**r, r)

    def _inv(self, a):
        return (-a[0], pow(a[1], -1, self.p ** a[2]), a[2])

    def _is_zero(self, a):
        return a[1] == 0

    def _key(self, a):
        return a

    def _format(self, a):
        if a[1] == 0:
            return f"O({self.p}^{a[0]})"
        if a[0] >= 0:
            n = a[1] * self.p ** a[0]
            # balanced representative for readability
            mod = self.p ** self._abs(a)
            if n > mod // 2:
                n -= mod
            return str(n)
        return f"{a[1]}/{self.p}^{-a[0]}"

    # element helpers
    def valuation(self, x: Elem) -> int | None:
        return None if x.raw[1] == 0 else x.raw[0]

    def absolute_precision(self, x: Elem) -> int:
        return self._abs(x.raw)

    def unit_part(self, x: Elem) -> int:
        return x.raw[1]

    def to_integer(self, x: Elem, digits: int) -> int:
        """x mod p^digits as an integer in [0, p^digits) for integral x."""
        val, unit, rel = x.raw
        if unit == 0:
            if val < digits:
                raise PrecisionError(f"{self.format(x)} not known mod {self.p}^{digits}")
            return 0
        if val < 0:
            raise FieldError("element is not integral")
        if val + rel < digits:
            raise PrecisionError(f"{self.format(x)} not known mod {self.p}^{digits}")
        return unit * self.p**val % self.p**digits

    def graded_elements(self):
        for q in rationals_by_height():
            yield self(q)

    def sample(self, rng, n):
        out = []
        for _ in range(n):
            v = rng.randint(-4, 8)
            u = rng.randrange(1, self._mod)
            while u % self.p == 0:
                u = rng.randrange(1, self._mod)
            out.append(Elem(self, (v, u, self.precision)))
        return out

    def sample_integral(self, rng, n, digits=None):
        digits = digits or self.precision
        return [self(rng.randrange(self.p**digits)) for _ in range(n)]

    # native place
    place_tag = "Z"
    place_henselian = True

    @property
    def place_name(self):
        return f"{self.p}-adic"

    def place_value(self, x):
        return self.valuation(x)

    def place_angular(self, x):
        return self.place_residue(x.raw[1] % self.p)

    def place_monomial(self, g):
        return Elem(self, (int(g), 1, self.precision))

    def place_lift(self, r):
        if isinstance(r.raw, tuple):
            return self(r.raw[0])
        if isinstance(r.raw, Fraction):
            return self(r.raw)
        return self(int(r.raw))

    def stages(self):
        from .stage import native_stages

        return native_stages(self)

    def teichmuller(self, c: int, digits: int) -> int:
        """Teichmuller representative of c mod p, modulo p^digits."""
        t = c % self.p
        for _ in range(digits):
            t = pow(t, self.p, self.p ** (digits + 1))
        return t % self.p**digits

    # attributes
    def _computed_zeta(self, p):
        return (self.p - 1) % p == 0 and self._declared_residue is None

    def _zeta(self, p):
        if (self.p - 1) % p:
            return None
        g = 2
        while pow(g, (self.p - 1) // p, self.p) == 1:
            g += 1
        root = pow(g, (self.p - 1) // p, self.p)
        return Elem(self, (0, self.teichmuller(root, self.precision), self.precision))

    def _computed_p_closed(self, p):
        return False

    def _computed_p_henselian_field(self, p):
        return True

    # power tests
    def _pth_power_test(self, x, q):
        val, unit, rel = x.raw
        if val % q:
            return FALSE
        p = self.p
        if self._declared_residue is not None:
            return self._pth_power_test_big_residue(unit, rel, q)
        if q != p:
            if rel < 1:
                return Tri.unknown("no residue digit", precision=rel)
            return self.place_residue.pth_power_test(self.place_residue(unit % p), q)
        # Hensel: y^p = u solvable iff solvable mod p^3 (valuation of f' is 1)
        need = 3
        if rel < need:
            return Tri.unknown("relative precision below Hensel bound", precision=rel, needed=need)
        mod = p**need
        target = unit % mod
        return Tri.of(any(pow(y, p, mod) == target for y in range(1, mod) if y % p))

    def _pth_power_test_big_residue(self, unit, rel, q):
        p = self.p
        k = self.place_residue
        if q != p:
            if rel < 1:
                return Tri.unknown("no residue digit", precision=rel)
            return k.pth_power_test(k(unit % p), q)
        if not (k.is_perfect() and k.is_p_closed(p)):
            return Tri.unknown(f"{p}-th powers need a perfect {p}-closed residue")
        # u / [u mod p] must be 1 mod p^2
        if rel < 2:
            return Tri.unknown("relative precision below 2", precision=rel)
        t = self.teichmuller(unit, 2)
        return Tri.of(unit * pow(t, -1, p * p) % (p * p) == 1)

    def pth_root(self, x, q):
        x = self(x)
        if x.is_zero():
            return x
        t = self.pth_power_test(x, q)
        if not t.is_true:
            return None
        val, unit, rel = x.raw
        # Newton on y^q = unit, starting from a residue/Hensel seed
        p = self.p
        seed_mod = p ** (3 if q == p else 1)
        seed = next(y for y in range(1, seed_mod) if y % p and pow(y, q, seed_mod) == unit % seed_mod)
        mod = p**rel
        y = seed
        for _ in range(rel.bit_length() + 4):
            f = (pow(y, q, p ** (rel + 2)) - unit)
            df = q * pow(y, q - 1)
            # exact division by the p-part of the derivative
            s = v_p(df, p)
            dfu = df // p**s
            y = (y - (f // p**s) * pow(dfu, -1, p ** (rel + 2))) % p ** (rel + 2)
        return Elem(self, (val // q, y % mod, rel - (1 if q == p else 0) if rel > 1 else rel))

    def brute_square_mod(self, x: Elem, k: int) -> bool:
        """Oracle: does some unit y satisfy y^2 = x mod p^k (x a unit)."""
        n = self.to_integer(x, k)
        mod = self.p**k
        return any(y * y % mod == n for y in range(mod) if y % self.p)
