"""Simple extensions K[X]/(f) of degree at most 4.

Over a p-adic base the extension carries the unique prolongation of the
p-adic valuation, computed through the norm and normalized so that a
uniformizer has value 1.  Only totally ramified (or trivial) extensions get
a native place; that covers Q_3(zeta_3) = Q_3[X]/(X^2+X+1).
"""
from __future__ import annotations

import math
from fractions import Fraction

import sympy

from ..tri import FALSE, TRUE, Tri
from .base import Attributes, Elem, Field, FieldError, PrecisionError

MAX_DEGREE = 4


def parse_polynomial(text: str) -> list[Fraction]:
    """Coefficients (constant first) of a univariate rational polynomial in X."""
    X = sympy.Symbol("X")
    expr = sympy.sympify(text.replace("^", "**"), locals={"X": X})
    if expr.free_symbols - {X}:
        raise FieldError(f"minimal polynomial must be in X with rational coefficients: {text}")
    poly = sympy.Poly(expr, X)
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())]
    return coeffs


class QuotientExtension(Field):
    kind = "QuotientExtension"

    def __init__(self, base: Field, minimal_polynomial: str, generator: str = "z",
                 attrs: Attributes | None = None):
        super().__init__(attrs)
        coeffs = parse_polynomial(minimal_polynomial)
        if coeffs[-1] != 1:
            raise FieldError("minimal polynomial must be monic")
        self.n = len(coeffs) - 1
        if not 1 <= self.n <= MAX_DEGREE:
            raise FieldError(f"degree {self.n} outside 1..{MAX_DEGREE}")
        self.base = base
        self.poly_text = minimal_polynomial
        self.coeffs = [base(c) for c in coeffs]
        self.generator = generator
        self.characteristic = base.characteristic
        self.residue_char = getattr(base, "residue_char", None)
        self.place_residue = None
        if hasattr(base, "p") and getattr(base, "place_residue", None) is not None:
            self._setup_place()

    def name(self):
        return f"{self.base.name()}[{self.generator}]/({self.poly_text.replace('X', self.generator)})"

    def descriptor(self):
        return self._with_attrs({"kind": "QuotientExtension", "base": self.base.descriptor(),
                                 "minimal_polynomial": self.poly_text, "generator": self.generator})

    # raw: tuple of n base elements
    def _from_fraction(self, q):
        return (self.base(q),) + (self.base.zero,) * (self.n - 1)

    def _add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def _neg(self, a):
        return tuple(-x for x in a)

    def _mul(self, a, b):
        prod = [self.base.zero] * (2 * self.n - 1)
        for i, x in enumerate(a):
            if x.is_zero():
                continue
            for j, y in enumerate(b):
                prod[i + j] = prod[i + j] + x * y
        for k in range(len(prod) - 1, self.n - 1, -1):
            top = prod[k]
            if top.is_zero():
                continue
            for i in range(self.n):
                prod[k - self.n + i] = prod[k - self.n + i] - top * self.coeffs[i]
        return tuple(prod[: self.n])

    def _is_zero(self, a):
        return all(x.is_zero() for x in a)

    def _key(self, a):
        return tuple(x.field._key(x.raw) for x in a)

    def _format(self, a):
        parts = []
        for i, c in enumerate(a):
            if c.is_zero():
                continue
            cs = str(c)
            if i == 0:
                parts.append(cs)
            else:
                mono = self.generator if i == 1 else f"{self.generator}^{i}"
                parts.append(mono if cs == "1" else f"({cs})*{mono}")
        return " + ".join(parts) if parts else "0"

    def variable(self, name):
        if name == self.generator:
            if self.n == 1:
                return Elem(self, (-self.coeffs[0],))
            return Elem(self, (self.base.zero, self.base.one) + (self.base.zero,) * (self.n - 2))
        return self.embed(self.base.variable(name))

    def embed(self, c) -> Elem:
        c = c if isinstance(c, Elem) else self.base(c)
        return Elem(self, (c,) + (self.base.zero,) * (self.n - 1))

    def in_base(self, x: Elem):
        """The base-field element x, or None when x is not in the base."""
        if all(c.is_zero() for c in x.raw[1:]):
            return x.raw[0]
        return None

    # linear algebra over the base
    def _matrix(self, a):
        theta = self.variable(self.generator).raw if self.n > 1 else None
        cols = []
        cur = a
        for _ in range(self.n):
            cols.append(cur)
            if theta is not None:
                cur = self._mul(cur, theta)
        return [[cols[j][i] for j in range(self.n)] for i in range(self.n)]

    def _pivot_size(self, x):
        v = getattr(self.base, "valuation", None)
        return -(v(x) if v else 0)

    def _solve(self, m, rhs):
        n = self.n
        m = [row[:] + [rhs[i]] for i, row in enumerate(m)]
        for col in range(n):
            cands = [r for r in range(col, n) if not m[r][col].is_zero()]
            if not cands:
                raise ZeroDivisionError("singular multiplication matrix")
            piv = max(cands, key=lambda r: self._pivot_size(m[r][col]))
            m[col], m[piv] = m[piv], m[col]
            inv = m[col][col].inverse()
            m[col] = [x * inv for x in m[col]]
            for r in range(n):
                if r != col and not m[r][col].is_zero():
                    f = m[r][col]
                    m[r] = [x - f * y for x, y in zip(m[r], m[col])]
        return [m[i][n] for i in range(n)]

    def _inv(self, a):
        rhs = [self.base.one] + [self.base.zero] * (self.n - 1)
        return tuple(self._solve(self._matrix(a), rhs))

    def norm(self, x: Elem):
        m = self._matrix(x.raw)
        det = self.base.one
        n = self.n
        m = [row[:] for row in m]
        for col in range(n):
            cands = [r for r in range(col, n) if not m[r][col].is_zero()]
            if not cands:
                return self.base.zero
            piv = max(cands, key=lambda r: self._pivot_size(m[r][col]))
            if piv != col:
                m[col], m[piv] = m[piv], m[col]
                det = -det
            det = det * m[col][col]
            inv = m[col][col].inverse()
            for r in range(col + 1, n):
                f = m[r][col] * inv
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
        return det

    # valuation via the norm
    def _raw_value(self, x: Elem) -> Fraction | None:
        if x.is_zero():
            return None
        nv = self.base.valuation(self.norm(x))
        if nv is None:
            raise PrecisionError(f"norm of {x} indistinguishable from zero")
        return Fraction(nv, self.n)

    def _setup_place(self):
        p = self.base.p
        theta = self.variable(self.generator)
        vals = []
        for c in range(p):
            v = self._raw_value(theta - c)
            if v is not None:
                vals.append((v, c))
        e = 1
        for v, _ in vals:
            e = e * v.denominator // math.gcd(e, v.denominator)
        if self.n % e:
            raise FieldError("inconsistent ramification data")
        if e != self.n and self.n != 1:
            raise FieldError("only totally ramified extensions carry a native place")
        self.e = e
        self.uniformizer = None
        for v, c in vals:
            if v * e == 1:
                self.uniformizer = theta - c
                break
        if self.uniformizer is None:
            if e != 1:
                raise FieldError("no uniformizer among X - c")
            self.uniformizer = self.embed(p)
        self.place_residue = self.base.place_residue
        self._pi_inv = self.uniformizer.inverse()

    place_tag = "Z"
    place_henselian = True

    @property
    def place_name(self):
        return f"{self.base.p}-adic"

    def place_value(self, x):
        v = self._raw_value(x)
        return None if v is None else int(v * self.e)

    def place_angular(self, x):
        v = self.place_value(x)
        u = x * self._pi_inv**v if v >= 0 else x * self.uniformizer ** (-v)
        return self._residue_of_unit(u)

    def _residue_of_unit(self, u):
        for c in range(self.base.p):
            d = u - c
            if d.is_zero() or self.place_value(d) > 0:
                return self.place_residue(c)
        raise PrecisionError("no residue class found for unit")

    def place_monomial(self, g):
        return self.uniformizer ** int(g)

    def place_lift(self, r):
        return self.embed(self.base.place_lift(r))

    def stages(self):
        from .stage import native_stages

        return native_stages(self)

    def graded_elements(self):
        base_iter = self.base.graded_elements()
        seen = []
        for c in base_iter:
            seen.append(c)
            for i in range(self.n):
                for d in seen:
                    vec = [self.base.zero] * self.n
                    vec[0] = d
                    vec[i] = vec[i] + c if i else c
                    yield Elem(self, tuple(vec))

    def sample(self, rng, n):
        return [Elem(self, tuple(self.base.sample(rng, self.n))) for _ in range(n)]

    def sample_integral(self, rng, n, digits=16):
        out = []
        for _ in range(n):
            out.append(Elem(self, tuple(self.base(rng.randrange(self.base.p**digits)) for _ in range(self.n))))
        return out

    def _computed_zeta(self, p):
        return self._zeta(p) is not None

    def _zeta(self, p):
        cands = [self.variable(self.generator)]
        small = [-1, 0, 1]
        if self.n > 1:
            for a in small:
                for b in small:
                    cands.append(a + b * self.variable(self.generator))
        for z in cands:
            if z != 1 and not z.is_zero() and z**p == 1:
                return z
        return None

    def _computed_p_closed(self, p):
        return False

    def _computed_p_henselian_field(self, p):
        return self.place_residue is not None

    def _pth_power_test(self, x, q):
        if self.place_residue is None:
            return Tri.unknown("no valuation on this extension")
        v = self.place_value(x)
        if v % q:
            return FALSE
        u = x * self.uniformizer ** (-v)
        p = self.base.p
        if q != p:
            return self.place_residue.pth_power_test(self._residue_of_unit(u), q)
        e_p = self.place_value(self.embed(p))
        need = 2 * e_p + 1
        return self._hensel_search(u, q, need)

    def _hensel_search(self, u, q, need):
        """Is some unit y with v(y^q - u) >= need; exact criterion by Hensel."""
        p = self.base.p
        pi = self.uniformizer
        budget = [0]

        def ok(y, level):
            d = y**q - u
            if d.is_zero():
                return True
            return self.place_value(d) >= level

        def dfs(prefix, depth, pipow):
            budget[0] += 1
            if depth == need:
                return True
            for c in range(p):
                if depth == 0 and c == 0:
                    continue
                y = prefix + pipow * c
                if ok(y, depth + 1) and dfs(y, depth + 1, pipow * pi):
                    return True
            return False

        return Tri.of(dfs(self.zero, 0, self.one))
