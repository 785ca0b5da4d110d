"""Field models and their elements.

Every concrete field kind subclasses :class:`Field` and implements arithmetic
on a kind-specific raw representation; :class:`Elem` wraps a raw value with a
reference to its parent so that ordinary operators work.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, fields as dc_fields
from fractions import Fraction
from typing import Iterator

from ..tri import FALSE, TRUE, Tri


class FieldError(ValueError):
    pass


class PrecisionError(FieldError):
    """Raised when an operation needs more precision than an operand carries."""


@dataclass(frozen=True)
class Attributes:
    """Declared model-theoretic attributes; ``None`` defers to the kind's rule."""

    zeta: frozenset | None = None
    p_closed: frozenset | None = None
    p_henselian: frozenset | None = None
    euclidean: bool | None = None
    real_closed: bool | None = None
    alg_closed: bool | None = None
    sep_closed: bool | None = None
    perfect: bool | None = None

    @classmethod
    def from_json(cls, data: dict | None) -> "Attributes":
        data = dict(data or {})
        kw = {}
        for f in dc_fields(cls):
            if f.name not in data:
                continue
            v = data.pop(f.name)
            if f.name in ("zeta", "p_closed", "p_henselian"):
                v = frozenset(int(p) for p in v)
            kw[f.name] = v
        if data:
            raise FieldError(f"unknown attributes {sorted(data)}")
        return cls(**kw)

    def to_json(self) -> dict:
        out = {}
        for f in dc_fields(self):
            v = getattr(self, f.name)
            if v is None:
                continue
            out[f.name] = sorted(v) if isinstance(v, frozenset) else v
        return out


class Elem:
    __slots__ = ("field", "raw")

    def __init__(self, field: "Field", raw):
        self.field = field
        self.raw = raw

    def _coerce(self, other):
        if isinstance(other, Elem):
            if other.field is not self.field and other.field != self.field:
                raise FieldError(f"mixing elements of {self.field} and {other.field}")
            return other.raw
        return self.field(other).raw

    def __add__(self, other):
        return Elem(self.field, self.field._add(self.raw, self._coerce(other)))

    __radd__ = __add__

    def __neg__(self):
        return Elem(self.field, self.field._neg(self.raw))

    def __sub__(self, other):
        return Elem(self.field, self.field._add(self.raw, self.field._neg(self._coerce(other))))

    def __rsub__(self, other):
        return Elem(self.field, self.field._add(self._coerce(other), self.field._neg(self.raw)))

    def __mul__(self, other):
        return Elem(self.field, self.field._mul(self.raw, self._coerce(other)))

    __rmul__ = __mul__

    def inverse(self) -> "Elem":
        if self.field._is_zero(self.raw):
            raise ZeroDivisionError(f"{self} is zero in {self.field}")
        return Elem(self.field, self.field._inv(self.raw))

    def __truediv__(self, other):
        return self * Elem(self.field, self._coerce(other)).inverse()

    def __rtruediv__(self, other):
        return self.field(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_zero(self) -> bool:
        return self.field._is_zero(self.raw)

    def __eq__(self, other):
        if not isinstance(other, (Elem, int, Fraction)):
            return NotImplemented
        return self.field._is_zero(self.field._add(self.raw, self.field._neg(self._coerce(other))))

    def __hash__(self):
        return hash((str(self.field), self.field._key(self.raw)))

    def __repr__(self):
        return f"<{self.field.kind} {self.field.format(self)}>"

    def __str__(self):
        return self.field.format(self)


class Field:
    """Base class for computable field models."""

    kind = "abstract"
    characteristic = 0
    is_finite = False

    def __init__(self, attrs: Attributes | None = None):
        self.attrs = attrs or Attributes()

    # raw hooks, overridden per kind
    def _add(self, a, b):
        raise NotImplementedError

    def _neg(self, a):
        raise NotImplementedError

    def _mul(self, a, b):
        raise NotImplementedError

    def _inv(self, a):
        raise NotImplementedError

    def _is_zero(self, a) -> bool:
        raise NotImplementedError

    def _from_fraction(self, q: Fraction):
        raise NotImplementedError

    def _key(self, a):
        raise TypeError(f"elements of {self.kind} are not hashable")

    def _format(self, a) -> str:
        return repr(a)

    def _parse(self, text: str):
        from .literal import evaluate

        return evaluate(self, text).raw

    # element construction
    def __call__(self, value) -> Elem:
        if isinstance(value, Elem):
            if value.field != self:
                raise FieldError(f"{value!r} does not belong to {self}")
            return value
        if isinstance(value, bool):
            raise TypeError("bool is not a field element")
        if isinstance(value, int):
            return Elem(self, self._from_fraction(Fraction(value)))
        if isinstance(value, Fraction):
            return Elem(self, self._from_fraction(value))
        if isinstance(value, str):
            return Elem(self, self._parse(value.strip()))
        raise TypeError(f"cannot coerce {value!r} into {self}")

    @property
    def zero(self) -> Elem:
        return self(0)

    @property
    def one(self) -> Elem:
        return self(1)

    def format(self, x: Elem) -> str:
        return self._format(x.raw)

    def parse(self, text: str) -> Elem:
        return self(text)

    def variable(self, name: str) -> Elem:
        raise FieldError(f"unknown symbol {name!r} in {self}")

    def variable_power(self, name: str, exponent: Fraction) -> Elem:
        if exponent.denominator != 1:
            raise FieldError(f"rational exponent on {name!r} is not allowed in {self}")
        return self.variable(name) ** int(exponent)

    # element generation
    def elements(self) -> Iterator[Elem]:
        raise FieldError(f"{self} is infinite")

    def graded_elements(self) -> Iterator[Elem]:
        """Deterministic enumeration by increasing height."""
        raise NotImplementedError

    def sample(self, rng, n: int) -> list[Elem]:
        raise NotImplementedError

    # declared / derived attributes
    def has_zeta(self, p: int) -> bool:
        if p == 2:
            return self.characteristic != 2
        if self.attrs.zeta is not None:
            return p in self.attrs.zeta
        if self.characteristic == p:
            return False
        return self._computed_zeta(p)

    def _computed_zeta(self, p: int) -> bool:
        return self.is_alg_closed() or self.is_sep_closed()

    def zeta_p(self, p: int) -> Elem:
        if not self.has_zeta(p):
            raise FieldError(f"{self} does not contain a primitive {p}-th root of unity")
        if p == 2:
            return self(-1)
        z = self._zeta(p)
        if z is None:
            raise FieldError(f"primitive {p}-th root of unity is not representable in {self}")
        return z

    def _zeta(self, p: int) -> Elem | None:
        return None

    def _declared_or(self, name: str, computed):
        v = getattr(self.attrs, name)
        return computed() if v is None else v

    def is_alg_closed(self) -> bool:
        return bool(self._declared_or("alg_closed", lambda: False))

    def is_sep_closed(self) -> bool:
        return bool(self._declared_or("sep_closed", lambda: self.is_alg_closed()))

    def is_real_closed(self) -> bool:
        return bool(self._declared_or("real_closed", self._computed_real_closed))

    def _computed_real_closed(self) -> bool:
        return False

    def is_euclidean(self) -> bool:
        return bool(self._declared_or("euclidean", lambda: self.is_real_closed() or self._computed_euclidean()))

    def _computed_euclidean(self) -> bool:
        return False

    def is_perfect(self) -> bool:
        if self.characteristic == 0:
            return True
        return bool(self._declared_or("perfect", self._computed_perfect))

    def _computed_perfect(self) -> bool:
        return True

    def is_p_closed(self, p: int) -> bool:
        """Whether the field has no Galois extension of degree p (K = K(p))."""
        if self.attrs.p_closed is not None:
            return p in self.attrs.p_closed
        if self.is_sep_closed():
            return True
        if self.is_real_closed():
            return p != 2
        return self._computed_p_closed(p)

    def _computed_p_closed(self, p: int) -> bool:
        raise FieldError(f"p-closedness of {self} for p={p} must be declared")

    def is_p_henselian_field(self, p: int) -> bool:
        """Whether the field admits a non-trivial p-henselian valuation."""
        if self.attrs.p_henselian is not None:
            return p in self.attrs.p_henselian
        if self.is_real_closed():
            return False
        return self._computed_p_henselian_field(p)

    def _computed_p_henselian_field(self, p: int) -> bool:
        # every nontrivial stage of the native tower is henselian by construction
        return any(stage.certified_henselian for stage in self.stages())

    # membership tests interpreting (K^x)^p and the Artin-Schreier image
    def pth_power_test(self, x: Elem, p: int) -> Tri:
        x = self(x)
        if x.is_zero():
            raise FieldError("p-th power test of zero")
        if self.is_sep_closed() and p != self.characteristic:
            return TRUE
        if self.is_real_closed():
            return TRUE if p != 2 else Tri.of(self.sign(x) > 0)
        return self._pth_power_test(x, p)

    def _pth_power_test(self, x: Elem, p: int) -> Tri:
        return Tri.unknown(f"no p-th power procedure for {self.kind}")

    def pth_root(self, x: Elem, p: int) -> Elem | None:
        """A p-th root of x when one is computable, else None."""
        return None

    def artin_schreier_test(self, x: Elem) -> Tri:
        p = self.characteristic
        if p == 0:
            raise FieldError(f"Artin-Schreier test needs positive characteristic, {self} has 0")
        x = self(x)
        if x.is_zero():
            return TRUE
        if (self.attrs.p_closed is not None and p in self.attrs.p_closed) or self.is_sep_closed():
            return TRUE
        return self._artin_schreier_test(x)

    def _artin_schreier_test(self, x: Elem) -> Tri:
        return Tri.unknown(f"no Artin-Schreier procedure for {self.kind}")

    def sign(self, x: Elem) -> int:
        raise FieldError(f"{self} is not ordered")

    def non_pth_power(self, p: int) -> Elem | None:
        """An element that is not a p-th power, witnessing imperfection."""
        return None

    # valuation structure
    def stages(self) -> list:
        """Native place tower, coarsest stage first."""
        return []

    # identity
    def descriptor(self) -> dict:
        raise NotImplementedError

    def _with_attrs(self, d: dict) -> dict:
        a = self.attrs.to_json()
        if a:
            d["attributes"] = a
        return d

    def to_json(self) -> str:
        return json.dumps(self.descriptor(), sort_keys=True)

    def __eq__(self, other):
        return isinstance(other, Field) and self.to_json() == other.to_json()

    def __hash__(self):
        return hash(self.to_json())

    def __str__(self) -> str:
        return self.name()

    def name(self) -> str:
        return self.kind
