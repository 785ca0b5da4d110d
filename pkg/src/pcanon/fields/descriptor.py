"""JSON field descriptors: nested ``kind`` objects plus declared attributes."""
from __future__ import annotations

import json
from pathlib import Path

from .base import Attributes, Field, FieldError
from .finite import FiniteField
from .mixed import MixedSeries
from .padic import DEFAULT_PRECISION, PAdicField
from .quotient import QuotientExtension
from .rationals import Rationals, StubField
from .ratfunc import RationalFunctionField
from .series import DEFAULT_SUPPORT_BOUND, DEFAULT_TRUNCATION, SeriesField


def _build(d: dict, precision: int | None) -> Field:
    if not isinstance(d, dict) or "kind" not in d:
        raise FieldError(f"field descriptor must be an object with a 'kind': {d!r}")
    d = dict(d)
    kind = d.pop("kind")
    attrs = Attributes.from_json(d.pop("attributes", None))
    sub = lambda key: _build(d.pop(key), precision)  # noqa: E731

    if kind == "PrimeField":
        out = FiniteField(int(d.pop("p")), attrs)
    elif kind == "FiniteField":
        out = FiniteField(int(d.pop("q")), attrs, d.pop("generator", "g"))
    elif kind == "Rationals":
        out = Rationals(d.pop("place", None), attrs)
    elif kind == "Stub":
        out = StubField(d.pop("label"), int(d.pop("characteristic", 0)), attrs)
    elif kind == "PAdic":
        prec = precision or int(d.pop("precision", DEFAULT_PRECISION))
        d.pop("precision", None)
        residue = sub("residue") if "residue" in d else None
        out = PAdicField(int(d.pop("p")), prec, residue, attrs)
    elif kind in ("LaurentSeries", "HahnSeries", "HahnFiniteSupport"):
        group = d.pop("group", "Z" if kind == "LaurentSeries" else "Q")
        out = SeriesField(sub("base"), d.pop("variable", "t"), group,
                          int(d.pop("truncation", DEFAULT_TRUNCATION)),
                          int(d.pop("support_bound", DEFAULT_SUPPORT_BOUND)), attrs)
    elif kind == "QuotientExtension":
        out = QuotientExtension(sub("base"), d.pop("minimal_polynomial"), d.pop("generator", "z"), attrs)
    elif kind == "RationalFunctionField":
        out = RationalFunctionField(int(d.pop("p")), d.pop("variable", "u"), attrs)
    elif kind == "MixedSeries":
        out = MixedSeries(sub("coefficients"), d.pop("variable", "s"), d.pop("group", "Z[1/2]"), attrs)
    else:
        raise FieldError(f"unknown field kind {kind!r}")
    d.pop("label", None)
    d.pop("comment", None)
    if d:
        raise FieldError(f"unexpected keys {sorted(d)} in {kind} descriptor")
    return out


def field_from_descriptor(d: dict, precision: int | None = None) -> Field:
    """Build a field; ``precision`` overrides every p-adic precision inside."""
    return _build(d, precision)


def load_field(source, precision: int | None = None) -> Field:
    """From a dict, a JSON string, or a path to a JSON file.

    Zoo files wrap the descriptor as ``{"field": {...}, ...}``.
    """
    if isinstance(source, dict):
        data = source
    else:
        text = str(source)
        p = Path(text)
        if not text.lstrip().startswith("{") and p.exists():
            text = p.read_text()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise FieldError(f"bad field JSON: {e}") from None
    if "field" in data and "kind" not in data:
        data = data["field"]
    return field_from_descriptor(data, precision)
