"""Computable field models."""
from .base import Attributes, Elem, Field, FieldError, PrecisionError
from .descriptor import field_from_descriptor, load_field
from .finite import FiniteField, PrimeField
from .mixed import MixedSeries
from .padic import PAdicField
from .quotient import QuotientExtension
from .ratfunc import RationalFunctionField
from .rationals import Rationals, StubField
from .sanity import SanityReport, sanity_check_attributes
from .series import SeriesField

__all__ = [
    "Attributes", "Elem", "Field", "FieldError", "PrecisionError",
    "field_from_descriptor", "load_field",
    "FiniteField", "PrimeField", "MixedSeries", "PAdicField", "QuotientExtension",
    "RationalFunctionField", "Rationals", "StubField", "SeriesField",
    "SanityReport", "sanity_check_attributes",
]
