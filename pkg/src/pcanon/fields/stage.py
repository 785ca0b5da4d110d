"""Elementary places: one rank-one stage of a field's native place tower."""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, eq=False)
class Stage:
    """The rank-one place a field carries by construction.

    ``field`` is the field being valued, ``residue`` its residue field, and
    ``tag`` the archimedean value-group component (see :mod:`pcanon.ogroup`).
    ``monomial(g)`` returns an element of value ``g`` whose angular component
    is 1, and ``lift`` is a section of the residue map on representatives.
    """

    field: object

    @property
    def tag(self) -> str:
        return self.field.place_tag

    @property
    def residue(self):
        return self.field.place_residue

    @property
    def certified_henselian(self) -> bool:
        return self.field.place_henselian

    def value(self, x):
        """Value of x, or None for zero."""
        return self.field.place_value(self.field(x))

    def angular(self, x):
        return self.field.place_angular(self.field(x))

    def monomial(self, g):
        return self.field.place_monomial(g)

    def lift(self, r):
        return self.field.place_lift(self.field.place_residue(r))

    def __repr__(self):
        return f"Stage({self.field.name()}, {self.tag})"


def native_stages(field) -> list[Stage]:
    if getattr(field, "place_residue", None) is None:
        return []
    return [Stage(field)] + native_stages(field.place_residue)
