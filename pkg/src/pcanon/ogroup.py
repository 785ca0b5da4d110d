"""Ordered abelian groups given as lexicographic towers of archimedean groups.

A tower ``("Z", "Q")`` is the group Z x Q ordered lexicographically with the
leftmost coordinate most significant.  Besides ``"Z"`` and ``"Q"`` the
localizations ``"Z[1/n]"`` (rationals whose denominators only involve primes
dividing ``n``) are available, e.g. ``"Z[1/3]"`` for the value group of the
perfect hull of a Laurent series field in characteristic 3.

The convex subgroups of a tower of length ``n`` are exactly the suffix groups
``{0} x ... x {0} x (last k components)`` for ``k = 0..n``.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Sequence

_LOCALIZED = re.compile(r"^Z\[1/(\d+)\]$")


def prime_factors(n: int) -> frozenset[int]:
    out = set()
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return frozenset(out)


def _canonical_tag(tag: str) -> str:
    tag = tag.replace(" ", "")
    if tag in ("Z", "Q"):
        return tag
    m = _LOCALIZED.match(tag)
    if not m:
        raise ValueError(f"unknown archimedean component {tag!r}")
    primes = prime_factors(int(m.group(1)))
    if not primes:
        return "Z"
    radical = 1
    for q in primes:
        radical *= q
    return f"Z[1/{radical}]"


def component_inverted_primes(tag: str) -> frozenset[int] | None:
    """Primes invertible in the component; ``None`` means all (the rationals)."""
    if tag == "Q":
        return None
    if tag == "Z":
        return frozenset()
    return prime_factors(int(_LOCALIZED.match(tag).group(1)))


def component_contains(tag: str, value: Fraction) -> bool:
    inverted = component_inverted_primes(tag)
    if inverted is None:
        return True
    return prime_factors(value.denominator) <= inverted


def component_is_p_divisible(tag: str, p: int) -> bool:
    inverted = component_inverted_primes(tag)
    return inverted is None or p in inverted


@dataclass(frozen=True)
class OrderedGroup:
    tower: tuple[str, ...]

    def __init__(self, tower: Iterable[str]):
        object.__setattr__(self, "tower", tuple(_canonical_tag(t) for t in tower))

    @property
    def rank(self) -> int:
        return len(self.tower)

    def __len__(self) -> int:
        return len(self.tower)

    def __str__(self) -> str:
        if not self.tower:
            return "0"
        return " x ".join(self.tower)

    def element(self, *coords) -> "GroupElement":
        if len(coords) == 1 and isinstance(coords[0], (tuple, list)):
            coords = tuple(coords[0])
        return GroupElement(self, tuple(coords))

    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.rank)

    def basis(self, i: int) -> "GroupElement":
        coords = [0] * self.rank
        coords[i] = 1
        return GroupElement(self, tuple(coords))

    def convex_subgroups(self) -> list["ConvexSubgroup"]:
        return [ConvexSubgroup(self, k) for k in range(self.rank + 1)]

    def quotient_by_convex(self, delta: "ConvexSubgroup") -> "OrderedGroup":
        if delta.group != self:
            raise ValueError(f"{delta} is not a convex subgroup of {self}")
        return OrderedGroup(self.tower[: self.rank - delta.size])

    def is_p_divisible(self, p: int) -> bool:
        return all(component_is_p_divisible(t, p) for t in self.tower)

    def has_p_divisible_nontrivial_convex(self, p: int) -> bool:
        # suffixes are nested, so the smallest non-trivial one decides
        return self.rank > 0 and component_is_p_divisible(self.tower[-1], p)

    def p_divisible_convex_witness(self, p: int) -> "ConvexSubgroup | None":
        """Largest non-trivial p-divisible convex subgroup, if any."""
        best = None
        for delta in self.convex_subgroups()[1:]:
            if delta.as_group().is_p_divisible(p):
                best = delta
        return best

    def to_json(self) -> str:
        return json.dumps(list(self.tower))

    @classmethod
    def from_json(cls, text: str) -> "OrderedGroup":
        return cls(json.loads(text))


@dataclass(frozen=True)
class ConvexSubgroup:
    """The suffix subgroup carried by the last ``size`` components."""

    group: OrderedGroup
    size: int

    def __post_init__(self):
        if not 0 <= self.size <= self.group.rank:
            raise ValueError("convex subgroup size out of range")

    @property
    def is_trivial(self) -> bool:
        return self.size == 0

    def as_group(self) -> OrderedGroup:
        return OrderedGroup(self.group.tower[self.group.rank - self.size :])

    def __contains__(self, g: "GroupElement") -> bool:
        return all(c == 0 for c in g.coords[: self.group.rank - self.size])

    def __str__(self) -> str:
        if self.size == 0:
            return "0"
        pad = ["0"] * (self.group.rank - self.size)
        return " x ".join(pad + list(self.as_group().tower))


@total_ordering
@dataclass(frozen=True)
class GroupElement:
    group: OrderedGroup
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != self.group.rank:
            raise ValueError(
                f"expected {self.group.rank} coordinates, got {len(self.coords)}"
            )
        norm = []
        for tag, c in zip(self.group.tower, self.coords):
            c = Fraction(c)
            if not component_contains(tag, c):
                raise ValueError(f"{c} is not in component {tag}")
            norm.append(int(c) if c.denominator == 1 else c)
        object.__setattr__(self, "coords", tuple(norm))

    def _check(self, other: "GroupElement"):
        if not isinstance(other, GroupElement):
            return NotImplemented
        if other.group != self.group:
            raise ValueError("elements of different groups")
        return None

    def compare(self, other: "GroupElement") -> int:
        self._check(other)
        for a, b in zip(self.coords, other.coords):
            if a != b:
                return 1 if a > b else -1
        return 0

    def __lt__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self.compare(other) < 0

    def __add__(self, other):
        self._check(other)
        return GroupElement(self.group, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        return GroupElement(self.group, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return GroupElement(self.group, tuple(-a for a in self.coords))

    def __mul__(self, n: int):
        return GroupElement(self.group, tuple(n * a for a in self.coords))

    __rmul__ = __mul__

    def divided_by(self, n: int) -> "GroupElement | None":
        """``self / n`` if it lies in the group, else ``None``."""
        try:
            return GroupElement(self.group, tuple(Fraction(a) / n for a in self.coords))
        except ValueError:
            return None

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def project(self, quotient: OrderedGroup) -> "GroupElement":
        """Image under the quotient map onto a prefix tower."""
        if quotient.tower != self.group.tower[: quotient.rank]:
            raise ValueError(f"{quotient} is not a quotient of {self.group} by a convex subgroup")
        return GroupElement(quotient, self.coords[: quotient.rank])

    def __str__(self) -> str:
        if self.group.rank == 1:
            return str(self.coords[0])
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


def lex_group(tags: Sequence[str]) -> OrderedGroup:
    return OrderedGroup(tags)
