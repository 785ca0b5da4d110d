"""Valuations on the coarsening chain of a field's native place tower.

A field model carries a tower of rank-one places, coarsest first.  Using the
first ``depth`` stages gives a valuation whose value group is the lexicographic
product of the stage groups; ``depth = 0`` is the trivial valuation.  Every
valuation considered here is one of these chain members.

Chain index 0 is the finest member and the last index is the trivial one.
"""
from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .fields.base import Elem, Field, FieldError
from .ogroup import ConvexSubgroup, GroupElement, OrderedGroup, component_contains
from .tri import FALSE, TRUE, Tri

DEFAULT_HENSEL_BUDGET = 50


class HClass(enum.Enum):
    H1 = "H1"
    H2 = "H2"


class ValuationError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Valuation:
    field: Field
    depth: int

    def __post_init__(self):
        if not 0 <= self.depth <= len(self.field.stages()):
            raise ValuationError(f"depth {self.depth} outside the native tower of {self.field}")

    # identity
    @property
    def stages(self):
        return self.field.stages()[: self.depth]

    @property
    def chain_index(self) -> int:
        return len(self.field.stages()) - self.depth

    @property
    def is_trivial(self) -> bool:
        return self.depth == 0

    def __eq__(self, other):
        return isinstance(other, Valuation) and self.field == other.field and self.depth == other.depth

    def __hash__(self):
        return hash((self.field, self.depth))

    def label(self) -> str:
        if self.depth == 0:
            return "trivial"
        return " then ".join(st.field.place_name for st in self.stages)

    def __repr__(self):
        return f"Valuation({self.field.name()}, depth={self.depth}, {self.label()})"

    def to_json(self) -> dict:
        return {"index": self.chain_index, "depth": self.depth, "label": self.label(),
                "value_group": list(self.value_group.tower), "residue_field": self.residue_field.name()}

    # structure
    @property
    def value_group(self) -> OrderedGroup:
        return OrderedGroup([s.tag for s in self.stages])

    @property
    def residue_field(self) -> Field:
        return self.stages[-1].residue if self.depth else self.field

    @property
    def residue_characteristic(self) -> int:
        return self.residue_field.characteristic

    # evaluation
    def value(self, x) -> GroupElement | None:
        """v(x) as a group element, None standing for infinity."""
        y = self.field(x)
        if y.is_zero():
            return None
        coords = []
        for st in self.stages:
            g = st.value(y)
            coords.append(g)
            y = st.angular(y)
        return self.value_group.element(*coords)

    def residue(self, x) -> Elem:
        y = self.field(x)
        for st in self.stages:
            if y.is_zero():
                return self.residue_field.zero
            g = st.value(y)
            if g > 0:
                return self.residue_field.zero
            if g < 0:
                raise ValuationError(f"{x} is not in the valuation ring")
            y = st.angular(y)
        return y

    def in_ring(self, x) -> bool:
        g = self.value(x)
        return g is None or g >= self.value_group.zero()

    def in_maximal_ideal(self, x) -> bool:
        g = self.value(x)
        return g is None or g > self.value_group.zero()

    def lift(self, r) -> Elem:
        """An element of the valuation ring with residue r."""
        y = self.residue_field(r)
        for st in reversed(self.stages):
            y = st.field.place_lift(st.field.place_residue(y))
        return y

    def monomial(self, g) -> Elem:
        """An element of value g built from the stage monomials."""
        coords = g.coords if isinstance(g, GroupElement) else tuple(g)
        if len(coords) != self.depth:
            raise ValuationError("value has the wrong rank")
        y = None
        for st, c in zip(reversed(self.stages), reversed(coords)):
            m = st.monomial(c)
            y = m if y is None else m * st.field.place_lift(st.field.place_residue(y))
        return y if y is not None else self.field.one

    # chain
    def coarsenings(self) -> list["Coarsening"]:
        out = []
        for d in range(self.depth, -1, -1):
            delta = ConvexSubgroup(self.value_group, self.depth - d)
            out.append(Coarsening(Valuation(self.field, d), delta, self.value_group.quotient_by_convex(delta)))
        return out

    def coarsen_to(self, depth: int) -> "Valuation":
        if depth > self.depth:
            raise ValuationError("not a coarsening")
        return Valuation(self.field, depth)

    def induced_on_residue(self, w: "Valuation") -> "Valuation":
        """The valuation v-bar that v induces on the residue field of a coarsening w."""
        if w.field != self.field or w.depth > self.depth:
            raise ValuationError("w is not a coarsening of v")
        return Valuation(w.residue_field, self.depth - w.depth)

    # sampling
    def value_strata(self, height: int = 4, positive: bool = True) -> list[GroupElement]:
        """Deterministic value representatives of bounded height, by increasing height."""
        comps = [_component_values(t, height) for t in self.value_group.tower]
        out = []
        for coords in itertools.product(*comps):
            g = self.value_group.element(*coords)
            if (g > self.value_group.zero()) if positive else (g >= self.value_group.zero()):
                out.append(g)
        out.sort(key=lambda g: (max((abs(c) for c in g.coords), default=0), g.coords))
        return out

    def residue_units(self, n: int, seed: int = 0) -> list[Elem]:
        R = self.residue_field
        if R.is_finite:
            units = [x for x in R.elements() if not x.is_zero()]
        else:
            units = [x for x in itertools.islice(R.graded_elements(), 4 * n) if not x.is_zero()]
        rng = random.Random(seed)
        if len(units) > n:
            units = units[:1] + rng.sample(units[1:], n - 1)
        return units

    def maximal_ideal_samples(self, height: int = 4, units_per_stratum: int = 2, seed: int = 0) -> list[Elem]:
        out = []
        units = self.residue_units(units_per_stratum, seed)
        for g in self.value_strata(height):
            m = self.monomial(g)
            for u in units:
                out.append(m * self.lift(u))
        return out

    def ring_samples(self, height: int = 4, units_per_stratum: int = 2, seed: int = 0) -> list[Elem]:
        units = self.residue_units(units_per_stratum, seed)
        out = [self.lift(u) for u in units]
        return out + self.maximal_ideal_samples(height, units_per_stratum, seed)


@dataclass(frozen=True)
class Coarsening:
    valuation: Valuation
    kernel: ConvexSubgroup
    value_group: OrderedGroup


def _component_values(tag: str, height: int) -> list[Fraction]:
    if tag == "Z":
        dens = [1]
    elif tag == "Q":
        dens = [1, 2, 3]
    else:
        ell = int(tag[len("Z[1/"):-1].split("*")[0]) if "*" not in tag else 2
        dens = [1, ell]
    vals = {Fraction(n, d) for d in dens for n in range(-height * d, height * d + 1) if abs(Fraction(n, d)) <= height}
    return sorted((v for v in vals if component_contains(tag, v)), key=lambda v: (abs(v), v))


def chain(K: Field) -> list[Valuation]:
    """All chain members, finest first."""
    n = len(K.stages())
    return [Valuation(K, d) for d in range(n, -1, -1)]


def trivial(K: Field) -> Valuation:
    return Valuation(K, 0)


def value_of(v: Valuation, x) -> GroupElement | None:
    return v.value(x)


def residue_of(v: Valuation, x) -> Elem:
    return v.residue(x)


def coarsenings(v: Valuation) -> list[Coarsening]:
    return v.coarsenings()


# p-henselianity
def is_p_henselian(v: Valuation, p: int, budget: int = DEFAULT_HENSEL_BUDGET) -> Tri:
    """Structural certificate when every stage is henselian, else sampled Hensel lifting."""
    if v.is_trivial:
        return TRUE
    if all(st.certified_henselian for st in v.stages):
        return TRUE
    return hensel_counterexample(v, p, budget)[0]


def hensel_counterexample(v: Valuation, p: int, budget: int = DEFAULT_HENSEL_BUDGET):
    """Search monic degree-p polynomials over O_v with a simple residue root that fails to lift.

    Returns ``(verdict, witness)``; witness is ``(coefficients, residue root)``.
    """
    K = v.field
    R = v.residue_field
    if not hasattr(K, "rational_roots") or not R.is_finite:
        return Tri.unknown("no exact root finder for this field", budget=budget), None
    ring = [x for x in itertools.islice(K.graded_elements(), 400) if v.in_ring(x)][:12]
    tried = 0
    for coeffs in itertools.product(ring, repeat=p):
        if tried >= budget:
            break
        tried += 1
        f = list(coeffs) + [K.one]
        fbar = [v.residue(c) for c in f]
        roots = K.rational_roots(f)
        for a in R.elements():
            if not _poly_eval(fbar, a).is_zero() or _poly_eval(_deriv(fbar), a).is_zero():
                continue
            if not any(v.in_ring(r) and v.residue(r) == a for r in roots):
                return Tri.of(False), (f, a)
    return Tri.unknown("no lifting failure within budget", budget=budget), None


def _poly_eval(coeffs, x):
    acc = x.field.zero
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _deriv(coeffs):
    return [c * i for i, c in enumerate(coeffs)][1:]


def classify_H(v: Valuation, p: int) -> HClass:
    t = is_p_henselian(v, p)
    if not t.is_true:
        raise ValuationError(f"{v!r} is not certified {p}-henselian ({t})")
    return HClass.H2 if v.residue_field.is_p_closed(p) else HClass.H1


def canonical_p_henselian(K: Field, p: int) -> Valuation:
    """Coarsest chain member in H2 if any, else the finest p-henselian member."""
    if K.is_p_closed(p):
        return trivial(K)
    members = [v for v in chain(K) if is_p_henselian(v, p).is_true]
    h2 = [v for v in members if classify_H(v, p) is HClass.H2]
    if h2:
        return min(h2, key=lambda v: v.depth)
    return max(members, key=lambda v: v.depth)


def canonical_2_star(K: Field) -> Valuation:
    """Coarsest 2-henselian chain member with Euclidean residue field."""
    v2 = canonical_p_henselian(K, 2)
    if not v2.residue_field.is_euclidean():
        raise ValuationError(f"residue field of the canonical 2-henselian valuation on {K} is not Euclidean")
    cands = [v for v in chain(K) if is_p_henselian(v, 2).is_true and v.residue_field.is_euclidean()]
    return min(cands, key=lambda v: v.depth)
