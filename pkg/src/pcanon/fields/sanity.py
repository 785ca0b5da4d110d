"""Sampled falsification of declared attributes."""
from __future__ import annotations

import dataclasses
import itertools
import random
from dataclasses import dataclass, field

from .base import Field, FieldError


@dataclass
class SanityReport:
    field: str
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c["counterexample"] is None for c in self.checks)

    @property
    def counterexamples(self) -> list:
        return [c for c in self.checks if c["counterexample"] is not None]

    def to_json(self) -> dict:
        return {"field": self.field, "ok": self.ok, "checks": self.checks}


def _without(K: Field, name: str) -> Field:
    """The same field with one declaration removed, so the kind's own tests run."""
    from .descriptor import field_from_descriptor

    d = K.descriptor()
    attrs = dict(d.get("attributes", {}))
    attrs.pop(name, None)
    if attrs:
        d["attributes"] = attrs
    else:
        d.pop("attributes", None)
    return field_from_descriptor(d)


def _samples(K: Field, n: int, seed: int):
    if K.is_finite:
        return [x for x in K.elements() if not x.is_zero()]
    out = [x for x in itertools.islice(K.graded_elements(), n // 2) if not x.is_zero()]
    try:
        out += [x for x in K.sample(random.Random(seed), n - len(out)) if not x.is_zero()]
    except (NotImplementedError, FieldError):
        pass
    return out


def sanity_check_attributes(K: Field, samples: int = 100, seed: int = 0) -> SanityReport:
    report = SanityReport(K.name())
    a = K.attrs
    if a.euclidean:
        L = _without(K, "euclidean")
        bad, unknown = None, 0
        for x in _samples(L, samples, seed):
            pos, neg = L.pth_power_test(x, 2), L.pth_power_test(-x, 2)
            if pos.is_unknown or neg.is_unknown:
                unknown += 1
                continue
            if pos.is_true == neg.is_true:
                bad = str(x)
                break
        report.checks.append({"attribute": "euclidean", "counterexample": bad, "unknown": unknown})
    for p in sorted(a.p_closed or ()):
        L = _without(K, "p_closed")
        bad, unknown = None, 0
        for x in _samples(L, samples, seed):
            if L.characteristic == p:
                t = L.artin_schreier_test(x)
            elif L.has_zeta(p):
                t = L.pth_power_test(x, p)
            else:
                break
            if t.is_unknown:
                unknown += 1
            elif t.is_false:
                bad = str(x)
                break
        report.checks.append({"attribute": f"p_closed[{p}]", "counterexample": bad, "unknown": unknown})
    return report
