"""Three-valued verdicts for semi-decidable predicates."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Tri:
    """True, False, or Unknown together with the budget that ran out.

    Connectives follow strong Kleene logic.  ``bool(tri)`` is refused for
    Unknown so that an undecided check is never silently taken as an answer.
    """

    value: bool | None
    reason: str = ""
    budget: dict = field(default_factory=dict, compare=False, hash=False)

    @classmethod
    def of(cls, b: bool) -> "Tri":
        return TRUE if b else FALSE

    @classmethod
    def unknown(cls, reason: str, **budget) -> "Tri":
        return cls(None, reason, dict(budget))

    @property
    def is_true(self) -> bool:
        return self.value is True

    @property
    def is_false(self) -> bool:
        return self.value is False

    @property
    def is_unknown(self) -> bool:
        return self.value is None

    @property
    def definite(self) -> bool:
        return self.value is not None

    def __bool__(self) -> bool:
        if self.value is None:
            raise ValueError(f"undecided verdict used as bool: {self.reason}")
        return self.value

    def __and__(self, other: "Tri") -> "Tri":
        if self.is_false or other.is_false:
            return FALSE
        if self.is_true and other.is_true:
            return TRUE
        return self if self.is_unknown else other

    def __or__(self, other: "Tri") -> "Tri":
        if self.is_true or other.is_true:
            return TRUE
        if self.is_false and other.is_false:
            return FALSE
        return self if self.is_unknown else other

    def __invert__(self) -> "Tri":
        if self.value is None:
            return self
        return FALSE if self.value else TRUE

    def implies(self, other: "Tri") -> "Tri":
        return ~self | other

    def __str__(self) -> str:
        if self.value is None:
            return f"Unknown({self.reason})" if self.reason else "Unknown"
        return str(self.value)

    def to_json(self):
        if self.value is None:
            return {"verdict": "unknown", "reason": self.reason, "budget": self.budget}
        return {"verdict": self.value}


TRUE = Tri(True)
FALSE = Tri(False)


def all_of(tris) -> Tri:
    out = TRUE
    for t in tris:
        out = out & t
        if out.is_false:
            return out
    return out


def any_of(tris) -> Tri:
    out = FALSE
    for t in tris:
        out = out | t
        if out.is_true:
            return out
    return out
