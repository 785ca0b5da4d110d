"""Bundled field descriptors with hand-derived expected canonical valuations.

Each entry records, per prime, the depth of the canonical p-henselian
valuation on the native chain, the depth of v^{2*} where it applies, and the
branch of the clause dispatch expected to accept it.
"""
from __future__ import annotations

import json
from importlib import resources


def names() -> list[str]:
    return sorted(p.name[:-5] for p in resources.files(__package__).iterdir() if p.name.endswith(".json"))


def entry(name: str) -> dict:
    return json.loads(resources.files(__package__).joinpath(f"{name}.json").read_text())


def load(name: str, precision: int | None = None):
    from ..fields import field_from_descriptor

    return field_from_descriptor(entry(name)["field"], precision)


def path(name: str) -> str:
    return str(resources.files(__package__).joinpath(f"{name}.json"))
