"""Check reports.

Every verification routine in the toolkit returns a Report rather than a bare
boolean.  A passing report records the truncation bound it was certified
under (PASS is always bound-relative for infinite categories); a failing
report carries a replayable witness: the exact inputs to the violated check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Report:
    name: str
    passed: bool
    bound: Any = None
    witness: Any = None
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.passed

    def to_json(self) -> dict:
        out = {"check": self.name, "passed": self.passed}
        if self.bound is not None:
            out["bound"] = _jsonable(self.bound)
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        if self.details:
            out["details"] = _jsonable(self.details)
        return out


def _jsonable(x):
    """Coerce witness payloads (tuples, morphism objects, ...) to JSON-safe data."""
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in x]
        if isinstance(x, (set, frozenset)):
            items.sort(key=str)
        return items
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    return str(x)


def passing(name, bound=None, **details) -> Report:
    return Report(name, True, bound=bound, details=details)


def failing(name, witness, bound=None, **details) -> Report:
    return Report(name, False, bound=bound, witness=witness, details=details)
