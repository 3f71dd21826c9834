"""Machine-readable verification reports."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

SCHEMA = 1


def _plain(x):
    """Coerce values to JSON-friendly types (tuples become lists, exact numbers become strings)."""
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, complex):
        return [x.real, x.imag]
    return str(x)


@dataclass
class Case:
    name: str
    passed: bool
    inputs: dict = field(default_factory=dict)
    expected: object = None
    got: object = None
    seconds: float = 0.0

    def __post_init__(self):
        self.passed = bool(self.passed)
        self.inputs = _plain(self.inputs)
        self.expected = _plain(self.expected)
        self.got = _plain(self.got)


@dataclass
class Report:
    suite: str
    cases: list = field(default_factory=list)
    wall_time: float = 0.0
    schema: int = SCHEMA

    @property
    def totals(self):
        passed = sum(c.passed for c in self.cases)
        return {"cases": len(self.cases), "passed": passed, "failed": len(self.cases) - passed}

    @property
    def ok(self):
        return all(c.passed for c in self.cases)

    def exit_code(self):
        return 0 if self.ok else 1

    def to_dict(self):
        return {
            "schema": self.schema,
            "suite": self.suite,
            "cases": [asdict(c) for c in self.cases],
            "totals": self.totals,
            "wall_time": self.wall_time,
        }

    def to_json(self, indent=2):
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, obj):
        if obj.get("schema") != SCHEMA:
            raise ValueError(f"unsupported report schema {obj.get('schema')!r}")
        return cls(obj["suite"], [Case(**c) for c in obj["cases"]], obj["wall_time"], obj["schema"])

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def __eq__(self, other):
        return isinstance(other, Report) and self.to_dict() == other.to_dict()
