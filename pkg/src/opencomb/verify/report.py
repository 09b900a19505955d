"""Machine-readable pass/fail records shared by all identity suites."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction


def _text(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(x)


@dataclass(frozen=True)
class CheckRecord:
    suite: str
    instance: str
    lhs: str
    rhs: str
    passed: bool


@dataclass
class Report:
    suite: str
    records: list[CheckRecord] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def add(self, instance: str, lhs, rhs, passed: bool | None = None) -> bool:
        ok = (lhs == rhs) if passed is None else passed
        self.records.append(CheckRecord(self.suite, instance, _text(lhs), _text(rhs), bool(ok)))
        return ok

    @property
    def passed(self) -> bool:
        return bool(self.records) and all(r.passed for r in self.records)

    @property
    def failures(self) -> list[CheckRecord]:
        return [r for r in self.records if not r.passed]

    def to_dicts(self) -> list[dict]:
        return [{"suite": r.suite, "instance": r.instance, "lhs": r.lhs, "rhs": r.rhs,
                 "pass": r.passed} for r in self.records]

    def to_json(self) -> str:
        return json.dumps({"suite": self.suite, "passed": self.passed, "notes": self.notes,
                           "records": self.to_dicts()}, sort_keys=True, indent=1) + "\n"

    def summary(self) -> str:
        return (f"{self.suite}: {len(self.records) - len(self.failures)}/{len(self.records)} "
                f"instances pass")
