"""Violation reports returned by the independent verifiers."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Violation:
    tag: str
    detail: str


@dataclass
class Report:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    @property
    def tags(self) -> set:
        return {v.tag for v in self.violations}

    def add(self, tag, detail):
        self.violations.append(Violation(tag, detail))

    def as_dict(self) -> dict:
        return {"ok": self.ok, "violations": [{"tag": v.tag, "detail": v.detail} for v in self.violations]}
