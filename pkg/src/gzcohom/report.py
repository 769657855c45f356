"""Structured pass/fail reports shared by validators and checkers."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Violation:
    kind: str
    where: Any
    message: str

    def __str__(self):
        return f"[{self.kind}] {self.where}: {self.message}"


@dataclass
class Report:
    name: str
    violations: list[Violation] = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def add(self, kind: str, where: Any, message: str) -> None:
        self.violations.append(Violation(kind, where, message))

    def extend(self, other: "Report") -> None:
        self.violations.extend(other.violations)

    def summary(self) -> str:
        if self.ok:
            return f"{self.name}: PASS"
        lines = [f"{self.name}: FAIL ({len(self.violations)} violation(s))"]
        lines += [f"  {v}" for v in self.violations]
        return "\n".join(lines)
