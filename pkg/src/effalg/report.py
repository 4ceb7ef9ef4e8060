"""Small result containers shared by the checkers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


class EffectAlgebraError(ValueError):
    """Base class for input and construction errors."""


class SizeCapError(EffectAlgebraError):
    pass


class NotOrthoalgebraError(EffectAlgebraError):
    pass


class NotSubalgebraError(EffectAlgebraError):
    pass


class InadmissibleDiagramError(EffectAlgebraError):
    def __init__(self, message: str, report: "ValidationReport | None" = None):
        super().__init__(message)
        self.report = report


class PreconditionError(EffectAlgebraError):
    pass


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple

    def __str__(self) -> str:
        return f"{self.axiom}: {self.witness}"


@dataclass
class ValidationReport:
    """Violations found by an exhaustive check. Empty means valid."""

    subject: str
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, axiom: str, *witness) -> None:
        self.violations.append(Violation(axiom, tuple(witness)))

    def __bool__(self) -> bool:
        return self.ok

    def lines(self) -> list[str]:
        if self.ok:
            return [f"{self.subject}: ok"]
        return [f"{self.subject}: {v}" for v in self.violations]


@dataclass
class Report:
    """Outcome of a theorem check.

    ``rows`` carries the diagnostic data (rank triples, dimension tables);
    ``failures`` lists what went wrong, and ``passed`` is true iff it is empty.
    """

    name: str
    rows: list[dict[str, Any]] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)
    info: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.passed

    def fail(self, msg: str) -> None:
        self.failures.append(msg)

    def expect(self, cond: bool, msg: str) -> bool:
        if not cond:
            self.failures.append(msg)
        return cond

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "rows": self.rows,
            "failures": self.failures,
            "info": self.info,
        }
