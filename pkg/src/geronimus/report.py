from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class CheckReport:
    """Outcome of a verification pass that completed without raising."""

    identity: str
    checks: int
    details: dict = field(default_factory=dict)

    def __str__(self) -> str:
        return f"{self.identity}: {self.checks} checks passed"
