"""Shared audit-report container used by every invariant checker."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class AuditReport:
    """Per-clause pass/fail with witnesses.

    A clause passes iff it collected no witnesses.  `checked` records every
    clause name that was evaluated so reports stay comparable even when all
    clauses pass.
    """

    name: str
    checked: list[str] = field(default_factory=list)
    violations: dict[str, list[str]] = field(default_factory=dict)

    def clause(self, clause: str) -> None:
        if clause not in self.checked:
            self.checked.append(clause)

    def fail(self, clause: str, witness: str) -> None:
        self.clause(clause)
        self.violations.setdefault(clause, []).append(witness)

    @property
    def passed(self) -> bool:
        return not self.violations

    def merge(self, other: "AuditReport") -> None:
        for clause in other.checked:
            self.clause(f"{other.name}.{clause}")
        for clause, wits in other.violations.items():
            self.violations.setdefault(f"{other.name}.{clause}", []).extend(wits)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "clauses_checked": len(self.checked),
            "violations": {
                clause: wits[:10] for clause, wits in sorted(self.violations.items())
            },
            "violation_count": sum(len(w) for w in self.violations.values()),
        }

    def __str__(self) -> str:
        if self.passed:
            return f"{self.name}: pass ({len(self.checked)} clauses)"
        parts = [
            f"{clause}: {len(wits)} (e.g. {wits[0]})"
            for clause, wits in sorted(self.violations.items())
        ]
        return f"{self.name}: FAIL " + "; ".join(parts)
