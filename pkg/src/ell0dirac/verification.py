"""Pass/fail records shared by every verification routine."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Check:
    identity_id: str
    anchor: str
    max_abs_deviation: float
    passed: bool
    skipped: bool = False
    note: str = ""

    def to_dict(self):
        d = {
            "identity_id": self.identity_id,
            "anchor": self.anchor,
            "max_abs_deviation": float(self.max_abs_deviation),
            "pass": bool(self.passed),
        }
        if self.skipped:
            d["skipped"] = True
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class Report:
    name: str
    checks: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if not c.skipped)

    @property
    def failures(self):
        return [c for c in self.checks if not c.passed and not c.skipped]

    @property
    def max_deviation(self) -> float:
        return max((c.max_abs_deviation for c in self.checks if not c.skipped), default=0.0)

    def counts(self):
        run = [c for c in self.checks if not c.skipped]
        return int(sum(bool(c.passed) for c in run)), len(run)

    def to_dict(self):
        ok, total = self.counts()
        d = {
            "suite": self.name,
            "pass": self.passed,
            "passed": ok,
            "total": total,
            "max_abs_deviation": float(self.max_deviation),
            "checks": [c.to_dict() for c in self.checks],
        }
        if self.info:
            d["info"] = self.info
        return d
