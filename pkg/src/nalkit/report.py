"""Structured accept/reject outcomes shared by the checkers.

A CheckReport is accepted exactly when its failure list is empty.  Each
failure names the location that triggered it (a slash-separated path into
the checked structure), a human-readable reason, and an optional stable
tag used by tests and callers to match on the violated condition.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class CheckFailure:
    path: str
    reason: str
    tag: str | None = None

    def __str__(self) -> str:
        if self.tag:
            return f"{self.path}: [{self.tag}] {self.reason}"
        return f"{self.path}: {self.reason}"


@dataclass
class CheckReport:
    failures: list[CheckFailure] = field(default_factory=list)

    @property
    def accepted(self) -> bool:
        return not self.failures

    def add(self, path: str, reason: str, tag: str | None = None) -> None:
        self.failures.append(CheckFailure(path, reason, tag))

    def merge(self, other: "CheckReport") -> None:
        self.failures.extend(other.failures)

    def tags(self) -> set[str]:
        return {f.tag for f in self.failures if f.tag}

    def to_json(self) -> dict:
        return {
            "accepted": self.accepted,
            "failures": [
                {"path": f.path, "reason": f.reason, "tag": f.tag}
                for f in self.failures
            ],
        }

    def __str__(self) -> str:
        if self.accepted:
            return "accepted"
        lines = ["rejected:"]
        lines += [f"  - {f}" for f in self.failures]
        return "\n".join(lines)


def accept() -> CheckReport:
    return CheckReport()


def reject(path: str, reason: str, tag: str | None = None) -> CheckReport:
    report = CheckReport()
    report.add(path, reason, tag)
    return report
