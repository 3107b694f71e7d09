"""Check outcomes shared by the verification modules."""

from __future__ import annotations

from dataclasses import dataclass, field

GOOD = frozenset({"PASS", "MATCH", "OBSTRUCTED"})
STATUSES = GOOD | {"FAIL", "MISMATCH", "NOT-APPLICABLE", "INCONCLUSIVE", "NOT-OBSTRUCTED"}


@dataclass
class Verdict:
    name: str
    status: str
    detail: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    @classmethod
    def of(cls, name: str, ok: bool, detail: dict | None = None) -> "Verdict":
        return cls(name, "PASS" if ok else "FAIL", detail or {})

    @property
    def passed(self) -> bool:
        return self.status in GOOD

    def to_json(self) -> dict:
        return {"check": self.name, "status": self.status, **self.detail}
