"""Check outcomes shared by every engine and rendered by the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

PASS = "pass"
BOUNDED = "bounded-pass"
FAIL = "fail"

# witnesses kept per verdict; the count of failures is always exact
MAX_WITNESSES = 5


@dataclass
class Verdict:
    check: str
    status: str = PASS
    checked: int = 0
    failures: int = 0
    witnesses: list[dict[str, Any]] = field(default_factory=list)
    note: str = ""
    parts: list["Verdict"] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status != FAIL

    def record(self, ok: bool, witness: dict[str, Any] | None = None) -> bool:
        self.checked += 1
        if not ok:
            self.failures += 1
            self.status = FAIL
            if witness is not None and len(self.witnesses) < MAX_WITNESSES:
                self.witnesses.append(witness)
        return ok

    def add(self, part: "Verdict") -> "Verdict":
        self.parts.append(part)
        self.checked += part.checked
        self.failures += part.failures
        if part.status == FAIL:
            self.status = FAIL
        elif part.status == BOUNDED and self.status == PASS:
            self.status = BOUNDED
        return part

    def absorb(self, part: "Verdict") -> None:
        """Fold a sub-check's counts and witnesses in without keeping it as a part."""
        self.checked += part.checked
        self.failures += part.failures
        if part.status == FAIL:
            self.status = FAIL
        elif part.status == BOUNDED and self.status == PASS:
            self.status = BOUNDED
        room = MAX_WITNESSES - len(self.witnesses)
        if room > 0:
            self.witnesses.extend(part.witnesses[:room])

    def bounded(self) -> "Verdict":
        """Mark a passing verdict as holding only over a finite catalog."""
        if self.status == PASS:
            self.status = BOUNDED
        return self

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "check": self.check,
            "status": self.status,
            "checked": self.checked,
            "failures": self.failures,
        }
        if self.witnesses:
            out["witnesses"] = self.witnesses
        if self.note:
            out["note"] = self.note
        if self.parts:
            out["parts"] = [p.to_dict() for p in self.parts]
        return out


def combine(check: str, parts: list[Verdict], note: str = "") -> Verdict:
    v = Verdict(check, note=note)
    for p in parts:
        v.add(p)
    return v
