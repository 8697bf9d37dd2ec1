"""Verification reports: per-identity checks with witnesses.

Every verifier in the package returns a Report. A check is named after the
identity it tests, carries the bound it was tested to (where the identity
quantifies over an infinite range), and on failure a JSON-serializable
witness sufficient to reproduce the failure in isolation. Status
"inconclusive" is first class: it marks instances the implemented decision
procedure genuinely cannot settle, and does not fail a report.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"


@dataclass
class Check:
    name: str
    status: str
    bound: Optional[int] = None
    witness: Optional[dict[str, Any]] = None
    detail: str = ""

    def __post_init__(self):
        if self.status not in (PASS, FAIL, INCONCLUSIVE):
            raise ValueError(f"bad status {self.status!r}")
        if self.status == FAIL and self.witness is None:
            raise ValueError(f"failing check {self.name!r} must carry a witness")

    def as_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"name": self.name, "status": self.status}
        if self.bound is not None:
            out["bound"] = self.bound
        if self.detail:
            out["detail"] = self.detail
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class Report:
    suite: str
    checks: list[Check] = field(default_factory=list)
    config: dict[str, Any] = field(default_factory=dict)
    data: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    def failed_checks(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    def add(
        self,
        name: str,
        ok: bool,
        bound: Optional[int] = None,
        witness: Optional[dict[str, Any]] = None,
        detail: str = "",
    ) -> Check:
        check = Check(
            name=name,
            status=PASS if ok else FAIL,
            bound=bound,
            witness=witness if not ok else None,
            detail=detail,
        )
        self.checks.append(check)
        return check

    def add_inconclusive(self, name: str, detail: str = "", witness=None) -> Check:
        check = Check(name=name, status=INCONCLUSIVE, witness=witness, detail=detail)
        self.checks.append(check)
        return check

    def as_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "suite": self.suite,
            "passed": self.passed,
            "checks": [c.as_dict() for c in self.checks],
        }
        if self.config:
            out["config"] = self.config
        if self.data:
            out["data"] = self.data
        return out

    def to_json(self, indent: Optional[int] = None) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=indent)


def reports_to_json(reports: list[Report], indent: Optional[int] = None) -> str:
    return json.dumps([r.as_dict() for r in reports], sort_keys=True, indent=indent)
