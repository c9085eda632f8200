from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any


@dataclass
class Report:
    """Outcome of one verification check.

    ``residual`` is a string (exact rational or repr of a float) or None when
    nothing is left over.  ``details`` holds check-specific diagnostics.
    """

    check: str
    params: dict[str, Any]
    ok: bool
    residual: str | None = None
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def status(self) -> str:
        return "pass" if self.ok else "fail"

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self, with_details: bool = False) -> dict[str, Any]:
        out: dict[str, Any] = {
            "check": self.check,
            "params": self.params,
            "status": self.status,
            "residual": self.residual,
        }
        if with_details and self.details:
            out["details"] = self.details
        return out

    def to_json(self, with_details: bool = False) -> str:
        return json.dumps(self.to_dict(with_details), sort_keys=True, default=str)


def all_pass(reports) -> bool:
    return all(r.ok for r in reports)
