"""Verification reports: named checks with residuals and tolerances."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np


@dataclass
class CheckEntry:
    name: str
    max_residual: float
    tolerance: float
    passed: bool
    samples: int
    note: str = ""


@dataclass
class VerificationReport:
    entries: list[CheckEntry] = field(default_factory=list)
    config: dict = field(default_factory=dict)

    def add(self, name: str, residuals, tolerance: float, note: str = "") -> CheckEntry:
        """Record a check; NaN residuals count as failures."""
        r = np.abs(np.atleast_1d(np.asarray(residuals, dtype=float)))
        worst = float(np.max(r)) if r.size else 0.0
        if np.any(np.isnan(r)):
            worst = math.nan
        entry = CheckEntry(name, worst, float(tolerance),
                           bool(worst <= tolerance), int(r.size), note)
        self.entries.append(entry)
        return entry

    def extend(self, other: "VerificationReport", prefix: str = "") -> "VerificationReport":
        for e in other.entries:
            self.entries.append(CheckEntry(prefix + e.name, e.max_residual, e.tolerance,
                                           e.passed, e.samples, e.note))
        return self

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def __getitem__(self, name: str) -> CheckEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "config": self.config,
            "checks": [asdict(e) for e in self.entries],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, default=_jsonable)


def _jsonable(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return str(obj)
