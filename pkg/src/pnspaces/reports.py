"""Report records returned by the axiom checkers."""

from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Any

import numpy as np

PASS = "pass"
PASS_SAMPLED = "pass (sampled)"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"


def _plain(value):
    # JSON-safe copy; +inf is written as the string "inf"
    if isinstance(value, (np.generic, Fraction)) and not isinstance(value, np.bool_):
        value = float(value) if not isinstance(value, np.integer) else int(value)
    elif isinstance(value, np.bool_):
        return bool(value)
    elif isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, float) and math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if hasattr(value, "to_json"):
        return _plain(value.to_json())
    return value


@dataclass
class LawResult:
    law: str
    status: str
    worst: float
    tolerance: float
    witness: dict[str, Any] | None = None
    note: str = ""

    def __post_init__(self):
        if self.status == FAIL and not self.witness:
            raise ValueError(f"failed law {self.law!r} needs a witness")

    @property
    def passed(self) -> bool:
        return self.status in (PASS, PASS_SAMPLED)

    def to_json(self) -> dict:
        out = {"status": self.status, "worst": self.worst, "tolerance": self.tolerance}
        if self.witness:
            out["witness"] = self.witness
        if self.note:
            out["note"] = self.note
        return _plain(out)


def law_result(law, worst, tolerance, witness=None, sampled=False, note="") -> LawResult:
    ok = worst <= tolerance
    status = (PASS_SAMPLED if sampled else PASS) if ok else FAIL
    return LawResult(law, status, float(worst), float(tolerance), None if ok else witness, note)


@dataclass
class AxiomReport:
    subject: str
    results: dict[str, LawResult] = field(default_factory=dict)
    info: dict[str, Any] = field(default_factory=dict)

    def add(self, result: LawResult) -> None:
        self.results[result.law] = result

    @property
    def passed(self) -> bool:
        """All decided laws hold; inconclusive entries do not count as failures."""
        return all(r.passed or r.status == INCONCLUSIVE for r in self.results.values())

    def failed(self) -> list[str]:
        return [k for k, r in self.results.items() if r.status == FAIL]

    def __getitem__(self, law: str) -> LawResult:
        return self.results[law]

    def to_json(self) -> dict:
        return _plain(
            {
                "subject": self.subject,
                "passed": self.passed,
                "laws": {k: r.to_json() for k, r in self.results.items()},
                **self.info,
            }
        )


@dataclass
class Verdict:
    """Boolean outcome of a predicate, with a witness when it is false."""

    holds: bool
    label: str = ""
    witness: dict[str, Any] | None = None
    details: dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return bool(self.holds)

    def to_json(self) -> dict:
        out = {"holds": bool(self.holds)}
        if self.label:
            out["label"] = self.label
        if self.witness:
            out["witness"] = self.witness
        out.update(self.details)
        return _plain(out)
