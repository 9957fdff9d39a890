"""Verification reports shared by the verifiers and the job front-ends."""
import enum
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional


class Status(str, enum.Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    INCONCLUSIVE = "INCONCLUSIVE"


EXIT_CODES = {Status.PASS: 0, Status.FAIL: 1, Status.INCONCLUSIVE: 2}
INPUT_ERROR_EXIT = 3


def _finite_or_none(value: Optional[float]) -> Optional[float]:
    if value is None:
        return None
    value = float(value)
    return value if math.isfinite(value) else None


@dataclass(frozen=True)
class CheckItem:
    """One named check; ``passed`` is None when the check could not be decided."""

    name: str
    value: Optional[float]
    threshold: Optional[float]
    passed: Optional[bool]
    detail: str = ""

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "value": _finite_or_none(self.value),
            "threshold": _finite_or_none(self.threshold),
            "passed": self.passed,
        }
        if self.detail:
            out["detail"] = self.detail
        return out


def at_most(name: str, value: float, threshold: float, detail: str = "") -> CheckItem:
    return CheckItem(name, value, threshold, bool(value <= threshold), detail)


def at_least(name: str, value: float, threshold: float, detail: str = "") -> CheckItem:
    return CheckItem(name, value, threshold, bool(value >= threshold), detail)


@dataclass
class Report:
    items: List[CheckItem] = field(default_factory=list)
    artifacts: Dict[str, Any] = field(default_factory=dict)

    def add(self, item: CheckItem) -> "Report":
        self.items.append(item)
        return self

    def extend(self, other: "Report", prefix: str = "") -> "Report":
        for item in other.items:
            self.items.append(CheckItem(prefix + item.name, item.value, item.threshold, item.passed, item.detail))
        for key, value in other.artifacts.items():
            self.artifacts[prefix + key] = value
        return self

    @property
    def status(self) -> Status:
        if any(item.passed is False for item in self.items):
            return Status.FAIL
        if any(item.passed is None for item in self.items):
            return Status.INCONCLUSIVE
        return Status.PASS

    @property
    def passed(self) -> bool:
        return self.status is Status.PASS

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def failures(self) -> List[CheckItem]:
        return [item for item in self.items if item.passed is False]

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "items": [item.to_dict() for item in self.items],
            "artifacts": self.artifacts,
        }
