"""Pass/fail records with witnesses, shared by every verification routine."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable


@dataclass
class Check:
    name: str
    passed: bool
    witness: Any = None
    detail: str = ""

    def to_dict(self) -> dict:
        out = {"name": self.name, "passed": self.passed}
        if self.witness is not None:
            out["witness"] = _plain(self.witness)
        if self.detail:
            out["detail"] = self.detail
        return out

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        text = f"[{mark}] {self.name}"
        if self.detail:
            text += f": {self.detail}"
        if not self.passed and self.witness is not None:
            text += f" (witness {_plain(self.witness)})"
        return text


@dataclass
class Report:
    title: str
    checks: list = field(default_factory=list)

    def add(self, name, passed, witness=None, detail="") -> Check:
        c = Check(name, bool(passed), witness, detail)
        self.checks.append(c)
        return c

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.witness, c.detail))

    def run(self, name: str, fn: Callable[[], Any]) -> Check:
        """Record fn() as a check; an exception counts as a failure."""
        try:
            result = fn()
        except Exception as exc:  # a failed verification, reported not raised
            return self.add(name, False, detail=f"{type(exc).__name__}: {exc}")
        if isinstance(result, Report):
            self.extend(result, prefix=name + ": ")
            return self.checks[-1] if self.checks else self.add(name, True)
        if isinstance(result, Check):
            result.name = name
            self.checks.append(result)
            return result
        if isinstance(result, tuple):
            ok, witness = result
            return self.add(name, ok, witness)
        return self.add(name, bool(result))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def get(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"title": self.title, "passed": self.passed,
                "checks": [c.to_dict() for c in self.checks]}

    def lines(self) -> list[str]:
        return [c.line() for c in self.checks]


def _plain(value):
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        seq = sorted(value, key=str) if isinstance(value, (set, frozenset)) else value
        return [_plain(v) for v in seq]
    if hasattr(value, "item") and not isinstance(value, (str, bytes)):
        return value.item()
    if isinstance(value, (bool, int, float, str)) or value is None:
        return value
    return str(value)
