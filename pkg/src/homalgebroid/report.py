"""Itemized check reports shared by every checker."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any


@dataclass
class CheckItem:
    name: str
    passed: bool
    witness: dict[str, Any] | None = None
    detail: str = ""

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"check": self.name, "status": "pass" if self.passed else "fail"}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class Report:
    title: str
    items: list[CheckItem] = field(default_factory=list)
    meta: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.items)

    def add(self, item: CheckItem) -> CheckItem:
        self.items.append(item)
        return item

    def extend(self, other: "Report", prefix: str = "") -> None:
        for item in other.items:
            self.items.append(CheckItem(prefix + item.name, item.passed, item.witness, item.detail))

    def item(self, name: str) -> CheckItem:
        for it in self.items:
            if it.name == name:
                return it
        raise KeyError(name)

    def failures(self) -> list[CheckItem]:
        return [it for it in self.items if not it.passed]

    def first_failure(self) -> CheckItem | None:
        fails = self.failures()
        return fails[0] if fails else None

    def to_dict(self) -> dict[str, Any]:
        n_fail = len(self.failures())
        return {
            "title": self.title,
            "meta": self.meta,
            "checks": [it.to_dict() for it in self.items],
            "summary": {
                "status": "pass" if n_fail == 0 else "fail",
                "total": len(self.items),
                "failed": n_fail,
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        lines = [f"== {self.title}"]
        for it in self.items:
            mark = "PASS" if it.passed else "FAIL"
            line = f"  [{mark}] {it.name}"
            if it.detail:
                line += f" -- {it.detail}"
            lines.append(line)
            if not it.passed and it.witness:
                lines.append(f"         witness: {json.dumps(it.witness)}")
        lines.append(f"  => {'pass' if self.passed else 'fail'} ({len(self.items) - len(self.failures())}/{len(self.items)})")
        return "\n".join(lines)


class Refusal(Exception):
    """Raised when an operation's precondition check fails; carries the failing report."""

    def __init__(self, message: str, report: Report | None = None):
        super().__init__(message)
        self.report = report
