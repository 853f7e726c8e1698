"""Pass/fail reports shared by the checks, suites and the CLI.

One :class:`Report` object feeds both renderings, so the text and JSON views
cannot drift apart.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    data: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {"name": self.name, "passed": self.passed}
        if self.detail:
            d["detail"] = self.detail
        if self.data:
            d["data"] = self.data
        return d

    @classmethod
    def from_dict(cls, d: dict) -> Check:
        return cls(d["name"], d["passed"], d.get("detail", ""), d.get("data", {}))


@dataclass
class Report:
    title: str
    claim: str = ""
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    data: dict = field(default_factory=dict)
    body: list[str] = field(default_factory=list)  # extra text-view lines

    def add(self, name: str, passed: bool, detail: str = "", **data) -> Check:
        c = Check(name, bool(passed), detail, data)
        self.checks.append(c)
        return c

    def note(self, text: str) -> None:
        if text not in self.notes:
            self.notes.append(text)

    def extend(self, other: Report, prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.detail, c.data))
        for n in other.notes:
            self.note(n)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def counts(self) -> tuple[int, int]:
        ok = sum(c.passed for c in self.checks)
        return ok, len(self.checks) - ok

    def to_dict(self) -> dict:
        ok, bad = self.counts()
        d = {"title": self.title, "passed": self.passed, "counts": {"pass": ok, "fail": bad},
             "checks": [c.to_dict() for c in self.checks]}
        if self.claim:
            d["claim"] = self.claim
        if self.notes:
            d["notes"] = list(self.notes)
        if self.data:
            d["data"] = self.data
        return d

    @classmethod
    def from_dict(cls, d: dict) -> Report:
        return cls(d["title"], d.get("claim", ""), [Check.from_dict(c) for c in d["checks"]],
                   list(d.get("notes", [])), d.get("data", {}))

    def render_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def render_text(self, verbose: bool = False, limit: int = 40) -> str:
        ok, bad = self.counts()
        lines = [self.title]
        if self.claim:
            lines.append(f"  claim: {self.claim}")
        for key in sorted(self.data):
            val = self.data[key]
            if isinstance(val, (str, int, float, bool)) or val is None:
                lines.append(f"  {key}: {val}")
            elif isinstance(val, (list, tuple)) and len(val) <= 12 and \
                    all(isinstance(v, (str, int)) for v in val):
                lines.append(f"  {key}: {list(val)}")
        lines.extend("  " + b for b in self.body)
        shown = self.checks if verbose else (self.failures + [c for c in self.checks if c.passed])
        for c in shown[:limit]:
            mark = "PASS" if c.passed else "FAIL"
            lines.append(f"  [{mark}] {c.name}" + (f": {c.detail}" if c.detail else ""))
        if len(shown) > limit:
            lines.append(f"  ... {len(shown) - limit} more checks")
        for n in self.notes:
            lines.append(f"  note: {n}")
        lines.append(f"  result: {'PASS' if self.passed else 'FAIL'} ({ok} passed, {bad} failed)")
        return "\n".join(lines)
