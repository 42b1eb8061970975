"""Uniform pass/fail reports shared by every check and the CLI."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any


@dataclass
class Report:
    title: str
    passed: bool = True
    lines: list[str] = field(default_factory=list)
    data: dict[str, Any] = field(default_factory=dict)
    witness: Any = None
    # a produced document (e.g. a derivation) for --output; not part of the report body
    artifact: Any = field(default=None, repr=False)

    def add(self, line: str) -> "Report":
        self.lines.append(line)
        return self

    def fail(self, line: str, witness: Any = None) -> "Report":
        self.passed = False
        self.lines.append(line)
        if witness is not None and self.witness is None:
            self.witness = witness
        return self

    def __bool__(self) -> bool:
        return self.passed

    def to_text(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        out = [f"== {self.title}: {status}"]
        out += [f"  {line}" for line in self.lines]
        return "\n".join(out)

    def to_dict(self) -> dict[str, Any]:
        return {
            "title": self.title,
            "passed": self.passed,
            "lines": list(self.lines),
            "data": _plain(self.data),
            "witness": _plain(self.witness),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False)


def _plain(value: Any) -> Any:
    """Turn report payloads into JSON-ready values, deterministically."""
    if isinstance(value, Report):
        return value.to_dict()
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in sorted(value.items(), key=lambda kv: str(kv[0]))}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return sorted((_plain(v) for v in value), key=str)
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    return str(value)


def merge(title: str, parts: list[Report]) -> Report:
    out = Report(title)
    for p in parts:
        out.lines.append(f"{p.title}: {'PASS' if p.passed else 'FAIL'}")
        out.lines += [f"  {line}" for line in p.lines]
        if not p.passed:
            out.passed = False
            if out.witness is None:
                out.witness = p.witness
    out.data = {p.title: p.data for p in parts}
    return out
