"""Deterministic reports for CLI commands."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Any, Optional

from .terms import App, Bin, Const, Not, Term, Var, format_term


def _plain(value: Any) -> Any:
    """Convert sets, tuples and terms into JSON-ready values with a fixed order."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in sorted(value.items(), key=lambda kv: str(kv[0]))}
    if isinstance(value, (set, frozenset)):
        items = [_plain(v) for v in value]
        return sorted(items, key=lambda v: json.dumps(v, sort_keys=True))
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, (Var, Const, Not, App, Bin)):
        return format_term(value)
    if hasattr(value, "item"):  # numpy scalars
        return value.item()
    return value


@dataclass
class Check:
    name: str
    holds: Optional[bool]
    status: str = "exhaustive"
    anchor: str = ""
    witness: Any = None

    def to_dict(self) -> dict:
        return {
            "anchor": self.anchor,
            "holds": self.holds,
            "name": self.name,
            "status": self.status,
            "witness": _plain(self.witness),
        }


@dataclass
class Report:
    command: str
    params: dict = field(default_factory=dict)
    frame: Any = None
    checks: list = field(default_factory=list)
    results: Any = None
    open_questions: list = field(default_factory=list)
    timing: bool = False
    _start: float = field(default_factory=time.perf_counter, repr=False)

    def add(self, name: str, holds: Optional[bool], status: str = "exhaustive",
            anchor: str = "", witness: Any = None) -> Check:
        check = Check(name, holds, status, anchor, witness)
        self.checks.append(check)
        return check

    @property
    def all_hold(self) -> bool:
        return all(c.holds for c in self.checks)

    def to_dict(self) -> dict:
        elapsed = round((time.perf_counter() - self._start) * 1000, 1) if self.timing else None
        out = {
            "checks": [c.to_dict() for c in self.checks],
            "command": self.command,
            "elapsed_ms": elapsed,
            "frame": _plain(self.frame),
            "open_questions": _plain(self.open_questions),
            "params": _plain(self.params),
        }
        if self.results is not None:
            out["results"] = _plain(self.results)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def to_text(self) -> str:
        lines = [f"{self.command}"]
        if isinstance(self.frame, dict) and self.frame.get("name"):
            lines[0] += f" on {self.frame['name']}"
        for c in self.checks:
            mark = {True: "PASS", False: "FAIL", None: "----"}[c.holds]
            line = f"  {mark} {c.name} [{c.status}]"
            if c.anchor:
                line += f"  ({c.anchor})"
            if c.witness is not None:
                line += f"\n       witness: {json.dumps(_plain(c.witness), sort_keys=True)}"
            lines.append(line)
        if self.results is not None:
            lines.append("  results: " + json.dumps(_plain(self.results), sort_keys=True))
        for q in self.open_questions:
            lines.append(f"  open question: {json.dumps(_plain(q), sort_keys=True)}")
        return "\n".join(lines)


def term_text(term: Optional[Term]) -> Optional[str]:
    return None if term is None else format_term(term)
