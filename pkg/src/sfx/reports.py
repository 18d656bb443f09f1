"""Report objects shared by the validators and the CLI.

Every validator is report-style: it runs all checks, collects witnesses for
each failure, and never raises on mathematical failure (only on malformed
input).  Reports render both as text and as JSON-ready dicts.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    ok: bool
    witnesses: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"name": self.name, "ok": self.ok, "witnesses": list(self.witnesses)}


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, name: str, ok: bool, witnesses: list[str] | None = None) -> Check:
        check = Check(name, ok, witnesses or [])
        self.checks.append(check)
        return check

    def note(self, text: str) -> None:
        self.notes.append(text)

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "ok": self.ok,
            "checks": [c.to_dict() for c in self.checks],
            "notes": list(self.notes),
        }

    def render(self, color: bool = False) -> str:
        def paint(s, code):
            return f"\x1b[{code}m{s}\x1b[0m" if color else s

        lines = [f"{self.title}:"]
        for c in self.checks:
            mark = paint("PASS", "32") if c.ok else paint("FAIL", "31")
            lines.append(f"  [{mark}] {c.name}")
            for w in c.witnesses[:8]:
                lines.append(f"         {w}")
            if len(c.witnesses) > 8:
                lines.append(f"         ... {len(c.witnesses) - 8} more")
        for n in self.notes:
            lines.append(f"  note: {n}")
        return "\n".join(lines)
