"""Machine-readable verdict reports shared by checks, the CLI, and selftest."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import List, Optional

FORMAT_VERSION = "report/1"
TOOL_VERSION = "0.1.0"


@dataclass(frozen=True)
class Verdict:
    name: str
    passed: bool
    residual: str = "0"


@dataclass
class Report:
    verdicts: List[Verdict] = field(default_factory=list)
    echo: Optional[dict] = None
    seed: Optional[int] = None

    def add(self, name: str, passed: bool, residual: str = "0") -> None:
        self.verdicts.append(Verdict(name, passed, residual))

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def verdict(self, name: str) -> Verdict:
        for v in self.verdicts:
            if v.name == name:
                return v
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "version": TOOL_VERSION,
            "seed": self.seed,
            "verdicts": [
                {"name": v.name, "pass": v.passed, "residual": v.residual}
                for v in self.verdicts
            ],
            "echo": self.echo,
        }

    def render_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    def render_text(self) -> str:
        lines = []
        if self.seed is not None:
            lines.append(f"seed: {self.seed}")
        for v in self.verdicts:
            status = "PASS" if v.passed else "FAIL"
            lines.append(f"{status} {v.name}  residual = {v.residual}")
        lines.append("overall: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines) + "\n"
