"""Deterministic pass/fail reports for the command surface.

Text and JSON renderings list one record per check in a fixed order;
reruns are byte-identical (timing, when requested, goes to stderr).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

PASS, FAIL, RECORDED = "pass", "fail", "recorded"


@dataclass
class ReportLine:
    name: str
    status: str
    residual: str | None = None
    note: str = ""


@dataclass
class Report:
    command: str
    lines: list = field(default_factory=list)

    def add_check(self, check):
        """Append an algebroid/courant Check."""
        residual = None
        if check.residual is not None and not check.passed:
            residual = str(check.residual)
        self.lines.append(ReportLine(check.name, PASS if check.passed else FAIL,
                                     residual, check.note))

    def add(self, name, ok, residual=None, note=""):
        self.lines.append(ReportLine(name, PASS if ok else FAIL,
                                     None if ok else residual, note))

    def add_recorded(self, name, note):
        self.lines.append(ReportLine(name, RECORDED, None, note))

    def add_info(self, name, note):
        self.lines.append(ReportLine(name, PASS, None, note))

    @property
    def passed(self) -> bool:
        return all(line.status != FAIL for line in self.lines)

    def render_text(self) -> str:
        out = [f"command: {self.command}"]
        for line in self.lines:
            piece = f"check {line.name}: {line.status}"
            if line.status == FAIL and line.residual is not None:
                piece += f" residual={line.residual}"
            if line.note:
                piece += f" ({line.note})"
            out.append(piece)
        n_pass = sum(1 for l in self.lines if l.status == PASS)
        n_fail = sum(1 for l in self.lines if l.status == FAIL)
        n_rec = sum(1 for l in self.lines if l.status == RECORDED)
        verdict = "PASS" if self.passed else "FAIL"
        tail = f"result: {verdict} ({n_pass} pass, {n_fail} fail"
        tail += f", {n_rec} recorded)" if n_rec else ")"
        out.append(tail)
        return "\n".join(out) + "\n"

    def render_json(self) -> str:
        doc = {
            "command": self.command,
            "checks": [
                {
                    "name": line.name,
                    "status": line.status,
                    "residual": line.residual,
                    "note": line.note or None,
                }
                for line in self.lines
            ],
            "result": "PASS" if self.passed else "FAIL",
        }
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"

    def render(self, fmt: str) -> str:
        return self.render_json() if fmt == "json" else self.render_text()
