"""Structured verification outcomes and their JSON / CSV / text forms."""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field
from typing import Any

REPORT_SCHEMA = {
    "type": "object",
    "required": ["suite", "params", "scope", "seed", "checks", "elapsed_ms"],
    "properties": {
        "suite": {"type": "string"},
        "params": {"type": "array", "items": {"type": "string"}},
        "scope": {
            "type": "object",
            "additionalProperties": {"type": ["string", "integer", "array"]},
        },
        "seed": {"type": ["integer", "null"]},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "pass"],
                "properties": {
                    "name": {"type": "string"},
                    "pass": {"type": "boolean"},
                    "witness": {"type": "string"},
                },
                "additionalProperties": False,
            },
        },
        "elapsed_ms": {"type": "integer", "minimum": 0},
    },
    "additionalProperties": False,
}


@dataclass
class Check:
    name: str
    passed: bool
    witness: str | None = None

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"name": self.name, "pass": self.passed}
        if not self.passed:
            out["witness"] = self.witness or "(no witness recorded)"
        return out


@dataclass
class Report:
    suite: str
    params: list[str]
    scope: dict[str, Any]
    seed: int | None = None
    checks: list[Check] = field(default_factory=list)
    elapsed_ms: int = 0

    def add(self, name: str, passed: bool, witness: str | None = None) -> bool:
        self.checks.append(Check(name, bool(passed), None if passed else witness))
        return bool(passed)

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.witness))

    def finish(self, start: float) -> "Report":
        self.elapsed_ms = int(round((time.perf_counter() - start) * 1000))
        return self

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict[str, Any]:
        return {
            "suite": self.suite,
            "params": list(self.params),
            "scope": dict(self.scope),
            "seed": self.seed,
            "checks": [c.to_dict() for c in self.checks],
            "elapsed_ms": self.elapsed_ms,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, ensure_ascii=False)

    def csv_rows(self) -> list[list[str]]:
        params = ",".join(self.params)
        scope = ";".join(f"{k}={v}" for k, v in self.scope.items())
        seed = "" if self.seed is None else str(self.seed)
        return [[self.suite, params, scope, seed, c.name, "pass" if c.passed else "fail", c.witness or ""]
                for c in self.checks]

    def to_text(self) -> str:
        lines = [f"suite: {self.suite}",
                 f"params: {', '.join(self.params)}",
                 "scope: " + ", ".join(f"{k}={v}" for k, v in self.scope.items()),
                 f"seed: {self.seed}"]
        for c in self.checks:
            lines.append(f"  [{'PASS' if c.passed else 'FAIL'}] {c.name}")
            if not c.passed:
                lines.append(f"         witness: {c.witness}")
        n_ok = sum(c.passed for c in self.checks)
        lines.append(f"result: {n_ok}/{len(self.checks)} checks passed ({self.elapsed_ms} ms)")
        return "\n".join(lines)


CSV_HEADER = ["suite", "params", "scope", "seed", "check", "outcome", "witness"]


def reports_to_csv(reports: list[Report]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in reports:
        writer.writerows(r.csv_rows())
    return buf.getvalue()
