"""Run reports: echoed inputs, results with provenance, and pass/fail checks."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

SCHEMA_VERSION = 1


def _plain(value):
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else value.numerator
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def _show(value) -> str:
    if isinstance(value, Fraction) and value.denominator != 1:
        return f"{value} (~{float(value):.10g})"
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(_plain(value))


@dataclass
class Check:
    name: str
    expected: Any
    actual: Any
    passed: bool
    tolerance: Any = None


@dataclass
class RunReport:
    command: str
    inputs: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    tables: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def add(self, name: str, value, provenance: str, **extra) -> None:
        """Record a result; ``provenance`` is exact, closed-form, eigensolver, monte-carlo ..."""
        entry = {"value": value, "provenance": provenance}
        entry.update(extra)
        self.results[name] = entry

    def check(self, name: str, expected, actual, passed: bool, tolerance=None) -> bool:
        self.checks.append(Check(name, expected, actual, bool(passed), tolerance))
        return bool(passed)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return _plain({
            "schema": SCHEMA_VERSION,
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "checks": [
                {"name": c.name, "expected": c.expected, "actual": c.actual,
                 "pass": c.passed, "tolerance": c.tolerance}
                for c in self.checks
            ],
            "tables": self.tables,
            "notes": self.notes,
            "ok": self.ok,
        })

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["kind", "name", "value", "expected", "pass", "tolerance", "provenance"])
        for k, v in self.inputs.items():
            w.writerow(["input", k, _plain(v), "", "", "", ""])
        for k, entry in self.results.items():
            w.writerow(["result", k, _plain(entry["value"]), "", "", "", entry["provenance"]])
        for c in self.checks:
            w.writerow(["check", c.name, _plain(c.actual), _plain(c.expected),
                        "pass" if c.passed else "FAIL", _plain(c.tolerance) if c.tolerance is not None else "", ""])
        return buf.getvalue()

    def to_text(self) -> str:
        lines = [f"== {self.command} =="]
        if self.inputs:
            lines.append("inputs: " + ", ".join(f"{k}={_show(v)}" for k, v in self.inputs.items()))
        for k, entry in self.results.items():
            extra = {x: y for x, y in entry.items() if x not in ("value", "provenance")}
            tail = ("  " + " ".join(f"{x}={_show(y)}" for x, y in extra.items())) if extra else ""
            lines.append(f"  {k} = {_show(entry['value'])}  [{entry['provenance']}]{tail}")
        for name, rows in self.tables.items():
            lines.append(f"  table {name}: {len(rows)} rows")
        for note in self.notes:
            lines.append(f"  note: {note}")
        for c in self.checks:
            tol = f" (tol {_show(c.tolerance)})" if c.tolerance is not None else ""
            lines.append(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: expected {_show(c.expected)}, "
                         f"got {_show(c.actual)}{tol}")
        if self.checks:
            passed = sum(c.passed for c in self.checks)
            lines.append(f"{passed}/{len(self.checks)} checks passed")
        return "\n".join(lines) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv()
        if fmt == "text":
            return self.to_text()
        raise ValueError(f"unknown format {fmt!r}")
