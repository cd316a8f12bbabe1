"""Run records and their text / JSON / CSV serializations.

JSON and CSV renderings are byte-stable for a fixed (config, seed) pair:
they contain no timestamps and no wall-clock durations, and all dict keys
are emitted sorted.  Durations are kept on the records for the human
readable text format only.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

REPORT_VERSION = "1"

CSV_COLUMNS = ("suite", "extension", "check", "p", "N", "t", "m",
               "status", "trials", "passes", "failures", "skipped", "detail")


@dataclass
class CheckResult:
    """Outcome of one named check inside a suite."""

    name: str
    status: str  # "pass" | "fail" | "skip" | "info"
    trials: int = 0
    passes: int = 0
    failures: int = 0
    skipped: int = 0
    detail: dict = field(default_factory=dict)


@dataclass
class SuiteRecord:
    """All checks of one suite run against one extension."""

    suite: str
    extension: str
    p: int
    N: int
    t: int
    m: int
    checks: list = field(default_factory=list)
    duration_s: float = 0.0

    @property
    def status(self) -> str:
        if any(c.status == "fail" for c in self.checks):
            return "fail"
        if any(c.status == "pass" for c in self.checks):
            return "pass"
        return "info"


@dataclass
class Report:
    version: str
    config: dict
    suites: list = field(default_factory=list)

    @property
    def failed(self) -> bool:
        return any(s.status == "fail" for s in self.suites)


def _check_dict(check: CheckResult) -> dict:
    return {
        "name": check.name,
        "status": check.status,
        "trials": check.trials,
        "passes": check.passes,
        "failures": check.failures,
        "skipped": check.skipped,
        "detail": check.detail,
    }


def _suite_dict(suite: SuiteRecord) -> dict:
    return {
        "suite": suite.suite,
        "extension": suite.extension,
        "params": {"p": suite.p, "N": suite.N, "t": suite.t, "m": suite.m},
        "status": suite.status,
        "checks": [_check_dict(c) for c in suite.checks],
    }


def to_json(report: Report) -> str:
    doc = {
        "version": report.version,
        "config": report.config,
        "suites": [_suite_dict(s) for s in report.suites],
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def to_csv(report: Report) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for s in report.suites:
        for c in s.checks:
            writer.writerow([
                s.suite, s.extension, c.name, s.p, s.N, s.t, s.m,
                c.status, c.trials, c.passes, c.failures, c.skipped,
                json.dumps(c.detail, sort_keys=True),
            ])
    return buf.getvalue()


def to_text(report: Report) -> str:
    lines = [f"wittram report v{report.version}"]
    cfg = ", ".join(f"{k}={v}" for k, v in sorted(report.config.items()))
    lines.append(f"config: {cfg}")
    for s in report.suites:
        lines.append("")
        lines.append(f"[{s.suite}] extension={s.extension} p={s.p} N={s.N} "
                     f"t={s.t} m={s.m} status={s.status.upper()} "
                     f"({s.duration_s:.3f}s)")
        name_w = max((len(c.name) for c in s.checks), default=0)
        for c in s.checks:
            counts = ""
            if c.trials:
                counts = (f"  trials={c.trials} passes={c.passes} "
                          f"failures={c.failures} skipped={c.skipped}")
            detail = ""
            if c.detail:
                detail = "  " + json.dumps(c.detail, sort_keys=True)
            lines.append(f"  {c.name:<{name_w}}  {c.status.upper():<5}{counts}{detail}")
    overall = "FAIL" if report.failed else "PASS"
    lines.append("")
    lines.append(f"overall: {overall}")
    return "\n".join(lines) + "\n"


def emit_report(report: Report, fmt: str) -> str:
    """Serialize a report as text, json or csv."""
    if fmt == "json":
        return to_json(report)
    if fmt == "csv":
        return to_csv(report)
    if fmt == "text":
        return to_text(report)
    raise ValueError(f"unknown report format {fmt!r}")
