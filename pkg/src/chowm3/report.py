"""Structured verification outcomes.

A :class:`VerificationReport` records one check: its name, the statement it
tests, a status, and a witness payload of exact text values.  Reports
serialize to JSON lines with a fixed field order so reruns diff cleanly.
Wall time is kept on the object but only written when asked for, which keeps
the structured output byte-identical across runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"
STATUSES = (PASS, FAIL, INCONCLUSIVE)


def _plain(value):
    """Witness values as JSON-ready data with exact rationals as text."""
    if isinstance(value, bool) or value is None or isinstance(value, (str, int)):
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in sorted(value.items(), key=lambda kv: str(kv[0]))}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return sorted(_plain(v) for v in value)
    if isinstance(value, float):
        raise TypeError("floating point values are not allowed in reports")
    return str(value)


@dataclass
class VerificationReport:
    check: str
    module: str
    anchor: str
    status: str
    witness: dict = field(default_factory=dict)
    wall_time: float = 0.0

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_record(self, timing: bool = False) -> dict:
        rec = {
            "module": self.module,
            "check": self.check,
            "anchor": self.anchor,
            "status": self.status,
            "witness": _plain(self.witness),
        }
        if timing:
            rec["wall_time_ms"] = int(self.wall_time * 1000)
        return rec

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_record(timing), ensure_ascii=False, separators=(",", ":"))

    @classmethod
    def from_json(cls, line: str) -> "VerificationReport":
        rec = json.loads(line)
        return cls(
            check=rec["check"],
            module=rec["module"],
            anchor=rec["anchor"],
            status=rec["status"],
            witness=rec["witness"],
            wall_time=rec.get("wall_time_ms", 0) / 1000,
        )


def status_of(ok: bool) -> str:
    return PASS if ok else FAIL


def ordered(reports):
    return sorted(reports, key=lambda r: (r.module, r.check))


def dump_lines(reports, timing: bool = False) -> str:
    return "".join(r.to_json(timing) + "\n" for r in ordered(reports))


def load_lines(text: str) -> list:
    """Reports from JSON lines; records without a check name (context) are skipped."""
    out = []
    for line in text.splitlines():
        if line.strip() and "check" in json.loads(line):
            out.append(VerificationReport.from_json(line))
    return out


def render_summary(reports) -> str:
    reports = ordered(reports)
    lines = []
    width = max((len(f"{r.module}.{r.check}") for r in reports), default=0)
    for r in reports:
        lines.append(f"{r.status.upper():<12} {f'{r.module}.{r.check}':<{width}}  {r.anchor}")
    failed = [r for r in reports if r.status != PASS]
    if not failed:
        lines.append(f"all {len(reports)} checks passed")
    else:
        lines.append(f"{len(reports) - len(failed)} of {len(reports)} checks passed")
    return "\n".join(lines) + "\n"
