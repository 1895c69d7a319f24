from __future__ import annotations

import json
import logging
import os
import threading
from collections import Counter, defaultdict
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, ValidationError, field_validator

logger = logging.getLogger(__name__)

REPORT_VERSION = 1

Status = Literal["pass", "fail", "error"]


class CheckRecord(BaseModel):
    id: str
    case: str | None = None
    anchor: str
    status: Status
    expected: Any = None
    actual: Any = None
    detail: str = ""

    @field_validator("expected", "actual", mode="before")
    @classmethod
    def _jsonable(cls, value: Any) -> Any:
        return to_jsonable(value)


def to_jsonable(value: Any) -> Any:
    """Fractions become "p/q" strings, tuples become lists, mapping keys become strings."""
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else int(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)


class CheckJournal:
    def __init__(self, path: Path) -> None:
        self.path = path
        self._records: dict[str, CheckRecord] = {}
        self._done: set[str] = set()
        self._lock = threading.Lock()
        self._file = None

    def load(self) -> dict[str, CheckRecord]:
        """Read all valid records from the journal; the last record per id wins.

        Only passed checks count as done; failures and errors are run again.
        """
        self._records.clear()
        self._done.clear()
        discarded = 0

        if self.path.exists():
            with open(self.path, encoding="utf-8") as f:
                for line in f:
                    line = line.strip()
                    if not line:
                        continue
                    try:
                        record = CheckRecord.model_validate_json(line)
                    except (ValidationError, json.JSONDecodeError):
                        discarded += 1
                        continue
                    self._records[record.id] = record

        if discarded:
            logger.warning("Discarded %d malformed line(s) from %s", discarded, self.path)

        self._done = {cid for cid, rec in self._records.items() if rec.status == "pass"}
        return self._records

    def is_done(self, check_id: str) -> bool:
        return check_id in self._done

    def write(self, record: CheckRecord) -> None:
        line = record.model_dump_json() + "\n"

        with self._lock:
            if self._file is None:
                self._file = open(self.path, "a", encoding="utf-8")  # noqa: SIM115
            self._file.write(line)
            self._file.flush()
            os.fsync(self._file.fileno())
            self._records[record.id] = record
            if record.status == "pass":
                self._done.add(record.id)

    @property
    def records(self) -> list[CheckRecord]:
        with self._lock:
            return list(self._records.values())

    def summary(self) -> str:
        counts = Counter(rec.status for rec in self._records.values())
        total = sum(counts.values())
        return (
            f"Journal holds {total} check(s) ({counts['pass']} pass, "
            f"{counts['fail']} fail, {counts['error']} error)"
        )

    def close(self) -> None:
        if self._file is not None:
            self._file.close()
            self._file = None


def report_timestamp() -> str:
    """UTC now, or SOURCE_DATE_EPOCH when set so that reruns are byte-identical."""
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    moment = (
        datetime.fromtimestamp(int(epoch), tz=timezone.utc)
        if epoch
        else datetime.now(tz=timezone.utc)
    )
    return moment.strftime("%Y-%m-%dT%H:%M:%SZ")


def _report_entry(rec: CheckRecord) -> dict:
    return {
        "id": rec.id,
        "case": rec.case,
        "paper_anchor": rec.anchor,
        "status": rec.status,
        "expected": to_jsonable(rec.expected),
        "actual": to_jsonable(rec.actual),
        "detail": rec.detail,
    }


def _text(value: Any) -> str:
    return value if isinstance(value, str) else json.dumps(to_jsonable(value), sort_keys=True)


def _cell(text: str) -> str:
    return text.replace("|", "\\|").replace("\n", " ")


def render_report(records: list[CheckRecord], fmt: Literal["json", "md"] = "json") -> str:
    ordered = sorted(records, key=lambda r: r.id)
    if fmt == "json":
        report = {
            "version": REPORT_VERSION,
            "timestamp": report_timestamp(),
            "checks": [_report_entry(r) for r in ordered],
        }
        return json.dumps(report, indent=2, sort_keys=False) + "\n"
    if fmt != "md":
        raise ValueError(f"Unknown report format: {fmt!r}. Available: json, md")

    counts = Counter(r.status for r in ordered)
    lines = [
        "# Verification report",
        "",
        f"Generated {report_timestamp()}, report version {REPORT_VERSION}.",
        "",
        f"**{len(ordered)} checks: {counts['pass']} pass, {counts['fail']} fail, "
        f"{counts['error']} error**",
    ]
    by_case: dict[str, list[CheckRecord]] = defaultdict(list)
    for r in ordered:
        by_case[r.case or "global"].append(r)
    for case in sorted(by_case):
        lines += ["", f"## {case}", "", "| check | status | anchor | detail |", "|---|---|---|---|"]
        for r in by_case[case]:
            detail = r.detail
            if r.status != "pass":
                detail = f"expected {_text(r.expected)}, got {_text(r.actual)}. {r.detail}".strip()
            lines.append(f"| {r.id} | {r.status} | {_cell(r.anchor)} | {_cell(detail)} |")
    return "\n".join(lines) + "\n"
