"""Experiment reports and their JSON / CSV serialization."""
from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np


def _plain(value: Any) -> Any:
    """Convert numpy scalars/arrays and tuples into JSON-ready Python objects."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else repr(value)
    return value


@dataclass
class ExperimentReport:
    experiment: str
    parameters: Dict[str, Any]
    columns: Sequence[str]
    rows: List[Dict[str, Any]] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)
    verdict: bool = False

    def add(self, **row):
        unknown = set(row) - set(self.columns)
        if unknown:
            raise KeyError(f"unknown columns {sorted(unknown)}")
        self.rows.append({c: row.get(c) for c in self.columns})

    def sort_rows(self, *keys: str):
        def key(r):
            return tuple((r[k] is None, r[k] if r[k] is not None else 0) for k in keys)

        self.rows.sort(key=key)

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "parameters": _plain(self.parameters),
            "rows": _plain(self.rows),
            "summary": _plain(self.summary),
            "verdict": "pass" if self.verdict else "fail",
        }


def ratios_consistent(report: ExperimentReport) -> bool:
    """Every row carrying value, bound and ratio has ratio == value / bound."""
    for r in report.rows:
        if r.get("ratio") is None or r.get("value") is None or not r.get("bound"):
            continue
        if r["ratio"] != r["value"] / r["bound"]:
            return False
    return True


def to_json(report: ExperimentReport) -> str:
    return json.dumps(report.to_dict(), indent=2, allow_nan=False) + "\n"


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def to_csv(report: ExperimentReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(report.columns))
    for r in report.rows:
        writer.writerow([_cell(r[c]) for c in report.columns])
    d = report.to_dict()
    buf.write(f"# experiment={report.experiment}\n")
    buf.write(f"# parameters={json.dumps(d['parameters'], sort_keys=True)}\n")
    for k, v in d["summary"].items():
        buf.write(f"# {k}={json.dumps(v)}\n")
    buf.write(f"# verdict={d['verdict']}\n")
    return buf.getvalue()


def _parse_cell(s: str) -> Any:
    if s == "":
        return None
    if s in ("true", "false"):
        return s == "true"
    for cast in (int, float):
        try:
            return cast(s)
        except ValueError:
            pass
    return s


def read_csv_rows(text: str) -> List[Dict[str, Any]]:
    """Parse rows back from emitted CSV, skipping '#' summary lines."""
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    reader = csv.DictReader(lines)
    return [{k: _parse_cell(v) for k, v in row.items()} for row in reader]


def emit(report: ExperimentReport, fmt: str = "json", path: Optional[str] = None) -> str:
    """Serialize the report and write it to path (or standard output)."""
    if fmt == "json":
        text = to_json(report)
    elif fmt == "csv":
        text = to_csv(report)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)
    return text
