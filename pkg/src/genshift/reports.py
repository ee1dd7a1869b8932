"""Verification reports, experiment tables, and file emission.

Emission is deterministic: identical inputs produce byte-identical CSV and
summary files.  Volatile fields (runtimes) are kept on the Python objects
but excluded from summary.json.
"""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Optional

__all__ = ["VerificationReport", "ExperimentTable", "report_emit", "exit_code", "SENTINEL"]

# sentinel written for ratios with a zero denominator (excluded from spreads)
SENTINEL = "NA"


@dataclass
class VerificationReport:
    name: str
    grid: str
    tolerance: float
    passed: bool
    max_deviation: Optional[float] = None
    ratio_min: Optional[float] = None
    ratio_max: Optional[float] = None
    is_control: bool = False
    runtime: float = 0.0
    details: dict = field(default_factory=dict)

    def to_dict(self, include_runtime: bool = False) -> dict:
        out = {
            "name": self.name,
            "grid": self.grid,
            "tolerance": self.tolerance,
            "passed": bool(self.passed),
            "max_deviation": self.max_deviation,
            "ratio_min": self.ratio_min,
            "ratio_max": self.ratio_max,
            "is_control": bool(self.is_control),
            "details": _jsonable(self.details),
        }
        if include_runtime:
            out["runtime"] = self.runtime
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "VerificationReport":
        return cls(
            name=d["name"],
            grid=d.get("grid", ""),
            tolerance=float(d.get("tolerance", 0.0)),
            passed=bool(d.get("passed")),
            max_deviation=d.get("max_deviation"),
            ratio_min=d.get("ratio_min"),
            ratio_max=d.get("ratio_max"),
            is_control=bool(d.get("is_control", False)),
            runtime=float(d.get("runtime", 0.0)),
            details=d.get("details", {}) or {},
        )


@dataclass
class ExperimentTable:
    name: str
    headers: list
    rows: list

    def to_dict(self) -> dict:
        return {"name": self.name, "headers": list(self.headers), "rows": _jsonable(self.rows)}

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentTable":
        return cls(name=d["name"], headers=list(d["headers"]), rows=list(d["rows"]))


def _jsonable(obj):
    """Convert numpy scalars/arrays and infinities into JSON-safe values."""
    import numpy as np

    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer)):
        obj = obj.item()
    if isinstance(obj, float):
        if math.isnan(obj):
            return SENTINEL
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
    return obj


def _format_cell(v) -> str:
    if v is None:
        return SENTINEL
    if isinstance(v, str):
        return v
    if isinstance(v, float):
        if math.isnan(v):
            return SENTINEL
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    return str(v)


def exit_code(reports: Iterable[VerificationReport]) -> int:
    """0 iff every non-control check passed and every control failed.

    A control that *passes* its identity is itself a suite failure (the
    perturbed fixture was supposed to be caught).
    """
    code = 0
    for r in reports:
        if r.is_control:
            if r.passed:
                code = 1
        elif not r.passed:
            code = 1
    return code


def report_emit(
    reports,
    tables,
    out_dir,
    fmt: str = "csv",
    config_echo: Optional[dict] = None,
    seed: Optional[int] = None,
):
    """Write experiment tables and a summary JSON into ``out_dir``.

    ``fmt`` selects the table format ("csv" or "json"); the summary is always
    JSON.  Returns (summary_dict, exit_code, written_paths).
    """
    if fmt not in ("csv", "json"):
        raise ValueError(f"format must be 'csv' or 'json', got {fmt!r}")
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for table in tables:
        if fmt == "csv":
            path = os.path.join(out_dir, f"{table.name}.csv")
            try:
                with open(path, "w", newline="", encoding="utf-8") as fh:
                    writer = csv.writer(fh, lineterminator="\n")
                    writer.writerow(table.headers)
                    for row in table.rows:
                        writer.writerow([_format_cell(v) for v in row])
            except OSError as exc:
                raise OSError(f"failed writing table to {path}: {exc}") from exc
        else:
            path = os.path.join(out_dir, f"{table.name}.json")
            try:
                with open(path, "w", encoding="utf-8") as fh:
                    json.dump(table.to_dict(), fh, indent=2, sort_keys=True)
                    fh.write("\n")
            except OSError as exc:
                raise OSError(f"failed writing table to {path}: {exc}") from exc
        written.append(path)

    checks = [
        r if isinstance(r, VerificationReport) else VerificationReport.from_dict(r)
        for r in reports
    ]
    code = exit_code(checks)
    summary = {
        "checks": [r.to_dict() for r in checks],
        "n_checks": len(checks),
        "n_controls": sum(1 for r in checks if r.is_control),
        "all_passed": code == 0,
        "exit_code": code,
        "seed": seed,
        "config": _jsonable(config_echo or {}),
        "tables": [t.name for t in tables],
    }
    spath = os.path.join(out_dir, "summary.json")
    try:
        with open(spath, "w", encoding="utf-8") as fh:
            json.dump(summary, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"failed writing summary to {spath}: {exc}") from exc
    written.append(spath)
    return summary, code, written
