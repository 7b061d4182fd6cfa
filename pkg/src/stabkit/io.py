"""Run configuration and report serialization (JSON and CSV)."""
from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

MC_COLUMNS = ("p", "trials", "failures", "rate", "ci_lo", "ci_hi")
DIGITS = 12


@dataclass
class RunConfig:
    seed: int = 0
    jobs: int = 1
    dense_limit: int | None = None
    enumeration_cap: int = 10 ** 9
    out: str | None = None
    format: str = "json"

    def __post_init__(self):
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.jobs < 1:
            raise ValueError("jobs must be positive")
        if self.format not in ("json", "csv"):
            raise ValueError(f"unknown format {self.format!r}")

    def apply(self):
        """Export the dense cap so every simulator sees it."""
        if self.dense_limit is not None:
            os.environ["STABKIT_DENSE_LIMIT"] = str(int(self.dense_limit))


def fmt_float(v):
    return format(float(v), f".{DIGITS}g")


def _plain(v):
    """Convert to JSON-ready values with floats cut to 12 significant digits."""
    if hasattr(v, "to_dict"):
        v = v.to_dict()
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, np.ndarray):
        return _plain(v.tolist())
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if not math.isfinite(v) else float(fmt_float(v))
    return v


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return fmt_float(v)
    return "" if v is None else str(v)


def _rows(report):
    items = report if isinstance(report, (list, tuple)) else [report]
    return [_plain(r) for r in items]


def emit_report(report, format="json"):
    """Serialize a report (or list of reports) to UTF-8 bytes with stable field order."""
    if format == "json":
        return (json.dumps(_plain(report), indent=2) + "\n").encode("utf-8")
    if format != "csv":
        raise ValueError(f"unknown format {format!r}")
    rows = _rows(report)
    if not rows:
        return b""
    cols = list(MC_COLUMNS) if all(c in rows[0] for c in MC_COLUMNS) else list(rows[0])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([_cell(r.get(c)) for c in cols])
    return buf.getvalue().encode("utf-8")


def _typed(s):
    if s in ("true", "false"):
        return s == "true"
    for cast in (int, float):
        try:
            return cast(s)
        except ValueError:
            pass
    return s


def parse_report(data, format="json"):
    """Inverse of emit_report: JSON value, or a list of dicts for CSV."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    if format == "json":
        return json.loads(text)
    return [{k: _typed(v) for k, v in row.items()} for row in csv.DictReader(io.StringIO(text))]


def write_output(data, path=None):
    """Write bytes to ``path`` or stdout."""
    if path is None or path == "-":
        import sys
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
        return
    with open(path, "wb") as fh:
        fh.write(data)
