"""Deterministic result tables and their CSV/JSON serializations.

CSV output starts with '#'-prefixed header lines echoing every parameter
that affects the numbers, then a column-name row, then data rows with 12
significant digits.  JSON output carries the same metadata plus full-
precision row values so that a parse/emit round trip is numerically exact.
"""

import json
import math
from dataclasses import dataclass, field

COLUMNS = ("mode", "sweep", "tau", "gamma", "s", "validity", "regime", "error")


@dataclass(frozen=True)
class ResultTable:
    meta: tuple                  # ordered (key, value-string) pairs
    rows: tuple = field(default_factory=tuple)
    # each row is a dict with the COLUMNS keys; numeric cells are floats
    # (nan allowed), "mode"/"regime"/"error" are strings, "sweep" may be None


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return format(value, ".12g")
    return str(value)


def emit_csv(table):
    lines = [f"# {key} = {val}" for key, val in table.meta]
    lines.append(",".join(COLUMNS))
    for row in table.rows:
        lines.append(",".join(_fmt(row.get(col)) for col in COLUMNS))
    return "\n".join(lines) + "\n"


def _json_cell(value):
    # NaN is not valid JSON; encode it as a string marker
    if isinstance(value, float) and math.isnan(value):
        return "nan"
    return value


def emit_json(table):
    doc = {
        "meta": {key: val for key, val in table.meta},
        "columns": list(COLUMNS),
        "rows": [[_json_cell(row.get(col)) for col in COLUMNS]
                 for row in table.rows],
    }
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


def parse_json(text):
    """Inverse of emit_json; numeric fields round-trip exactly."""
    doc = json.loads(text)
    meta = tuple(sorted(doc["meta"].items()))
    rows = []
    for values in doc["rows"]:
        row = {}
        for col, val in zip(doc["columns"], values):
            if val == "nan" and col in ("tau", "gamma", "s", "validity", "sweep"):
                val = math.nan
            row[col] = val
        rows.append(row)
    return ResultTable(meta=meta, rows=tuple(rows))


def emit(table, format):
    if format == "csv":
        return emit_csv(table)
    if format == "json":
        return emit_json(table)
    raise ValueError(f"unknown output format {format!r}")
