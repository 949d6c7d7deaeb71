"""Deterministic CSV and JSON emission of sweep rows."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass

SCHEMA = 1
FIELDS = ("ratio", "state", "quantity", "value", "source", "cutoff", "tolerance", "status", "message")
KEYS = ("ratio", "state", "source", "cutoff", "tolerance")


@dataclass(frozen=True)
class Row:
    ratio: float | None
    state: str
    quantity: str
    value: float | None
    source: str
    cutoff: int | None = None
    tolerance: float | None = None
    status: str = "ok"
    message: str = ""


def header_line(version: str) -> str:
    return f"# chiral-qpt v{version} schema={SCHEMA}"


def format_value(value) -> str:
    """Shortest round-tripping text for floats; empty for missing values."""
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return repr(value)
    return str(value)


def _clean(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def wide_table(rows) -> tuple[list[str], list[dict]]:
    """Pivot long rows so each quantity becomes a column, keeping first-seen order."""
    quantities: list[str] = []
    groups: dict[tuple, dict] = {}
    for row in rows:
        if row.quantity not in quantities:
            quantities.append(row.quantity)
        key = tuple(getattr(row, k) for k in KEYS)
        entry = groups.setdefault(key, dict(zip(KEYS, key), status="ok", message=""))
        entry[row.quantity] = row.value
        if row.status != "ok":
            # a pivoted row reports every non-ok status of its cells
            flags = [f for f in entry["status"].split(";") if f != "ok"]
            if row.status not in flags:
                flags.append(row.status)
            entry["status"] = ";".join(flags)
        if row.message and row.message not in entry["message"]:
            entry["message"] = "; ".join(filter(None, [entry["message"], row.message]))
    columns = ["ratio", "state", *quantities, "source", "cutoff", "tolerance", "status", "message"]
    return columns, list(groups.values())


def write_csv(rows, stream, version: str, layout: str = "long") -> None:
    stream.write(header_line(version) + "\n")
    writer = csv.writer(stream, lineterminator="\n")
    if layout == "long":
        writer.writerow(FIELDS)
        for row in rows:
            writer.writerow([format_value(getattr(row, f)) for f in FIELDS])
        return
    if layout != "wide":
        raise ValueError(f"layout must be 'long' or 'wide', got {layout!r}")
    columns, table = wide_table(rows)
    writer.writerow(columns)
    for entry in table:
        writer.writerow([format_value(entry.get(c)) for c in columns])


def write_json(rows, stream, version: str, command: str, extra: dict | None = None) -> None:
    doc = {
        "generator": f"chiral-qpt v{version}",
        "schema": SCHEMA,
        "command": command,
        "rows": [{k: _clean(v) for k, v in asdict(r).items()} for r in rows],
    }
    if extra:
        doc.update(extra)
    json.dump(doc, stream, indent=1, sort_keys=True, allow_nan=False)
    stream.write("\n")


def read_csv(stream) -> list[dict]:
    """Parse a long-layout file back into dicts (used by regression tests)."""
    lines = [line for line in stream if not line.startswith("#")]
    return list(csv.DictReader(lines))

