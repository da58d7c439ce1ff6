"""CSV and JSON encodings of result tables."""

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np


@dataclass
class Table:
    """Named columns, rows in replication or grid order, and a metadata record."""

    columns: list
    rows: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def add(self, *values):
        if len(values) != len(self.columns):
            raise ValueError(f"row has {len(values)} values for {len(self.columns)} columns")
        self.rows.append(tuple(_plain(v) for v in values))

    def column(self, name):
        i = self.columns.index(name)
        return [r[i] for r in self.rows]


def _plain(v):
    # numpy scalars -> Python scalars so both encoders see the same values
    if isinstance(v, np.generic):
        return v.item()
    return v


def _csv_cell(v):
    if isinstance(v, bool) or v is None:
        return "" if v is None else str(v).lower()
    if isinstance(v, float):
        return "%.17g" % v
    return str(v)


def to_csv(table):
    buf = io.StringIO()
    buf.write("# " + json.dumps(table.metadata, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    for row in table.rows:
        w.writerow([_csv_cell(v) for v in row])
    return buf.getvalue()


def _json_cell(v):
    # non-finite floats have no JSON literal
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def to_json(table):
    doc = {
        "metadata": table.metadata,
        "columns": list(table.columns),
        "rows": [[_json_cell(v) for v in row] for row in table.rows],
    }
    return json.dumps(doc, indent=1, sort_keys=False) + "\n"


def read_csv(text):
    """Inverse of :func:`to_csv`; numbers come back as int or float."""
    lines = text.splitlines()
    meta = json.loads(lines[0][2:]) if lines and lines[0].startswith("# ") else {}
    reader = csv.reader(lines[1:] if meta else lines)
    columns = next(reader)
    rows = []
    for rec in reader:
        rows.append(tuple(_parse_cell(c) for c in rec))
    return Table(columns, rows, meta)


def _parse_cell(c):
    if c == "":
        return None
    if c in ("true", "false"):
        return c == "true"
    try:
        return int(c)
    except ValueError:
        pass
    try:
        return float(c)
    except ValueError:
        return c


def read_json(text):
    doc = json.loads(text)
    return Table(doc["columns"], [tuple(r) for r in doc["rows"]], doc["metadata"])


def render(table, fmt):
    return to_csv(table) if fmt == "csv" else to_json(table)
