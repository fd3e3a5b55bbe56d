"""Plain-text artifacts: ``#``-commented CSV and sorted-key JSON."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

FLOAT_FORMAT = "%.17g"


def _cell(x):
    if isinstance(x, (str, np.str_)):
        return str(x)
    return FLOAT_FORMAT % x


def write_csv(path, names, columns, header_lines=()):
    """Write equal-length ``columns`` under ``names``.

    Each entry of ``header_lines`` becomes one ``# ``-prefixed line above the
    column names. Floats are printed with 17 significant digits so values
    round-trip exactly.
    """
    columns = [np.asarray(c) for c in columns]
    n = {len(c) for c in columns}
    if len(n) > 1:
        raise ValueError(f"columns of unequal length {sorted(n)}")
    path = Path(path)
    with path.open("w", newline="\n") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write(",".join(names) + "\n")
        for row in zip(*columns):
            fh.write(",".join(_cell(x) for x in row) + "\n")
    return path


def read_csv(path):
    """Return ``(header_lines, names, columns)``; numeric columns become float arrays."""
    header, rows, names = [], [], None
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                header.append(line[1:].strip())
            elif names is None:
                names = line.split(",")
            elif line:
                rows.append(line.split(","))
    cols = []
    for j in range(len(names or [])):
        raw = [r[j] for r in rows]
        try:
            cols.append(np.array([float(x) for x in raw]))
        except ValueError:
            cols.append(np.array(raw))
    return header, names, cols


def write_json(path, doc):
    path = Path(path)
    path.write_text(json.dumps(doc, indent=2, sort_keys=True, default=_json_default) + "\n")
    return path


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serialisable: {type(obj).__name__}")
