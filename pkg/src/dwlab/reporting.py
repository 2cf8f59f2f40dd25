"""Report serialization: versioned JSON and fixed-column CSV.

CSV numbers are printed with 17 significant digits; JSON uses the shortest
round-trip float representation (lossless). Reports carry no timestamps so a
run is byte-reproducible from its configuration.
"""
from __future__ import annotations

import json
import sys

SCHEMA = "dwlab-report-v1"


def fmt(x):
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    return f"{float(x):.17g}"


def build_report(command, config, rows, status):
    return {
        "schema": SCHEMA,
        "command": command,
        "config": config,
        "status": status,
        "rows": rows,
    }


def write_json(report, path=None):
    text = json.dumps(report, indent=2, default=_jsonable)
    if path is None:
        sys.stdout.write(text + "\n")
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def _jsonable(obj):
    if hasattr(obj, "tolist"):
        return obj.tolist()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    raise TypeError(f"not serializable: {type(obj)!r}")


def write_csv(rows, columns, path=None):
    lines = [",".join(columns)]
    for row in rows:
        cells = []
        for col in columns:
            v = row.get(col)
            if v is None:
                cells.append("")
            elif isinstance(v, bool):
                cells.append("true" if v else "false")
            elif isinstance(v, (int, str)):
                cells.append(str(v))
            else:
                cells.append(f"{float(v):.17g}")
        lines.append(",".join(cells))
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)
