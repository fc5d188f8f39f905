"""CSV / JSON / whitespace-table emission with a provenance header.

Every file starts with a header holding the schema tag, package version,
a hash of the resolved configuration and the RNG seeds.  Floats are written
with 17 significant digits so doubles round-trip exactly; no timestamps are
recorded, so identical configs give byte-identical files.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from typing import Any, Iterable, Sequence

import numpy as np

SCHEMA = "negaspec/1"
FORMATS = ("csv", "json", "dat")


def _version() -> str:
    from . import __version__

    return __version__


def fmt(value: Any) -> str:
    """Cell formatting: 17g for floats, plain str otherwise."""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.17g}"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def to_jsonable(obj: Any) -> Any:
    """Recursively convert numpy scalars/arrays; non-finite floats become strings."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else fmt(v)
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2) + "\n"


def config_hash(config: dict) -> str:
    blob = json.dumps(to_jsonable(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def make_header(config: dict, seeds: Iterable[int] = (), **extra) -> dict:
    head = {
        "schema": SCHEMA,
        "version": _version(),
        "config_hash": config_hash(config),
        "config": config,
        "seeds": [int(s) for s in seeds],
    }
    head.update(extra)
    return to_jsonable(head)


def table(columns: Sequence[str], rows: Iterable[Sequence[Any]], header: dict, fmt_: str = "csv",
          summary: dict | None = None) -> str:
    """Render rows under ``header``.  csv and dat carry the header (and
    summary) as ``#`` comment lines, which gnuplot and numpy skip."""
    rows = [list(r) for r in rows]
    if fmt_ == "json":
        out = {"header": header, "columns": list(columns),
               "rows": [dict(zip(columns, r)) for r in rows]}
        if summary is not None:
            out["summary"] = summary
        return dumps(out)
    if fmt_ not in ("csv", "dat"):
        raise ValueError(f"unknown format {fmt_!r}; choose from {FORMATS}")
    buf = io.StringIO()
    buf.write("# " + json.dumps(header, sort_keys=True) + "\n")
    if summary is not None:
        buf.write("# summary " + json.dumps(to_jsonable(summary), sort_keys=True) + "\n")
    if fmt_ == "csv":
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([fmt(v) for v in r])
    else:
        buf.write("# " + " ".join(columns) + "\n")
        for r in rows:
            buf.write(" ".join(fmt(v) for v in r) + "\n")
    return buf.getvalue()


def reports_table(reports, columns: Sequence[str], header: dict, fmt_: str = "csv",
                  summary: dict | None = None) -> str:
    rows = []
    for rep in reports:
        d = rep.to_dict()
        rows.append([d[c] for c in columns])
    return table(columns, rows, header, fmt_, summary)


def read_csv(text: str) -> tuple[dict, list[dict]]:
    """Parse a file produced by ``table(..., 'csv')``: (header, rows as str dicts)."""
    lines = text.splitlines()
    header: dict = {}
    body = []
    for line in lines:
        if line.startswith("# summary "):
            header["summary"] = json.loads(line[len("# summary "):])
        elif line.startswith("# "):
            header.update(json.loads(line[2:]))
        else:
            body.append(line)
    return header, list(csv.DictReader(body))


def write(path: str | None, text: str, stream=None) -> None:
    if path in (None, "-"):
        import sys

        (stream or sys.stdout).write(text)
        return
    with open(path, "w", newline="") as fh:
        fh.write(text)
