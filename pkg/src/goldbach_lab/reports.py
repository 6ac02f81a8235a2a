"""Row-streaming JSON-lines and CSV writers.

Both formats render numbers with the same text: integers exactly, floats with
17 significant digits, so a CSV and a JSON run of the same command carry
identical values.
"""

from __future__ import annotations

import csv
import json
import math
from typing import IO, Iterable


def render_value(value) -> str | None:
    """Text form of a scalar; None means null/empty."""
    if value is None:
        return None
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value) or math.isinf(value):
            return None
        return format(value, ".17g")
    if hasattr(value, "item"):  # numpy scalar
        return render_value(value.item())
    return str(value)


def _json_token(value) -> str:
    if isinstance(value, str):
        return json.dumps(value)
    text = render_value(value)
    if text is None:
        return "null"
    if isinstance(value, (bool, int, float)) or hasattr(value, "item"):
        return text
    return json.dumps(text)


class ReportWriter:
    """Writes one row per call, flushing so long sweeps show progress."""

    def __init__(self, stream: IO[str], fmt: str, fields: Iterable[str], meta: dict | None = None):
        if fmt not in ("json", "csv"):
            raise ValueError(f"format must be json or csv, got {fmt!r}")
        self.stream = stream
        self.fmt = fmt
        self.meta = dict(meta or {})
        self.fields = list(fields) + [k for k in self.meta if k not in fields]
        self._csv = None
        if fmt == "csv":
            self._csv = csv.writer(stream, lineterminator="\n")
            self._csv.writerow(self.fields)

    def write(self, row: dict) -> None:
        full = {**self.meta, **row}
        unknown = set(full) - set(self.fields)
        if unknown:
            raise KeyError(f"row has fields outside the schema: {sorted(unknown)}")
        if self.fmt == "csv":
            self._csv.writerow(["" if (t := render_value(full.get(k))) is None else t for k in self.fields])
        else:
            body = ", ".join(f"{json.dumps(k)}: {_json_token(full.get(k))}" for k in self.fields)
            self.stream.write("{" + body + "}\n")
        self.stream.flush()

    def write_all(self, rows: Iterable[dict]) -> None:
        for row in rows:
            self.write(row)
