"""Byte-stable tabular output (CSV and JSONL)."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Sequence, Union


def format_value(v) -> str:
    """Render a cell deterministically; floats keep full round-trip precision."""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def rows_to_csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(header))
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def rows_to_jsonl(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    # json keeps shortest round-trip float representations, so precision
    # matches the CSV output
    lines = [json.dumps(dict(zip(header, row)), sort_keys=False) for row in rows]
    return "\n".join(lines) + "\n"


def write_table(
    path: Union[str, Path],
    header: Sequence[str],
    rows: Sequence[Sequence],
    format: str = "csv",
) -> Path:
    path = Path(path)
    if format == "csv":
        path = path.with_suffix(".csv")
        path.write_text(rows_to_csv(header, rows), encoding="utf-8")
    elif format == "jsonl":
        path = path.with_suffix(".jsonl")
        path.write_text(rows_to_jsonl(header, rows), encoding="utf-8")
    else:
        raise ValueError(f"unknown table format {format!r}; expected csv or jsonl")
    return path


def parse_csv(text: str) -> tuple[list[str], list[list[str]]]:
    reader = csv.reader(io.StringIO(text))
    rows = list(reader)
    if not rows:
        raise ValueError("empty table")
    return rows[0], rows[1:]
