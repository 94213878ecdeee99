"""Deterministic text export helpers.

All files the package writes go through these functions so that equal
inputs produce byte-identical output: floats are rendered with %.9g,
line endings are '\n', and writes to a path are atomic (temp file in
the same directory, then rename).
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np


def fmt_cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.9g" % float(value)
    if value is None:
        return ""
    return str(value)


def render_csv(header, rows) -> str:
    lines = [",".join(str(h) for h in header)]
    for row in rows:
        lines.append(",".join(fmt_cell(c) for c in row))
    return "\n".join(lines) + "\n"


def atomic_write_text(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def write_csv(path, header, rows) -> None:
    atomic_write_text(path, render_csv(header, rows))
