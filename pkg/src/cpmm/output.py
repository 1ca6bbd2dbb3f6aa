"""CSV and text writers with 12 significant digits and fixed row order."""
from __future__ import annotations

import csv
import io
import math
from pathlib import Path

from .extreal import fmt


def cell(v) -> str:
    if isinstance(v, bool) or v is None:
        return "" if v is None else str(v).lower()
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return "nan" if math.isnan(v) else fmt(v)
    try:
        return fmt(float(v)) if not isinstance(v, str) else v
    except (TypeError, ValueError):
        return str(v)


def csv_text(header, rows, notes=()) -> str:
    """CSV with optional leading '# ' comment lines for units and scaling."""
    buf = io.StringIO()
    for line in notes:
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([cell(v) for v in row])
    return buf.getvalue()


def read_csv(path) -> tuple[list, list]:
    lines = [ln for ln in Path(path).read_text().splitlines() if not ln.startswith("#")]
    rows = list(csv.reader(lines))
    return rows[0], rows[1:]


class OutputDir:
    """Writes named artifacts under one directory, remembering what was written."""

    def __init__(self, path, formats=("csv", "svg", "txt")):
        self.path = Path(path) if path is not None else None
        self.formats = set(formats)
        self.written: list[Path] = []

    def _write(self, name: str, text: str, kind: str):
        if self.path is None or kind not in self.formats:
            return None
        self.path.mkdir(parents=True, exist_ok=True)
        target = self.path / name
        target.write_text(text)
        self.written.append(target)
        return target

    def csv(self, name, header, rows, notes=()):
        return self._write(name, csv_text(header, rows, notes), "csv")

    def svg(self, name, text):
        return self._write(name, text, "svg")

    def txt(self, name, text):
        return self._write(name, text, "txt")


__all__ = ["OutputDir", "cell", "csv_text", "read_csv"]
