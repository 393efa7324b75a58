"""CSV ingestion for the command-line front end.

Dialect kept deliberately simple for reproducibility: comma separated,
UTF-8, decimal point, no locale-dependent parsing.  A header row is
auto-detected: if any cell of the first row does not parse as a number,
the row is treated as a header.

Coordinates in errors refer to zero-based data rows (the header, when
present, is not counted) and to the resolved column label.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import math

from .core import PairedSample
from .errors import ColumnNotFound, EmptyAfterDrop, ParseError

__all__ = ["MissingPolicy", "InputTable", "load_table", "ingest_csv"]


class MissingPolicy(Enum):
    """What to do with rows where a selected cell is empty."""

    ERROR = "error"
    DROP_PAIRWISE = "drop"


def _parses_as_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


@dataclass
class InputTable:
    """Raw CSV contents: header (if any) plus string cells, row-major."""

    path: str
    header: list[str] | None
    rows: list[list[str]]

    @property
    def row_count(self) -> int:
        return len(self.rows)

    def resolve(self, selector: str | int) -> tuple[int, str]:
        """Map a selector (header name or zero-based index) to a column.

        Header names win over indices, so a header literally named "0"
        selects that column rather than the first one.
        """
        if self.header is not None and str(selector) in self.header:
            index = self.header.index(str(selector))
            return index, self.header[index]
        try:
            index = int(selector)
        except (TypeError, ValueError):
            raise ColumnNotFound(
                f"column {selector!r} not found"
                + (f" among headers {self.header}" if self.header else " (no header row)"),
                selector=str(selector),
            ) from None
        width = max((len(r) for r in self.rows), default=0)
        if self.header is not None:
            width = max(width, len(self.header))
        if not 0 <= index < width:
            raise ColumnNotFound(
                f"column index {index} out of range for a {width}-column table",
                selector=str(selector),
            )
        label = self.header[index] if self.header and index < len(self.header) else str(index)
        return index, label

    def cell(self, row: int, col: int) -> str:
        r = self.rows[row]
        return r[col] if col < len(r) else ""


def load_table(path: str | Path) -> InputTable:
    """Read a CSV file and auto-detect its header row."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh) if row]
    if not rows:
        raise ParseError("file contains no rows", row=0, col="")
    first = rows[0]
    has_header = not all(_parses_as_number(cell) for cell in first if cell.strip())
    if all(not cell.strip() for cell in first):
        has_header = False
    if has_header:
        return InputTable(path=str(path), header=[c.strip() for c in first], rows=rows[1:])
    return InputTable(path=str(path), header=None, rows=rows)


def _parse_cell(cell: str, row: int, col: str) -> float | None:
    """Parse one cell; empty means missing (None)."""
    text = cell.strip()
    if not text:
        return None
    try:
        value = float(text)
    except ValueError:
        raise ParseError(
            f"cell {text!r} at row {row}, column {col!r} is not a number",
            row=row,
            col=col,
        ) from None
    if not math.isfinite(value):
        raise ParseError(
            f"cell {text!r} at row {row}, column {col!r} is not finite",
            row=row,
            col=col,
        )
    return value


def ingest_csv(
    path: str | Path,
    x_selector: str | int,
    y_selector: str | int,
    missing_policy: MissingPolicy = MissingPolicy.ERROR,
) -> PairedSample:
    """Load two columns of a CSV file as a paired sample.

    Selectors resolve by header name or zero-based index.  Under
    ``MissingPolicy.ERROR`` any empty selected cell is a ``ParseError``;
    under ``DROP_PAIRWISE`` a row is skipped when either selected cell is
    empty.  Malformed non-empty cells are always errors.
    """
    table = load_table(path)
    ix, label_x = table.resolve(x_selector)
    iy, label_y = table.resolve(y_selector)
    xs: list[float] = []
    ys: list[float] = []
    for r in range(table.row_count):
        vx = _parse_cell(table.cell(r, ix), r, label_x)
        vy = _parse_cell(table.cell(r, iy), r, label_y)
        if vx is None or vy is None:
            if missing_policy is MissingPolicy.ERROR:
                col = label_x if vx is None else label_y
                raise ParseError(
                    f"missing value at row {r}, column {col!r}", row=r, col=col
                )
            continue
        xs.append(vx)
        ys.append(vy)
    if not xs:
        raise EmptyAfterDrop(
            "no rows left after dropping rows with missing values",
            path=str(path),
        )
    return PairedSample(xs, ys)
