from __future__ import annotations

import csv
import io
import json
import math
from typing import Any, List, Literal, Sequence

Cell = str | int | float | bool | None


def format_number(value: float) -> str:
    """Fixed ``%.12e`` rendering used by every CSV."""

    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "nan"
    return "%.12e" % value


class TableFormatter:
    """
    Render result tables for humans (Unicode box drawing), as JSON, or as CSV.

    Floats are shown with a fixed number of significant digits in pretty
    tables and with ``%.12e`` in CSV so that repeated runs are byte-identical.
    """

    def __init__(self, headers: Sequence[str], digits: int = 6) -> None:
        self._headers = list(headers)
        self._digits = digits
        self._rows: List[List[Cell]] = []

    @property
    def rows(self) -> List[List[Cell]]:
        return self._rows

    def add_row(self, *cells: Cell) -> None:
        if len(cells) != len(self._headers):
            raise ValueError(f"row has {len(cells)} cells, table has {len(self._headers)} columns")
        self._rows.append(list(cells))

    def extend(self, rows: Sequence[Sequence[Cell]]) -> None:
        for row in rows:
            self.add_row(*row)

    def format_table(self, format: Literal["pretty", "json", "csv"] = "pretty") -> str:
        if format == "json":
            return self._format_as_json()
        if format == "csv":
            return self._format_as_csv()
        return self._format_as_pretty_table()

    def _cell(self, cell: Cell) -> str:
        if isinstance(cell, bool):
            return "PASS" if cell else "FAIL"
        if isinstance(cell, float):
            return f"{cell:.{self._digits}g}"
        return "—" if cell is None else str(cell)

    @staticmethod
    def _column_type(values: List[Cell]) -> str:
        kinds = {type(v) for v in values if v is not None}
        if kinds <= {bool}:
            return "boolean"
        if kinds <= {int}:
            return "integer"
        if kinds <= {int, float}:
            return "number"
        return "string"

    def _format_as_json(self) -> str:
        columns = [
            {
                "name": header.lower().replace(" ", "_"),
                "type": self._column_type([row[i] for row in self._rows]),
            }
            for i, header in enumerate(self._headers)
        ]
        rows = [[_json_safe(cell) for cell in row] for row in self._rows]
        result = {"columns": columns, "rows": rows, "total_rows": len(rows)}
        return json.dumps(result, indent=2, ensure_ascii=False)

    def _format_as_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self._headers)
        for row in self._rows:
            writer.writerow(
                [format_number(c) if isinstance(c, float) else ("" if c is None else c) for c in row]
            )
        return buffer.getvalue()

    def _format_as_pretty_table(self) -> str:
        cells = [[self._cell(c) for c in row] for row in self._rows]
        col_widths = [len(h) for h in self._headers]
        for row in cells:
            for i, cell in enumerate(row):
                col_widths[i] = max(col_widths[i], len(cell))

        lines = ["┌" + "┬".join("─" * (w + 2) for w in col_widths) + "┐"]
        lines.append("│" + "│".join(f" {h:<{col_widths[i]}} " for i, h in enumerate(self._headers)) + "│")
        lines.append("├" + "┼".join("─" * (w + 2) for w in col_widths) + "┤")
        for row in cells:
            lines.append("│" + "│".join(f" {cell:<{col_widths[i]}} " for i, cell in enumerate(row)) + "│")
        lines.append("└" + "┴".join("─" * (w + 2) for w in col_widths) + "┘")
        return "\n".join(lines)


def _json_safe(cell: Any) -> Any:
    if isinstance(cell, float) and not math.isfinite(cell):
        return None
    return cell
