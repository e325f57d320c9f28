"""Workbook model and A1-style addressing.

Addresses use spreadsheet notation: columns A..IV (1..256), rows 1..65536,
optionally qualified by a sheet name ("Sheet2!B1"). Cell contents are raw
text; empty cells are absent entries, never empty strings.
"""

from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Union

from .errors import AddressError, RangeSpecError, SheetError, SnapshotMismatch

MAX_COLS = 256
MAX_ROWS = 65536

_ADDR_RE = re.compile(r"^\$?([A-Za-z]{1,2})\$?([0-9]{1,6})$")


def col_number(letters: str) -> int:
    """Decode column letters to a 1-based index (A=1, Z=26, AA=27, IV=256)."""
    n = 0
    for ch in letters.upper():
        if not "A" <= ch <= "Z":
            raise AddressError(f"bad column letters {letters!r}")
        n = n * 26 + (ord(ch) - ord("A") + 1)
    if not 1 <= n <= MAX_COLS:
        raise AddressError(f"column {letters!r} outside A..IV")
    return n


def col_letters(n: int) -> str:
    """Inverse of col_number for 1..256."""
    if not 1 <= n <= MAX_COLS:
        raise AddressError(f"column index {n} outside 1..{MAX_COLS}")
    letters = ""
    while n:
        n, rem = divmod(n - 1, 26)
        letters = chr(ord("A") + rem) + letters
    return letters


@dataclass(frozen=True, order=True)
class CellAddr:
    """A resolved cell position: sheet index plus 1-based column and row."""

    sheet: int
    col: int
    row: int


@dataclass(frozen=True)
class Single:
    addr: CellAddr


@dataclass(frozen=True)
class Rect:
    """Rectangular block; corners normalized so top_left is the min corner."""

    top_left: CellAddr
    bottom_right: CellAddr


@dataclass(frozen=True)
class Enumeration:
    """Bracketed list of range items, kept in written order."""

    items: tuple[Union[Single, Rect], ...]


RangeSpec = Union[Single, Rect, Enumeration]


@dataclass
class Sheet:
    name: str
    cells: dict[tuple[int, int], str] = field(default_factory=dict)


class Workbook:
    """Ordered sheets plus the index of the active one."""

    def __init__(self, sheets: list[Sheet] | None = None, active: int = 0):
        self.sheets = sheets if sheets is not None else [Sheet("Sheet1")]
        if not self.sheets:
            raise SheetError("workbook needs at least one sheet")
        seen: set[str] = set()
        for sh in self.sheets:
            _check_sheet_name(sh.name)
            if sh.name.lower() in seen:
                raise SheetError(f"duplicate sheet name {sh.name!r}")
            seen.add(sh.name.lower())
        if not 0 <= active < len(self.sheets):
            raise SheetError(f"active sheet index {active} out of range")
        self.active = active

    def sheet_index(self, name: str) -> int:
        wanted = name.lower()
        for i, sh in enumerate(self.sheets):
            if sh.name.lower() == wanted:
                return i
        raise SheetError(f"unknown sheet {name!r}")

    def get(self, addr: CellAddr) -> str | None:
        return self.sheets[addr.sheet].cells.get((addr.col, addr.row))

    def set(self, addr: CellAddr, text: str) -> None:
        """Set cell text; empty text deletes the cell."""
        key = (addr.col, addr.row)
        cells = self.sheets[addr.sheet].cells
        if text == "":
            cells.pop(key, None)
        else:
            cells[key] = text

    def iter_cells(self) -> Iterator[tuple[CellAddr, str]]:
        """All non-empty cells, sheets in order, row-major within a sheet."""
        for si, sh in enumerate(self.sheets):
            for (col, row) in sorted(sh.cells, key=lambda k: (k[1], k[0])):
                yield CellAddr(si, col, row), sh.cells[(col, row)]


def _check_sheet_name(name: str) -> None:
    if not name or "!" in name or any(c.isspace() for c in name):
        raise SheetError(f"bad sheet name {name!r}: must be nonempty, no spaces or '!'")


def clean_cell_text(text: str) -> str:
    """Strip the formula prefixes a spreadsheet front end prepends ('=', '@')."""
    text = text.strip()
    while text and text[0] in "=@":
        text = text[1:].lstrip()
    return text


def parse_cell_addr(wb: Workbook, text: str, current_sheet: int) -> CellAddr:
    """Parse "B2" or "Sheet2!B2"; unqualified addresses bind to current_sheet."""
    text = text.strip()
    sheet = current_sheet
    if "!" in text:
        sheet_name, _, rest = text.partition("!")
        sheet = wb.sheet_index(sheet_name.strip())
        text = rest.strip()
    m = _ADDR_RE.match(text)
    if not m:
        raise AddressError(f"malformed cell address {text!r}")
    col = col_number(m.group(1))
    row = int(m.group(2))
    if not 1 <= row <= MAX_ROWS:
        raise AddressError(f"row {row} outside 1..{MAX_ROWS}")
    return CellAddr(sheet, col, row)


def format_cell_addr(wb: Workbook, addr: CellAddr, current_sheet: int) -> str:
    a1 = f"{col_letters(addr.col)}{addr.row}"
    if addr.sheet == current_sheet:
        return a1
    return f"{wb.sheets[addr.sheet].name}!{a1}"


def var_name(wb: Workbook, addr: CellAddr, current_sheet: int) -> str:
    """Identifier for a cell: "B2" on the current sheet, "Sheet2B2" elsewhere.

    The result always starts with an uppercase letter so it can serve as a
    logic-variable name in emitted programs.
    """
    a1 = f"{col_letters(addr.col)}{addr.row}"
    if addr.sheet == current_sheet:
        return a1
    name = wb.sheets[addr.sheet].name
    return name[0].upper() + name[1:] + a1


def make_rect(a: CellAddr, b: CellAddr) -> Rect:
    """Normalize two corners into a Rect; both must lie on one sheet."""
    if a.sheet != b.sheet:
        raise RangeSpecError("rectangle corners on different sheets")
    return Rect(
        CellAddr(a.sheet, min(a.col, b.col), min(a.row, b.row)),
        CellAddr(a.sheet, max(a.col, b.col), max(a.row, b.row)),
    )


def parse_range_item(wb: Workbook, text: str, current_sheet: int) -> Union[Single, Rect]:
    """Parse one item: "A1", "A1:B2", or "Sheet2!B1:B10".

    In the colon form an unqualified second corner inherits the first
    corner's sheet, so "Sheet2!B1:B10" stays wholly on Sheet2.
    """
    text = text.strip()
    if ":" not in text:
        return Single(parse_cell_addr(wb, text, current_sheet))
    left, _, right = text.partition(":")
    a = parse_cell_addr(wb, left, current_sheet)
    b = parse_cell_addr(wb, right, a.sheet)
    return make_rect(a, b)


def parse_range_spec(wb: Workbook, text: str, current_sheet: int) -> RangeSpec:
    """Parse a range: single cell, rectangle, or bracketed enumeration."""
    text = text.strip()
    if not text:
        raise RangeSpecError("empty range")
    if text.startswith("["):
        if not text.endswith("]"):
            raise RangeSpecError(f"unterminated enumeration {text!r}")
        body = text[1:-1].strip()
        if not body:
            raise RangeSpecError("empty enumeration")
        items = tuple(
            parse_range_item(wb, part, current_sheet) for part in body.split(",")
        )
        return Enumeration(items)
    return parse_range_item(wb, text, current_sheet)


def format_range_spec(wb: Workbook, spec: RangeSpec, current_sheet: int) -> str:
    if isinstance(spec, Single):
        return format_cell_addr(wb, spec.addr, current_sheet)
    if isinstance(spec, Rect):
        tl = format_cell_addr(wb, spec.top_left, current_sheet)
        br = f"{col_letters(spec.bottom_right.col)}{spec.bottom_right.row}"
        return f"{tl}:{br}"
    parts = [format_range_spec(wb, item, current_sheet) for item in spec.items]
    return "[" + ",".join(parts) + "]"


# --- snapshot / restore -----------------------------------------------------

GridSnapshot = dict[str, dict[tuple[int, int], str]]


def snapshot(wb: Workbook) -> GridSnapshot:
    return {sh.name: dict(sh.cells) for sh in wb.sheets}


def restore(wb: Workbook, snap: GridSnapshot) -> None:
    if set(snap) != {sh.name for sh in wb.sheets}:
        raise SnapshotMismatch("snapshot does not match workbook sheet set")
    for sh in wb.sheets:
        sh.cells = dict(snap[sh.name])


# --- serialization ----------------------------------------------------------


def workbook_to_json(wb: Workbook) -> dict:
    sheets = []
    for sh in wb.sheets:
        cells = {
            f"{col_letters(col)}{row}": text
            for (col, row), text in sorted(sh.cells.items(), key=lambda kv: (kv[0][1], kv[0][0]))
        }
        sheets.append({"name": sh.name, "cells": cells})
    return {"sheets": sheets, "active": wb.active}


def workbook_from_json(data: dict) -> Workbook:
    if not isinstance(data, dict) or "sheets" not in data:
        raise SheetError("workbook JSON needs a 'sheets' list")
    raw_sheets = data["sheets"]
    if not isinstance(raw_sheets, list) or not raw_sheets:
        raise SheetError("workbook JSON needs a nonempty 'sheets' list")
    sheets = []
    for raw in raw_sheets:
        if not isinstance(raw, dict) or "name" not in raw:
            raise SheetError("each sheet needs a 'name'")
        sheet = Sheet(str(raw["name"]))
        for key, text in (raw.get("cells") or {}).items():
            m = _ADDR_RE.match(key)
            if not m or "!" in key:
                raise AddressError(f"bad cell key {key!r} in sheet {sheet.name!r}")
            col = col_number(m.group(1))
            row = int(m.group(2))
            if not 1 <= row <= MAX_ROWS:
                raise AddressError(f"row {row} outside 1..{MAX_ROWS}")
            if str(text) != "":
                sheet.cells[(col, row)] = str(text)
        sheets.append(sheet)
    active = data.get("active", 0)
    if not isinstance(active, int):
        raise SheetError("'active' must be an integer sheet index")
    return Workbook(sheets, active)


def load_workbook_json(path: str | Path) -> Workbook:
    with open(path, encoding="utf-8") as fh:
        return workbook_from_json(json.load(fh))


def save_workbook_json(wb: Workbook, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(workbook_to_json(wb), fh, indent=2)
        fh.write("\n")


def load_workbook_csv_dir(path: str | Path) -> Workbook:
    """Load one CSV file per sheet; the file stem names the sheet.

    Files are taken in sorted order, rows map to rows 1.., fields to
    columns A.., and empty fields stay empty cells.
    """
    directory = Path(path)
    files = sorted(directory.glob("*.csv"))
    if not files:
        raise SheetError(f"no .csv files in {directory}")
    sheets = []
    for file in files:
        sheet = Sheet(file.stem)
        with open(file, newline="", encoding="utf-8") as fh:
            for r, record in enumerate(csv.reader(fh), start=1):
                for c, text in enumerate(record, start=1):
                    if text != "":
                        sheet.cells[(c, r)] = text
        sheets.append(sheet)
    return Workbook(sheets, 0)
