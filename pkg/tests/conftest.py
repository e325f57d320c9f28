"""Shared helpers: compact workbook construction and fixture paths."""

from pathlib import Path

import pytest

from sheetcsp.grid import CellAddr, Sheet, Workbook, parse_cell_addr

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"


def build_workbook(cells: dict[str, str], sheets: tuple[str, ...] = ("Sheet1",), active: int = 0) -> Workbook:
    """Build a workbook from {"A1": text} or {"Sheet2!B3": text} entries."""
    wb = Workbook([Sheet(name, {}) for name in sheets], active=active)
    for ref, text in cells.items():
        addr = parse_cell_addr(wb, ref, active)
        wb.set(addr, text)
    return wb


def addr(wb: Workbook, ref: str, current_sheet: int = 0) -> CellAddr:
    return parse_cell_addr(wb, ref, current_sheet)


@pytest.fixture
def fixture_path():
    def lookup(name: str) -> Path:
        path = FIXTURES / name
        assert path.exists(), f"missing fixture {name}"
        return path

    return lookup
