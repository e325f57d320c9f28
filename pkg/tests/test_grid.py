"""Addressing, range parsing, snapshots, and workbook serialization."""

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import build_workbook
from sheetcsp.errors import AddressError, RangeSpecError, SheetError, SnapshotMismatch
from sheetcsp.grid import (
    CellAddr,
    Enumeration,
    Rect,
    Sheet,
    Single,
    Workbook,
    clean_cell_text,
    col_letters,
    col_number,
    format_cell_addr,
    format_range_spec,
    load_workbook_csv_dir,
    load_workbook_json,
    parse_cell_addr,
    parse_range_item,
    parse_range_spec,
    restore,
    save_workbook_json,
    snapshot,
    var_name,
    workbook_from_json,
    workbook_to_json,
)


def two_sheet_workbook() -> Workbook:
    return Workbook([Sheet("Sheet1"), Sheet("Sheet2")])


# --- column codec -----------------------------------------------------------


def test_col_number_known_values():
    assert col_number("A") == 1
    assert col_number("Z") == 26
    assert col_number("AA") == 27
    assert col_number("IV") == 256
    assert col_number("b") == 2  # case-insensitive


def test_col_letters_known_values():
    assert col_letters(1) == "A"
    assert col_letters(26) == "Z"
    assert col_letters(27) == "AA"
    assert col_letters(256) == "IV"


@pytest.mark.parametrize("bad", ["", "IW", "ZZ", "A1"])
def test_col_number_rejects(bad):
    with pytest.raises(AddressError):
        col_number(bad)


@pytest.mark.parametrize("bad", [0, 257, -1])
def test_col_letters_rejects(bad):
    with pytest.raises(AddressError):
        col_letters(bad)


@given(st.integers(min_value=1, max_value=256))
def test_col_codec_round_trip(n):
    assert col_number(col_letters(n)) == n


# --- cell addresses -----------------------------------------------------------


def test_parse_cell_addr_plain():
    wb = two_sheet_workbook()
    assert parse_cell_addr(wb, "B2", 0) == CellAddr(0, 2, 2)
    assert parse_cell_addr(wb, "b2", 0) == CellAddr(0, 2, 2)
    assert parse_cell_addr(wb, "$B$2", 0) == CellAddr(0, 2, 2)
    assert parse_cell_addr(wb, "IV65536", 0) == CellAddr(0, 256, 65536)


def test_parse_cell_addr_sheet_qualified():
    wb = two_sheet_workbook()
    assert parse_cell_addr(wb, "Sheet2!C3", 0) == CellAddr(1, 3, 3)
    assert parse_cell_addr(wb, "sheet2!C3", 0) == CellAddr(1, 3, 3)
    # unqualified binds to the current sheet
    assert parse_cell_addr(wb, "C3", 1) == CellAddr(1, 3, 3)


@pytest.mark.parametrize("bad", ["", "B", "2", "B0", "B65537", "IW1", "B2C", "B-2"])
def test_parse_cell_addr_rejects(bad):
    wb = two_sheet_workbook()
    with pytest.raises(AddressError):
        parse_cell_addr(wb, bad, 0)


def test_parse_cell_addr_unknown_sheet():
    wb = two_sheet_workbook()
    with pytest.raises(SheetError):
        parse_cell_addr(wb, "Sheet9!A1", 0)


def test_format_cell_addr():
    wb = two_sheet_workbook()
    assert format_cell_addr(wb, CellAddr(0, 2, 2), 0) == "B2"
    assert format_cell_addr(wb, CellAddr(1, 2, 2), 0) == "Sheet2!B2"
    assert format_cell_addr(wb, CellAddr(1, 2, 2), 1) == "B2"


def test_var_name_uppercases_sheet_prefix():
    wb = Workbook([Sheet("Sheet1"), Sheet("results")])
    assert var_name(wb, CellAddr(0, 1, 1), 0) == "A1"
    assert var_name(wb, CellAddr(1, 1, 1), 0) == "ResultsA1"


@given(st.integers(min_value=1, max_value=256), st.integers(min_value=1, max_value=65536))
def test_addr_format_parse_round_trip(col, row):
    wb = two_sheet_workbook()
    a = CellAddr(1, col, row)
    assert parse_cell_addr(wb, format_cell_addr(wb, a, 0), 0) == a


# --- range specs --------------------------------------------------------------


def test_parse_range_item_single_and_rect():
    wb = two_sheet_workbook()
    assert parse_range_item(wb, "A1", 0) == Single(CellAddr(0, 1, 1))
    rect = parse_range_item(wb, "A1:B2", 0)
    assert rect == Rect(CellAddr(0, 1, 1), CellAddr(0, 2, 2))


def test_rect_corners_normalized():
    wb = two_sheet_workbook()
    assert parse_range_item(wb, "B2:A1", 0) == parse_range_item(wb, "A1:B2", 0)
    assert parse_range_item(wb, "A2:B1", 0) == parse_range_item(wb, "A1:B2", 0)


def test_rect_second_corner_inherits_sheet():
    wb = two_sheet_workbook()
    rect = parse_range_item(wb, "Sheet2!B1:B10", 0)
    assert rect.top_left == CellAddr(1, 2, 1)
    assert rect.bottom_right == CellAddr(1, 2, 10)


def test_rect_cross_sheet_rejected():
    wb = two_sheet_workbook()
    with pytest.raises(RangeSpecError):
        parse_range_item(wb, "A1:Sheet2!B2", 0)


def test_parse_range_spec_enumeration():
    wb = two_sheet_workbook()
    spec = parse_range_spec(wb, "[A1, B2, C1]", 0)
    assert isinstance(spec, Enumeration)
    assert spec.items == (
        Single(CellAddr(0, 1, 1)),
        Single(CellAddr(0, 2, 2)),
        Single(CellAddr(0, 3, 1)),
    )


def test_parse_range_spec_enumeration_with_rect_item():
    wb = two_sheet_workbook()
    spec = parse_range_spec(wb, "[A1:A2, Sheet2!B1]", 0)
    assert spec.items == (
        Rect(CellAddr(0, 1, 1), CellAddr(0, 1, 2)),
        Single(CellAddr(1, 2, 1)),
    )


@pytest.mark.parametrize("bad", ["", "[]", "[A1", "A1:", ":A1"])
def test_parse_range_spec_rejects(bad):
    wb = two_sheet_workbook()
    with pytest.raises((RangeSpecError, AddressError)):
        parse_range_spec(wb, bad, 0)


def test_format_range_spec_round_trip():
    wb = two_sheet_workbook()
    for text in ["A1", "A1:B2", "Sheet2!C1:D2", "[A1,B2]", "[A1:A2,Sheet2!B1]"]:
        spec = parse_range_spec(wb, text, 0)
        assert parse_range_spec(wb, format_range_spec(wb, spec, 0), 0) == spec


# --- workbook cells -----------------------------------------------------------


def test_set_empty_deletes():
    wb = Workbook()
    a1 = CellAddr(0, 1, 1)
    wb.set(a1, "5")
    assert wb.get(a1) == "5"
    wb.set(a1, "")
    assert wb.get(a1) is None
    assert (1, 1) not in wb.sheets[0].cells


def test_iter_cells_row_major_sheets_in_order():
    wb = build_workbook(
        {"B1": "b1", "A2": "a2", "A1": "a1", "Sheet2!A1": "s2"},
        sheets=("Sheet1", "Sheet2"),
    )
    texts = [text for _, text in wb.iter_cells()]
    assert texts == ["a1", "b1", "a2", "s2"]


@pytest.mark.parametrize("name", ["", "has space", "has!bang", "tab\tname"])
def test_bad_sheet_names_rejected(name):
    with pytest.raises(SheetError):
        Workbook([Sheet(name)])


def test_duplicate_sheet_names_rejected_case_insensitive():
    with pytest.raises(SheetError):
        Workbook([Sheet("Data"), Sheet("data")])


def test_clean_cell_text():
    assert clean_cell_text("=ssDomain(A1,1,3)") == "ssDomain(A1,1,3)"
    assert clean_cell_text("=@ssMin(A1)") == "ssMin(A1)"
    assert clean_cell_text("  = A1 #> 5 ") == "A1 #> 5"
    assert clean_cell_text("plain") == "plain"


# --- snapshot / restore ---------------------------------------------------------


def test_snapshot_restore_round_trip():
    wb = build_workbook({"A1": "1..3", "B2": "x"})
    snap = snapshot(wb)
    wb.set(CellAddr(0, 1, 1), "99")
    wb.set(CellAddr(0, 3, 3), "new")
    restore(wb, snap)
    assert wb.get(CellAddr(0, 1, 1)) == "1..3"
    assert wb.get(CellAddr(0, 3, 3)) is None


def test_snapshot_is_isolated_from_later_edits():
    wb = build_workbook({"A1": "1"})
    snap = snapshot(wb)
    wb.set(CellAddr(0, 1, 1), "2")
    assert snap["Sheet1"][(1, 1)] == "1"


def test_restore_rejects_mismatched_sheets():
    wb = build_workbook({"A1": "1"})
    snap = snapshot(wb)
    other = Workbook([Sheet("Other")])
    with pytest.raises(SnapshotMismatch):
        restore(other, snap)


# --- serialization ---------------------------------------------------------------


def test_workbook_json_round_trip():
    wb = build_workbook(
        {"A1": "1..3", "B2": "ssMin(A1)", "Sheet2!C4": "7"},
        sheets=("Sheet1", "Sheet2"),
        active=1,
    )
    data = workbook_to_json(wb)
    back = workbook_from_json(data)
    assert workbook_to_json(back) == data
    assert back.active == 1
    assert back.get(CellAddr(1, 3, 4)) == "7"


def test_workbook_from_json_drops_empty_strings():
    wb = workbook_from_json({"sheets": [{"name": "S", "cells": {"A1": "", "B1": "x"}}]})
    assert wb.get(CellAddr(0, 1, 1)) is None
    assert wb.get(CellAddr(0, 2, 1)) == "x"


@pytest.mark.parametrize(
    "data",
    [
        {},
        {"sheets": []},
        {"sheets": [{"cells": {}}]},
        {"sheets": [{"name": "S"}], "active": 3},
        {"sheets": [{"name": "S"}], "active": "0"},
        {"sheets": [{"name": "S", "cells": {"A0": "x"}}]},
        {"sheets": [{"name": "S", "cells": {"nope": "x"}}]},
    ],
)
def test_workbook_from_json_rejects(data):
    with pytest.raises((SheetError, AddressError)):
        workbook_from_json(data)


def test_save_and_load_json(tmp_path):
    wb = build_workbook({"A1": "1..3"})
    path = tmp_path / "wb.json"
    save_workbook_json(wb, path)
    assert json.loads(path.read_text())["sheets"][0]["cells"] == {"A1": "1..3"}
    back = load_workbook_json(path)
    assert workbook_to_json(back) == workbook_to_json(wb)


def test_load_workbook_csv_dir(tmp_path):
    (tmp_path / "alpha.csv").write_text("1,,3\n,5\n")
    (tmp_path / "beta.csv").write_text("x\n")
    wb = load_workbook_csv_dir(tmp_path)
    assert [sh.name for sh in wb.sheets] == ["alpha", "beta"]
    assert wb.get(CellAddr(0, 1, 1)) == "1"
    assert wb.get(CellAddr(0, 2, 1)) is None
    assert wb.get(CellAddr(0, 3, 1)) == "3"
    assert wb.get(CellAddr(0, 2, 2)) == "5"
    assert wb.get(CellAddr(1, 1, 1)) == "x"


def test_load_workbook_csv_dir_empty(tmp_path):
    with pytest.raises(SheetError):
        load_workbook_csv_dir(tmp_path)
