"""Range-to-list transformations feeding the constraint compiler.

A range spec turns into a flat cell list or into groups (rows, columns,
diagonals) whose orders are part of the published behavior and are pinned
by golden tests.
"""

from __future__ import annotations

from typing import TypeVar

from .errors import MatrixRequired, RangeSpecError
from .grid import CellAddr, Enumeration, RangeSpec, Rect, Single

T = TypeVar("T")


def flatten(spec: RangeSpec) -> list[CellAddr]:
    """Row-major cell list; enumeration items stay in written order."""
    if isinstance(spec, Single):
        return [spec.addr]
    if isinstance(spec, Rect):
        tl, br = spec.top_left, spec.bottom_right
        return [
            CellAddr(tl.sheet, col, row)
            for row in range(tl.row, br.row + 1)
            for col in range(tl.col, br.col + 1)
        ]
    out: list[CellAddr] = []
    for item in spec.items:
        out.extend(flatten(item))
    return out


def _require_rect(spec: RangeSpec) -> Rect:
    if not isinstance(spec, Rect):
        raise MatrixRequired("a matrix (rectangle) range is required here")
    return spec


def rows(spec: RangeSpec) -> list[list[CellAddr]]:
    """One group per row, top to bottom, cells left to right."""
    rect = _require_rect(spec)
    tl, br = rect.top_left, rect.bottom_right
    return [
        [CellAddr(tl.sheet, col, row) for col in range(tl.col, br.col + 1)]
        for row in range(tl.row, br.row + 1)
    ]


def cols(spec: RangeSpec) -> list[list[CellAddr]]:
    """One group per column, left to right, cells top to bottom."""
    rect = _require_rect(spec)
    tl, br = rect.top_left, rect.bottom_right
    return [
        [CellAddr(tl.sheet, col, row) for row in range(tl.row, br.row + 1)]
        for col in range(tl.col, br.col + 1)
    ]


def diagonals(spec: RangeSpec) -> list[list[CellAddr]]:
    """Down-right diagonals, grouped by col-row, that difference descending.

    The first group is the single top-right cell; within a group cells run
    top to bottom.
    """
    rect = _require_rect(spec)
    tl, br = rect.top_left, rect.bottom_right
    groups = []
    for d in range(br.col - tl.row, tl.col - br.row - 1, -1):
        group = [
            CellAddr(tl.sheet, row + d, row)
            for row in range(max(tl.row, tl.col - d), min(br.row, br.col - d) + 1)
        ]
        if group:
            groups.append(group)
    return groups


def back_diagonals(spec: RangeSpec) -> list[list[CellAddr]]:
    """Down-left diagonals, grouped by col+row, that sum ascending.

    The first group is the single top-left cell; within a group cells run
    top to bottom (column descending).
    """
    rect = _require_rect(spec)
    tl, br = rect.top_left, rect.bottom_right
    groups = []
    for s in range(tl.col + tl.row, br.col + br.row + 1):
        group = [
            CellAddr(tl.sheet, s - row, row)
            for row in range(max(tl.row, s - br.col), min(br.row, s - tl.col) + 1)
        ]
        if group:
            groups.append(group)
    return groups


def set_len(items: list[T], n: int) -> list[T]:
    """Normalize a list to length n: truncate, or pad by repeating the last item."""
    if not items:
        raise RangeSpecError("cannot length-normalize an empty list")
    if n < 1:
        raise RangeSpecError(f"target length must be >= 1, got {n}")
    if len(items) >= n:
        return list(items[:n])
    return list(items) + [items[-1]] * (n - len(items))
