"""Spreadsheet constraint workbench.

Cells hold finite-domain declarations and ss* constraint functions; the
compiler lowers them to a CSP and to CLP(FD) program text; the embedded
solver enumerates and optimizes; a session layer drives the ParseBuild /
Next / Previous / Original-State loop behind the CLI and HTTP service.
"""

from .compiler import CompiledModel, Diagnostic, compile_workbook, emit_clp
from .errors import SheetCspError
from .fdsolver import OptimizeResult, SearchConfig, solve_all, solve_optimal
from .grid import (
    CellAddr,
    Sheet,
    Workbook,
    load_workbook_csv_dir,
    load_workbook_json,
    parse_cell_addr,
    parse_range_spec,
    save_workbook_json,
    workbook_from_json,
    workbook_to_json,
)
from .session import Session, SessionStatus, View
from .service import create_app

__version__ = "0.1.0"

__all__ = [
    "CellAddr",
    "CompiledModel",
    "Diagnostic",
    "OptimizeResult",
    "SearchConfig",
    "Session",
    "SessionStatus",
    "Sheet",
    "SheetCspError",
    "View",
    "Workbook",
    "compile_workbook",
    "create_app",
    "emit_clp",
    "load_workbook_csv_dir",
    "load_workbook_json",
    "parse_cell_addr",
    "parse_range_spec",
    "save_workbook_json",
    "solve_all",
    "solve_optimal",
    "workbook_from_json",
    "workbook_to_json",
    "__version__",
]
