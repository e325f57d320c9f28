"""Command-line front end: validate, solve, emit program text, serve HTTP.

Commands:

  check WB                 compile only; print diagnostics; exit 0 iff clean
  solve WB [flags]         solve and print solutions
  emit  WB [-o PATH]       write the CLP(FD) program text
  serve [--port P] [...]   run the HTTP service

Exit codes: 0 success (solve: at least one solution), 1 compile error,
2 usage error or unreadable input, 3 no solution, 130 interrupted.
"""

from __future__ import annotations

import argparse
import json
import signal
import sys
import threading
from dataclasses import dataclass
from typing import Optional, Sequence

from . import fdsolver
from .compiler import CompiledModel, compile_workbook, diagnostic_from_error, emit_clp
from .errors import SheetCspError, SolveCancelled
from .fdsolver import SearchConfig, Solution
from .grid import (
    Workbook,
    col_letters,
    format_cell_addr,
    load_workbook_csv_dir,
    load_workbook_json,
)

EXIT_OK = 0
EXIT_COMPILE_ERROR = 1
EXIT_USAGE = 2
EXIT_UNSAT = 3
EXIT_INTERRUPTED = 130


@dataclass
class CliConfig:
    """One parsed invocation; exactly one command, flags already validated."""

    command: str
    workbook_path: Optional[str] = None
    csv_dir: Optional[str] = None
    solutions: str = "first"  # first | all | max
    max_solutions: int = 1000
    output_format: str = "table"
    emit_path: Optional[str] = None
    out_path: Optional[str] = None
    port: int = 8000
    host: str = "127.0.0.1"
    frontend_dir: Optional[str] = None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sheetcsp",
        description="Spreadsheet constraint workbench: compile, solve, emit, serve.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_input(p: argparse.ArgumentParser) -> None:
        p.add_argument("workbook", nargs="?", help="workbook JSON file")
        p.add_argument("--csv-dir", help="directory of per-sheet CSV files")

    p_check = sub.add_parser("check", help="compile only and report diagnostics")
    add_input(p_check)

    p_solve = sub.add_parser("solve", help="solve and print solutions")
    add_input(p_solve)
    how = p_solve.add_mutually_exclusive_group()
    how.add_argument("--first", action="store_true", help="print the first solution (default)")
    how.add_argument("--all", action="store_true", help="print every solution up to the cap")
    how.add_argument("--max", type=int, metavar="N", help="print at most N solutions")
    p_solve.add_argument("--format", choices=("table", "json"), default="table")
    p_solve.add_argument("--emit-clp", metavar="PATH", help="also write the program text to PATH")

    p_emit = sub.add_parser("emit", help="write the CLP(FD) program text")
    add_input(p_emit)
    p_emit.add_argument("-o", "--output", metavar="PATH", help="output file (default stdout)")

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--workbook", help="workbook JSON file to preload")
    p_serve.add_argument("--csv-dir", help="directory of per-sheet CSV files to preload")
    p_serve.add_argument("--frontend-dir", help="static web UI directory to serve at /")

    return parser


def parse_cli(argv: Sequence[str]) -> CliConfig:
    args = build_parser().parse_args(argv)
    cfg = CliConfig(command=args.command)
    if args.command == "serve":
        cfg.port = args.port
        cfg.host = args.host
        cfg.workbook_path = args.workbook
        cfg.csv_dir = args.csv_dir
        cfg.frontend_dir = args.frontend_dir
        return cfg
    cfg.workbook_path = args.workbook
    cfg.csv_dir = args.csv_dir
    if cfg.workbook_path is None and cfg.csv_dir is None:
        build_parser().error(f"{args.command}: a workbook JSON file or --csv-dir is required")
    if cfg.workbook_path is not None and cfg.csv_dir is not None:
        build_parser().error(f"{args.command}: give either a workbook file or --csv-dir, not both")
    if args.command == "solve":
        if args.all:
            cfg.solutions = "all"
        elif args.max is not None:
            if args.max < 1:
                build_parser().error("--max must be at least 1")
            cfg.solutions = "max"
            cfg.max_solutions = args.max
        cfg.output_format = args.format
        cfg.emit_path = args.emit_clp
    elif args.command == "emit":
        cfg.out_path = args.output
    return cfg


def _load_workbook(cfg: CliConfig) -> Workbook:
    if cfg.csv_dir is not None:
        return load_workbook_csv_dir(cfg.csv_dir)
    assert cfg.workbook_path is not None
    return load_workbook_json(cfg.workbook_path)


def _print_diagnostic(wb: Workbook, err: SheetCspError) -> None:
    d = diagnostic_from_error(wb, err)
    where = f" at {d.cell}" if d.cell else ""
    print(f"error {d.code}{where}: {d.message}", file=sys.stderr)


def _solution_dict(wb: Workbook, model: CompiledModel, solution: Solution) -> dict[str, int]:
    names = {format_cell_addr(wb, addr, wb.active): vid for addr, vid in model.var_ids.items()}
    return {name: solution[vid] for name, vid in names.items()}


def _render_table(wb: Workbook, model: CompiledModel, solution: Solution) -> str:
    """Bounding box of the variable cells on the active sheet.

    Variable cells show their solved value, constant cells their text;
    constraint and marker cells are left blank.
    """
    on_sheet = [a for a in model.var_ids if a.sheet == wb.active]
    if not on_sheet:
        return "(no variable cells on the active sheet)"
    lo_col = min(a.col for a in on_sheet)
    hi_col = max(a.col for a in on_sheet)
    lo_row = min(a.row for a in on_sheet)
    hi_row = max(a.row for a in on_sheet)
    skip = {(a.col, a.row) for a, _ in model.constraint_cells if a.sheet == wb.active}
    for marker in (model.var_marker, model.constraint_marker):
        if marker.location.sheet == wb.active:
            skip.add((marker.location.col, marker.location.row))
    by_pos = {(a.col, a.row): vid for a, vid in model.var_ids.items() if a.sheet == wb.active}
    sheet = wb.sheets[wb.active]

    def cell_text(col: int, row: int) -> str:
        if (col, row) in by_pos:
            return str(solution[by_pos[(col, row)]])
        if (col, row) in skip:
            return ""
        return sheet.cells.get((col, row), "")

    cols = range(lo_col, hi_col + 1)
    rows = range(lo_row, hi_row + 1)
    grid = [[cell_text(c, r) for c in cols] for r in rows]
    widths = [
        max(len(col_letters(c)), max(len(grid[ri][ci]) for ri in range(len(grid))))
        for ci, c in enumerate(cols)
    ]
    row_label = len(str(hi_row))
    lines = [" " * row_label + "  " + "  ".join(col_letters(c).rjust(w) for c, w in zip(cols, widths))]
    for ri, r in enumerate(rows):
        cells = "  ".join(grid[ri][ci].rjust(w) for ci, w in enumerate(widths))
        lines.append(f"{str(r).rjust(row_label)}  {cells}")
    return "\n".join(lines)


def _cmd_check(cfg: CliConfig) -> int:
    wb = _load_workbook(cfg)
    try:
        model = compile_workbook(wb)
    except SheetCspError as err:
        _print_diagnostic(wb, err)
        return EXIT_COMPILE_ERROR
    print(f"ok: {len(model.csp.vars)} variables, {len(model.csp.constraints)} constraints")
    return EXIT_OK


def _cmd_solve(cfg: CliConfig) -> int:
    wb = _load_workbook(cfg)
    try:
        model = compile_workbook(wb)
    except SheetCspError as err:
        _print_diagnostic(wb, err)
        return EXIT_COMPILE_ERROR
    if cfg.emit_path is not None:
        with open(cfg.emit_path, "w", encoding="utf-8") as fh:
            fh.write(emit_clp(wb))

    cap = 1 if cfg.solutions == "first" else cfg.max_solutions
    interrupted = threading.Event()
    config = SearchConfig(max_solutions=cap, should_cancel=interrupted.is_set)
    previous = signal.signal(signal.SIGINT, lambda *_: interrupted.set())
    try:
        if model.csp.objective is None:
            solutions = fdsolver.solve_all(model.csp, config)
            objective = None
        else:
            result = fdsolver.solve_optimal(model.csp, config)
            solutions = result.all_optimal
            objective = result.objective
    except SolveCancelled:
        print("interrupted", file=sys.stderr)
        return EXIT_INTERRUPTED
    finally:
        signal.signal(signal.SIGINT, previous)

    if not solutions:
        print("UNSAT: no solution satisfies the model", file=sys.stderr)
        return EXIT_UNSAT
    if cfg.output_format == "json":
        payload: dict = {
            "solutions": [_solution_dict(wb, model, s) for s in solutions],
            "count": len(solutions),
        }
        if objective is not None:
            payload["objective"] = objective
        print(json.dumps(payload, indent=2))
    else:
        for i, solution in enumerate(solutions, start=1):
            print(f"-- solution {i} of {len(solutions)} --")
            print(_render_table(wb, model, solution))
        if objective is not None:
            print(f"objective = {objective}")
    return EXIT_OK


def _cmd_emit(cfg: CliConfig) -> int:
    wb = _load_workbook(cfg)
    try:
        text = emit_clp(wb)
    except SheetCspError as err:
        _print_diagnostic(wb, err)
        return EXIT_COMPILE_ERROR
    if cfg.out_path is None:
        sys.stdout.write(text)
    else:
        with open(cfg.out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return EXIT_OK


def _cmd_serve(cfg: CliConfig) -> int:
    import uvicorn

    from .service import create_app

    wb: Optional[Workbook] = None
    if cfg.workbook_path is not None or cfg.csv_dir is not None:
        wb = _load_workbook(cfg)
    app = create_app(wb, frontend_dir=cfg.frontend_dir)
    uvicorn.run(app, host=cfg.host, port=cfg.port)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cfg = parse_cli(list(sys.argv[1:] if argv is None else argv))
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        handler = {
            "check": _cmd_check,
            "solve": _cmd_solve,
            "emit": _cmd_emit,
            "serve": _cmd_serve,
        }[cfg.command]
        return handler(cfg)
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except json.JSONDecodeError as err:
        print(f"error: invalid workbook JSON: {err}", file=sys.stderr)
        return EXIT_USAGE
    except SheetCspError as err:
        # malformed workbook shape or other pre-compile failures
        print(f"error {err.code}: {err.message}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
