"""HTTP facade over a single in-memory session.

Endpoints (JSON unless noted):

  GET  /api/workbook   current grid
  PUT  /api/workbook   replace the grid, reset the session
  POST /api/solve      parse, build, solve; first solution displayed
  POST /api/next       cursor forward (clamped)
  POST /api/prev       cursor back (clamped)
  POST /api/reset      restore the original grid; cancels a running solve
  GET  /api/clp        emitted program text (text/plain)
  GET  /api/status     view, cursor, counts, availability flags

State transitions answer 200 (clamped no-ops included); model and
validation failures answer 422 with {"error": {code, message, cell}};
a second solve while one runs answers 409. All session access is
serialized on one lock.
"""

from __future__ import annotations

import threading
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.responses import FileResponse, JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles

from .compiler import diagnostic_from_error
from .errors import NoSolutions, SheetCspError, SolveCancelled
from .fdsolver import SearchConfig
from .grid import Workbook, workbook_from_json, workbook_to_json
from .session import Session


def _error_response(status: int, code: str, message: str, cell: Optional[str] = None) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"error": {"code": code, "message": message, "cell": cell}},
    )


def _state_payload(session: Session) -> dict:
    status = session.status()
    return {
        "solutionCount": status.solution_count,
        "cursor": status.cursor,
        "view": status.view,
        "objective": status.objective,
        "grid": workbook_to_json(session.workbook),
    }


def create_app(
    workbook: Workbook | None = None,
    config: SearchConfig | None = None,
    frontend_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="sheetcsp", docs_url=None, redoc_url=None)
    lock = threading.Lock()
    cancel = threading.Event()
    session = Session(workbook or Workbook(), config or SearchConfig())
    session.config.should_cancel = cancel.is_set
    app.state.session = session

    @app.get("/api/workbook")
    def get_workbook() -> JSONResponse:
        with lock:
            return JSONResponse(workbook_to_json(session.workbook))

    @app.put("/api/workbook")
    async def put_workbook(request: Request):
        try:
            data = await request.json()
        except Exception:
            return _error_response(422, "BAD_JSON", "request body is not valid JSON")
        try:
            wb = workbook_from_json(data)
        except SheetCspError as err:
            return _error_response(422, err.code, err.message)
        with lock:
            session.load_workbook(wb)
            return JSONResponse(_state_payload(session))

    @app.post("/api/solve")
    def solve():
        if not lock.acquire(blocking=False):
            return _error_response(409, "SOLVE_IN_PROGRESS", "a solve is already running")
        try:
            session.solving = True
            cancel.clear()
            try:
                session.parse_build()
            except SolveCancelled:
                session.solutions = []
                session.cursor = 0
                return _error_response(422, "CANCELLED", "solve was cancelled")
            except SheetCspError as err:
                return _error_response(422, err.code, err.message)
            if session.diagnostics:
                d = session.diagnostics[0]
                return _error_response(422, d.code, d.message, d.cell)
            if not session.solutions:
                return _error_response(422, "UNSAT", "no solution satisfies the model")
            return JSONResponse(_state_payload(session))
        finally:
            session.solving = False
            lock.release()

    def _navigate(step) -> JSONResponse:
        with lock:
            try:
                step()
            except NoSolutions as err:
                return _error_response(422, err.code, err.message)
            return JSONResponse(_state_payload(session))

    @app.post("/api/next")
    def next_solution():
        return _navigate(session.next_solution)

    @app.post("/api/prev")
    def previous_solution():
        return _navigate(session.previous_solution)

    @app.post("/api/reset")
    def reset():
        if session.solving:
            cancel.set()
        with lock:
            cancel.clear()
            session.original_state()
            return JSONResponse(_state_payload(session))

    @app.get("/api/clp")
    def clp():
        with lock:
            try:
                return PlainTextResponse(session.clp_text())
            except SheetCspError as err:
                d = diagnostic_from_error(session.workbook, err)
                return _error_response(422, d.code, d.message, d.cell)

    @app.get("/api/status")
    def status():
        return JSONResponse(session.status().to_json())

    if frontend_dir is not None and Path(frontend_dir).is_dir():
        root = Path(frontend_dir)

        @app.get("/")
        def index() -> FileResponse:
            return FileResponse(root / "index.html")

        app.mount("/", StaticFiles(directory=root), name="frontend")

    return app
