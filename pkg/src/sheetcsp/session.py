"""Interactive solving session over one workbook.

parse_build snapshots the grid, compiles, solves eagerly (capped), and
displays the first solution by overwriting variable cells. Navigation
moves a 1-based cursor through the stored solutions; the original grid
can always be brought back without losing the cursor.

Invariant maintained throughout: the displayed grid equals the snapshot
with exactly the variable cells of solutions[cursor] overlaid.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from . import fdsolver
from .compiler import CompiledModel, Diagnostic, compile_workbook, diagnostic_from_error, emit_clp
from .errors import NoSolutions, SheetCspError
from .fdsolver import SearchConfig, Solution
from .grid import GridSnapshot, Sheet, Workbook, restore, snapshot


class View(Enum):
    ORIGINAL = "original"
    SHOWING_SOLUTION = "showingSolution"


@dataclass
class SessionStatus:
    view: str
    cursor: int
    solution_count: int
    solving: bool
    next_available: bool
    prev_available: bool
    objective: Optional[int] = None

    def to_json(self) -> dict:
        return {
            "view": self.view,
            "cursor": self.cursor,
            "solutionCount": self.solution_count,
            "solving": self.solving,
            "nextAvailable": self.next_available,
            "prevAvailable": self.prev_available,
            "objective": self.objective,
        }


class Session:
    def __init__(self, workbook: Workbook, config: SearchConfig | None = None):
        self.workbook = workbook
        self.config = config or SearchConfig()
        self.original: Optional[GridSnapshot] = None
        self.model: Optional[CompiledModel] = None
        self.solutions: list[Solution] = []
        self.cursor = 0  # 1-based; 0 before the first solve
        self.view = View.ORIGINAL
        self.diagnostics: list[Diagnostic] = []
        self.objective_value: Optional[int] = None
        self.solving = False

    # -- operations -------------------------------------------------------

    def load_workbook(self, workbook: Workbook) -> None:
        """Replace the grid and drop all solve state."""
        self.__init__(workbook, self.config)

    def parse_build(self) -> SessionStatus:
        """Snapshot, compile, solve, and show the first solution if any.

        Compile problems land in self.diagnostics and leave the grid as
        it was. Solve interruptions (cancellation, node limit) escape to
        the caller after the state is reset.
        """
        self.original = snapshot(self.workbook)
        self.model = None
        self.solutions = []
        self.cursor = 0
        self.view = View.ORIGINAL
        self.diagnostics = []
        self.objective_value = None
        try:
            model = compile_workbook(self.workbook)
        except SheetCspError as err:
            self.diagnostics = [diagnostic_from_error(self.workbook, err)]
            return self.status()
        self.model = model
        if model.csp.objective is None:
            self.solutions = fdsolver.solve_all(model.csp, self.config)
        else:
            result = fdsolver.solve_optimal(model.csp, self.config)
            self.solutions = result.all_optimal
            self.objective_value = result.objective
        if self.solutions:
            self.cursor = 1
            self.write_solution_to_grid(1)
        return self.status()

    def next_solution(self) -> SessionStatus:
        """Advance the cursor; from the original view, redisplay in place."""
        self._require_solutions()
        if self.view is View.ORIGINAL:
            self.write_solution_to_grid(self.cursor)
        elif self.cursor < len(self.solutions):
            self.cursor += 1
            self.write_solution_to_grid(self.cursor)
        return self.status()

    def previous_solution(self) -> SessionStatus:
        self._require_solutions()
        if self.view is View.ORIGINAL:
            self.write_solution_to_grid(self.cursor)
        elif self.cursor > 1:
            self.cursor -= 1
            self.write_solution_to_grid(self.cursor)
        return self.status()

    def original_state(self) -> SessionStatus:
        """Restore the snapshot; the cursor and solutions stay put."""
        if self.original is not None:
            restore(self.workbook, self.original)
            self.view = View.ORIGINAL
        return self.status()

    def write_solution_to_grid(self, k: int) -> None:
        """Overlay solution k (1-based) on the snapshot: grid = original + values."""
        if not 1 <= k <= len(self.solutions):
            raise NoSolutions(f"no solution {k}; have {len(self.solutions)}")
        assert self.original is not None and self.model is not None
        restore(self.workbook, self.original)
        sol = self.solutions[k - 1]
        for vid, info in enumerate(self.model.csp.vars):
            self.workbook.set(info.addr, str(sol[vid]))
        self.view = View.SHOWING_SOLUTION

    def clp_text(self) -> str:
        """Program text for the model, taken from the snapshot when one
        exists so a displayed solution does not pin the variables."""
        if self.original is not None:
            wb = Workbook(
                [Sheet(sh.name, dict(self.original[sh.name])) for sh in self.workbook.sheets],
                self.workbook.active,
            )
            return emit_clp(wb)
        return emit_clp(self.workbook)

    # -- introspection -----------------------------------------------------

    def status(self) -> SessionStatus:
        count = len(self.solutions)
        showing = self.view is View.SHOWING_SOLUTION
        return SessionStatus(
            view=self.view.value,
            cursor=self.cursor,
            solution_count=count,
            solving=self.solving,
            next_available=count > 0 and (not showing or self.cursor < count),
            prev_available=count > 0 and (not showing or self.cursor > 1),
            objective=self.objective_value,
        )

    def _require_solutions(self) -> None:
        if not self.solutions:
            raise NoSolutions("no stored solutions; run a successful solve first")
