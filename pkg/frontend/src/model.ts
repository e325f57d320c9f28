/**
 * UI state for the grid client, kept separate from the DOM so every
 * transition is a plain testable function. The grid text always mirrors
 * the last service response; the role overlay is computed from the grid
 * that was sent to a successful solve and dropped on any edit or
 * failure. Toolbar enablement is a pure function of the last /api/status
 * payload plus the client's single in-flight flag.
 */

import type { ApiError, StatusPayload, WorkbookJson } from "./api.js";
import { computeRoles, type CellRole } from "./sslang.js";

export interface UiSheet {
  name: string;
  cells: Map<string, string>; // key: A1 text, value: cell text
}

export interface UiGridModel {
  sheets: UiSheet[];
  active: number;
  dirty: boolean; // local edits not yet acknowledged by the service
  status: StatusPayload | null;
  roles: Map<string, CellRole> | null; // keyed "Sheet!A1"; null until a successful solve
  /** text of variable cells in the grid the last solve was run on (clue detection) */
  preSolveText: Map<string, string> | null;
  lastError: ApiError | null;
  busy: boolean; // one mutating request in flight
}

export function emptyModel(): UiGridModel {
  return {
    sheets: [{ name: "Sheet1", cells: new Map() }],
    active: 0,
    dirty: false,
    status: null,
    roles: null,
    preSolveText: null,
    lastError: null,
    busy: false,
  };
}

export function applyGrid(model: UiGridModel, grid: WorkbookJson): void {
  model.sheets = grid.sheets.map((sh) => ({
    name: sh.name,
    cells: new Map(Object.entries(sh.cells).map(([a1, text]) => [a1.toUpperCase(), text])),
  }));
  model.active = Math.min(Math.max(grid.active, 0), model.sheets.length - 1);
  model.dirty = false;
}

export function gridToJson(model: UiGridModel): WorkbookJson {
  return {
    sheets: model.sheets.map((sh) => ({
      name: sh.name,
      cells: Object.fromEntries([...sh.cells.entries()].filter(([, text]) => text !== "")),
    })),
    active: model.active,
  };
}

export function activeSheet(model: UiGridModel): UiSheet {
  return model.sheets[model.active];
}

export function cellText(model: UiGridModel, a1: string): string {
  return activeSheet(model).cells.get(a1.toUpperCase()) ?? "";
}

export function setCellText(model: UiGridModel, a1: string, text: string): void {
  const key = a1.toUpperCase();
  if (text === "") activeSheet(model).cells.delete(key);
  else activeSheet(model).cells.set(key, text);
  model.dirty = true;
}

/** Record the solve-time roles and variable text (for clue highlighting). */
export function captureSolveContext(model: UiGridModel): {
  roles: Map<string, CellRole>;
  preSolveText: Map<string, string>;
} {
  const grid = gridToJson(model);
  const roles = computeRoles(grid);
  const preSolveText = new Map<string, string>();
  for (const sheet of grid.sheets) {
    for (const [key, role] of roles) {
      if (role !== "variable") continue;
      const [sheetName, a1] = splitRoleKey(key);
      if (sheetName === sheet.name) {
        preSolveText.set(key, sheet.cells[a1] ?? "");
      }
    }
  }
  return { roles, preSolveText };
}

export function splitRoleKey(key: string): [string, string] {
  const bang = key.lastIndexOf("!");
  return [key.slice(0, bang), key.slice(bang + 1)];
}

export function clearSolveOverlay(model: UiGridModel): void {
  model.roles = null;
  model.preSolveText = null;
}

// --- render-facing views -------------------------------------------------------

export interface GridExtent {
  cols: number;
  rows: number;
}

const MIN_COLS = 10;
const MIN_ROWS = 20;
const PAD = 2;
const CAP_COLS = 64;
const CAP_ROWS = 200;

export function gridExtent(model: UiGridModel): GridExtent {
  let maxCol = 0;
  let maxRow = 0;
  for (const a1 of activeSheet(model).cells.keys()) {
    const m = /^([A-Z]{1,2})([0-9]+)$/.exec(a1);
    if (!m) continue;
    let col = 0;
    for (const ch of m[1]) col = col * 26 + (ch.charCodeAt(0) - 64);
    maxCol = Math.max(maxCol, col);
    maxRow = Math.max(maxRow, parseInt(m[2], 10));
  }
  return {
    cols: Math.min(Math.max(maxCol + PAD, MIN_COLS), CAP_COLS),
    rows: Math.min(Math.max(maxRow + PAD, MIN_ROWS), CAP_ROWS),
  };
}

export interface ToolbarState {
  parseBuild: boolean;
  next: boolean;
  previous: boolean;
  original: boolean;
  openFile: boolean;
  counter: string;
  cursorLabel: string; // e.g. "2 / 92", "" before a solve
  objective: number | null;
}

/**
 * Enablement comes only from the /api/status payload and the single
 * in-flight flag: next/previous exactly when the session reports them
 * available, everything off while a request or a solve is running.
 */
export function toolbarState(status: StatusPayload | null, busy: boolean): ToolbarState {
  if (status === null) {
    return {
      parseBuild: false,
      next: false,
      previous: false,
      original: false,
      openFile: !busy,
      counter: "[ ]",
      cursorLabel: "",
      objective: null,
    };
  }
  const blocked = busy || status.solving;
  return {
    parseBuild: !blocked,
    next: !blocked && status.nextAvailable,
    previous: !blocked && status.prevAvailable,
    original: !blocked,
    openFile: !blocked,
    counter: status.solutionCount > 0 ? `[${status.solutionCount}]` : "[ ]",
    cursorLabel:
      status.solutionCount > 0 && status.cursor > 0
        ? `${status.cursor} / ${status.solutionCount}${status.view === "original" ? " (original shown)" : ""}`
        : "",
    objective: status.objective,
  };
}
