/**
 * Client-side mirror of the cell constraint language, used for the
 * function helper palette and for pre-checking edits before they are
 * sent. The service stays authoritative: everything here is advisory
 * and deliberately shallow (names, arity, argument shapes, A1 ranges),
 * never semantics.
 *
 * Cell text forms:
 *   - domain literals: "200", "1..3", "[1,2,3,5,6]"
 *   - ss* function calls: "ssDomain(A1:H8,0,1)", "nthElement(B11,B3:F3,C11)"
 *   - marker declarations: "ssVarRanges(A1:H8)", "ssConstraintRanges(A12:A16)"
 *   - arithmetic relations: "A1 + 2 #=< B1"
 *   - anything else is a plain constant
 */

export type CellRole = "variable" | "constraint" | "marker" | "constant";

export type SlotKind =
  | "range" // single cell, rectangle, or bracketed enumeration
  | "rect" // rectangle written with ":"
  | "cell" // one A1 address
  | "int"
  | "op" // + - *
  | "rel" // #= #\= #< #> #=< #>=
  | "result" // integer, list of integers, cell, range, or list of refs
  | "index" // integer or cell address
  | "rangeList"; // comma list of cells/rectangles (marker arguments)

export interface Slot {
  name: string;
  kind: SlotKind;
  hint: string;
}

export interface FunctionSpec {
  name: string; // canonical display spelling
  marker: boolean;
  slots: Slot[];
  summary: string;
}

export const REL_OPS = ["#=<", "#>=", "#\\=", "#=", "#<", "#>"] as const;
export const ARITH_OPS = ["+", "-", "*"] as const;

const MAX_COLS = 256;
const MAX_ROWS = 65536;

const slot = (name: string, kind: SlotKind, hint: string): Slot => ({ name, kind, hint });

export const FUNCTIONS: FunctionSpec[] = [
  {
    name: "ssVarRanges",
    marker: true,
    slots: [slot("ranges", "rangeList", "cells/rectangles holding the variables, e.g. A1:H8")],
    summary: "declare which cells are decision variables",
  },
  {
    name: "ssConstraintRanges",
    marker: true,
    slots: [slot("ranges", "rangeList", "cells/rectangles holding the constraints, e.g. A12:A16")],
    summary: "declare which cells hold constraints",
  },
  {
    name: "ssDomain",
    marker: false,
    slots: [
      slot("range", "range", "cells to constrain, e.g. A1:H8"),
      slot("lo", "int", "smallest allowed value"),
      slot("hi", "int", "largest allowed value"),
    ],
    summary: "every cell in the range takes a value in lo..hi",
  },
  {
    name: "ssAllDifferent",
    marker: false,
    slots: [slot("range", "range", "cells that must differ pairwise")],
    summary: "all cells in the range take distinct values",
  },
  {
    name: "ssRowsAllDifferent",
    marker: false,
    slots: [slot("matrix", "rect", "rectangle; each row becomes one group")],
    summary: "each row of the rectangle is all-different",
  },
  {
    name: "ssColsAllDifferent",
    marker: false,
    slots: [slot("matrix", "rect", "rectangle; each column becomes one group")],
    summary: "each column of the rectangle is all-different",
  },
  {
    name: "ssColsAggregate",
    marker: false,
    slots: [
      slot("op", "op", "+, - or *"),
      slot("matrix", "rect", "rectangle; one fold per column"),
      slot("rel", "rel", "#=, #\\=, #<, #>, #=< or #>="),
      slot("result", "result", "integer, [list], cell or range"),
    ],
    summary: "fold each column with op and relate it to the result list",
  },
  {
    name: "ssRowsAggregate",
    marker: false,
    slots: [
      slot("op", "op", "+, - or *"),
      slot("matrix", "rect", "rectangle; one fold per row"),
      slot("rel", "rel", "#=, #\\=, #<, #>, #=< or #>="),
      slot("result", "result", "integer, [list], cell or range"),
    ],
    summary: "fold each row with op and relate it to the result list",
  },
  {
    name: "ssDiagonalAggregate",
    marker: false,
    slots: [
      slot("op", "op", "+, - or *"),
      slot("matrix", "rect", "rectangle; one fold per diagonal"),
      slot("rel", "rel", "#=, #\\=, #<, #>, #=< or #>="),
      slot("result", "result", "integer, [list], cell or range"),
    ],
    summary: "fold each top-left-to-bottom-right diagonal and relate it",
  },
  {
    name: "ssBackDiagonalAggregate",
    marker: false,
    slots: [
      slot("op", "op", "+, - or *"),
      slot("matrix", "rect", "rectangle; one fold per back-diagonal"),
      slot("rel", "rel", "#=, #\\=, #<, #>, #=< or #>="),
      slot("result", "result", "integer, [list], cell or range"),
    ],
    summary: "fold each top-right-to-bottom-left diagonal and relate it",
  },
  {
    name: "ssPairCellsAggregate",
    marker: false,
    slots: [
      slot("first", "rect", "first rectangle"),
      slot("op", "op", "+, - or *"),
      slot("second", "rect", "second rectangle, same shape"),
      slot("rel", "rel", "#=, #\\=, #<, #>, #=< or #>="),
      slot("result", "result", "integer, [list], cell or range"),
    ],
    summary: "combine the rectangles cell by cell and relate each pair",
  },
  {
    name: "nthElement",
    marker: false,
    slots: [
      slot("index", "index", "1-based position: integer or cell"),
      slot("table", "range", "cells forming the lookup list"),
      slot("value", "cell", "cell that receives the looked-up entry"),
    ],
    summary: "value equals the index-th entry of the table",
  },
  {
    name: "ssMin",
    marker: false,
    slots: [slot("cell", "cell", "objective cell to minimize")],
    summary: "minimize the value of one cell",
  },
  {
    name: "ssMax",
    marker: false,
    slots: [slot("cell", "cell", "objective cell to maximize")],
    summary: "maximize the value of one cell",
  },
];

const FUNCTIONS_BY_LOWER = new Map(FUNCTIONS.map((f) => [f.name.toLowerCase(), f]));

export function lookupFunction(name: string): FunctionSpec | undefined {
  return FUNCTIONS_BY_LOWER.get(name.toLowerCase());
}

// --- A1 addresses and ranges -----------------------------------------------

export interface Addr {
  sheet: string | null; // null = the sheet the text lives on
  col: number; // 1-based
  row: number; // 1-based
}

export interface RangeItem {
  kind: "single" | "rect";
  sheet: string | null;
  c1: number;
  r1: number;
  c2: number;
  r2: number;
}

const A1_RE = /^([A-Za-z]{1,2})([0-9]{1,6})$/;
const IDENT_RE = /^[A-Za-z_][A-Za-z0-9_]*$/;

export function colNumber(letters: string): number {
  let col = 0;
  for (const ch of letters.toUpperCase()) col = col * 26 + (ch.charCodeAt(0) - 64);
  return col;
}

export function colLetters(col: number): string {
  let out = "";
  while (col > 0) {
    const rem = (col - 1) % 26;
    out = String.fromCharCode(65 + rem) + out;
    col = (col - 1 - rem) / 26;
  }
  return out;
}

export function formatA1(col: number, row: number): string {
  return `${colLetters(col)}${row}`;
}

export function parseAddrText(text: string): Addr | null {
  let body = text.trim();
  let sheet: string | null = null;
  const bang = body.indexOf("!");
  if (bang >= 0) {
    sheet = body.slice(0, bang).trim();
    body = body.slice(bang + 1).trim();
    if (!IDENT_RE.test(sheet)) return null;
  }
  const m = A1_RE.exec(body);
  if (!m) return null;
  const col = colNumber(m[1]);
  const row = parseInt(m[2], 10);
  if (col < 1 || col > MAX_COLS || row < 1 || row > MAX_ROWS) return null;
  return { sheet, col, row };
}

export function parseRangeItemText(text: string): RangeItem | null {
  const parts = text.split(":");
  if (parts.length > 2) return null;
  const a = parseAddrText(parts[0]);
  if (!a) return null;
  if (parts.length === 1) {
    return { kind: "single", sheet: a.sheet, c1: a.col, r1: a.row, c2: a.col, r2: a.row };
  }
  const b = parseAddrText(parts[1]);
  if (!b) return null;
  if (b.sheet !== null && b.sheet !== a.sheet && a.sheet !== null) return null;
  return {
    kind: "rect",
    sheet: a.sheet ?? b.sheet,
    c1: Math.min(a.col, b.col),
    r1: Math.min(a.row, b.row),
    c2: Math.max(a.col, b.col),
    r2: Math.max(a.row, b.row),
  };
}

/** Split on commas that sit outside [ ] and ( ). */
export function splitTopLevel(text: string): string[] {
  const parts: string[] = [];
  let depth = 0;
  let start = 0;
  for (let i = 0; i < text.length; i++) {
    const ch = text[i];
    if (ch === "[" || ch === "(") depth++;
    else if (ch === "]" || ch === ")") depth--;
    else if (ch === "," && depth === 0) {
      parts.push(text.slice(start, i));
      start = i + 1;
    }
  }
  parts.push(text.slice(start));
  return parts.map((p) => p.trim());
}

/** Parse "A1", "A1:B3", or "[A1, B2:C4, ...]". */
export function parseRangeSpecText(text: string): RangeItem[] | null {
  const body = text.trim();
  if (body.startsWith("[") && body.endsWith("]")) {
    const inner = body.slice(1, -1).trim();
    if (!inner) return null;
    const items: RangeItem[] = [];
    for (const part of splitTopLevel(inner)) {
      const item = parseRangeItemText(part);
      if (!item) return null;
      items.push(item);
    }
    return items;
  }
  const item = parseRangeItemText(body);
  return item ? [item] : null;
}

/** All addresses covered by a range item, row-major, on a concrete sheet. */
export function expandItem(item: RangeItem, defaultSheet: string): { sheet: string; col: number; row: number }[] {
  const sheet = item.sheet ?? defaultSheet;
  const out: { sheet: string; col: number; row: number }[] = [];
  for (let row = item.r1; row <= item.r2; row++) {
    for (let col = item.c1; col <= item.c2; col++) out.push({ sheet, col, row });
  }
  return out;
}

// --- cell text forms ---------------------------------------------------------

/** Strip the formula prefixes a spreadsheet front end prepends ('=', '@'). */
export function cleanCellText(text: string): string {
  let t = text.trim();
  while (t && (t[0] === "=" || t[0] === "@")) t = t.slice(1).trimStart();
  return t;
}

const INT_RE = /^-?[0-9]+$/;

export function isDomainLiteralText(text: string): boolean {
  const t = cleanCellText(text);
  if (INT_RE.test(t)) return true;
  const ivl = /^(-?[0-9]+)\s*\.\.\s*(-?[0-9]+)$/.exec(t);
  if (ivl) return parseInt(ivl[1], 10) <= parseInt(ivl[2], 10);
  if (t.startsWith("[") && t.endsWith("]")) {
    const parts = splitTopLevel(t.slice(1, -1).trim());
    const values: number[] = [];
    for (const p of parts) {
      if (!INT_RE.test(p)) return false;
      values.push(parseInt(p, 10));
    }
    return values.length > 0 && new Set(values).size === values.length;
  }
  return false;
}

interface ParsedCall {
  name: string;
  args: string[];
}

/** Match "name( ... )" with balanced parens and nothing trailing. */
export function parseCallText(text: string): ParsedCall | null {
  const t = cleanCellText(text);
  const head = /^([A-Za-z_][A-Za-z0-9_]*)\s*\(/.exec(t);
  if (!head) return null;
  if (!t.endsWith(")")) return null;
  let depth = 0;
  for (let i = head[0].length - 1; i < t.length; i++) {
    const ch = t[i];
    if (ch === "(") depth++;
    else if (ch === ")") {
      depth--;
      if (depth === 0 && i !== t.length - 1) return null; // trailing text
      if (depth < 0) return null;
    }
  }
  if (depth !== 0) return null;
  const inner = t.slice(head[0].length, -1).trim();
  return { name: head[1], args: inner === "" ? [] : splitTopLevel(inner) };
}

function checkSlotValue(kind: SlotKind, value: string): string | null {
  const v = value.trim();
  if (v === "") return "is empty";
  switch (kind) {
    case "int":
      return INT_RE.test(v) ? null : `should be an integer, got "${v}"`;
    case "op":
      return (ARITH_OPS as readonly string[]).includes(v) ? null : `should be one of + - *, got "${v}"`;
    case "rel":
      return (REL_OPS as readonly string[]).includes(v)
        ? null
        : `should be one of ${REL_OPS.join(" ")}, got "${v}"`;
    case "cell":
      return parseAddrText(v) ? null : `should be a cell address, got "${v}"`;
    case "rect": {
      const item = parseRangeItemText(v);
      if (!item) return `should be a rectangle like A1:B3, got "${v}"`;
      return item.kind === "rect" ? null : `should be a rectangle written with ":", got "${v}"`;
    }
    case "range":
      return parseRangeSpecText(v) ? null : `should be a cell, rectangle or [list], got "${v}"`;
    case "index":
      return INT_RE.test(v) || parseAddrText(v)
        ? null
        : `should be an integer or a cell address, got "${v}"`;
    case "result": {
      if (INT_RE.test(v)) return null;
      if (parseRangeSpecText(v)) return null;
      if (v.startsWith("[") && v.endsWith("]")) {
        const parts = splitTopLevel(v.slice(1, -1).trim());
        if (parts.every((p) => INT_RE.test(p))) return null;
        if (parts.every((p) => parseRangeItemText(p) !== null)) return null;
        return `list mixes integers and cell references: "${v}"`;
      }
      return `should be an integer, [list], cell or range, got "${v}"`;
    }
    case "rangeList": {
      for (const part of splitTopLevel(v)) {
        if (!parseRangeItemText(part)) return `has a bad range item "${part}"`;
      }
      return null;
    }
  }
}

export function describeSlots(fn: FunctionSpec): string {
  return `(${fn.slots.map((s) => s.name).join(",")})`;
}

/**
 * Arity + shallow shape check of a call against the function table.
 * Returns null when the text passes; marker range lists count as one
 * variadic slot (any number of comma-separated range items).
 */
export function checkCallArgs(fn: FunctionSpec, args: string[]): string | null {
  if (fn.marker) {
    if (args.length === 0) return `${fn.name} needs at least one range`;
    return checkSlotValue("rangeList", args.join(","));
  }
  if (args.length !== fn.slots.length) {
    return `${fn.name} expects ${fn.slots.length} argument${fn.slots.length === 1 ? "" : "s"} ${describeSlots(fn)}; got ${args.length}`;
  }
  for (let i = 0; i < fn.slots.length; i++) {
    const err = checkSlotValue(fn.slots[i].kind, args[i]);
    if (err) return `${fn.name} argument ${i + 1} (${fn.slots[i].name}) ${err}`;
  }
  return null;
}

export function buildCallText(fnName: string, args: string[]): string {
  const fn = lookupFunction(fnName);
  const display = fn ? fn.name : fnName;
  return `${display}(${args.map((a) => a.trim()).join(",")})`;
}

export interface CellClassification {
  kind: "empty" | "marker" | "call" | "relation" | "domain" | "constant";
  error: string | null;
}

function findTopLevelRelOp(text: string): { op: string; at: number } | null {
  let depth = 0;
  for (let i = 0; i < text.length; i++) {
    const ch = text[i];
    if (ch === "[" || ch === "(") depth++;
    else if (ch === "]" || ch === ")") depth--;
    else if (ch === "#" && depth === 0) {
      for (const op of REL_OPS) {
        if (text.startsWith(op, i)) return { op, at: i };
      }
    }
  }
  return null;
}

/**
 * Advisory classification of one cell's text, mirroring how the
 * compiler reads cells: markers and ss* calls are checked for name,
 * arity and argument shape; relations shallowly; all remaining text is
 * a legal constant.
 */
export function classifyCellText(text: string): CellClassification {
  const t = cleanCellText(text);
  if (t === "") return { kind: "empty", error: null };
  const call = parseCallText(t);
  if (call) {
    const fn = lookupFunction(call.name);
    if (fn) {
      return {
        kind: fn.marker ? "marker" : "call",
        error: checkCallArgs(fn, call.args),
      };
    }
    if (call.name.toLowerCase().startsWith("ss")) {
      return { kind: "call", error: `unknown function ${call.name}` };
    }
  }
  const rel = findTopLevelRelOp(t);
  if (rel) {
    const lhs = t.slice(0, rel.at).trim();
    const rhs = t.slice(rel.at + rel.op.length).trim();
    if (!lhs || !rhs) {
      return { kind: "relation", error: `relation is missing a side around ${rel.op}` };
    }
    return { kind: "relation", error: null };
  }
  if (isDomainLiteralText(t)) return { kind: "domain", error: null };
  return { kind: "constant", error: null };
}

// --- cell roles ---------------------------------------------------------------

export interface WorkbookCells {
  sheets: { name: string; cells: Record<string, string> }[];
}

export function roleKey(sheet: string, col: number, row: number): string {
  return `${sheet}!${formatA1(col, row)}`;
}

/**
 * Derive the per-cell role overlay from grid text: marker cells declare
 * themselves, their expanded var/constraint ranges mark (possibly
 * empty) cells, and every other non-empty cell is a constant. Malformed
 * markers are skipped; the overlay is advisory display state.
 */
export function computeRoles(grid: WorkbookCells): Map<string, CellRole> {
  const roles = new Map<string, CellRole>();
  const mark = (key: string, role: CellRole) => {
    const prior = roles.get(key);
    const rankOf = (r: CellRole) => ({ marker: 3, variable: 2, constraint: 1, constant: 0 })[r];
    if (prior === undefined || rankOf(role) > rankOf(prior)) roles.set(key, role);
  };

  for (const sheet of grid.sheets) {
    for (const [a1, raw] of Object.entries(sheet.cells)) {
      const call = parseCallText(raw);
      if (!call) continue;
      const fn = lookupFunction(call.name);
      if (!fn || !fn.marker) continue;
      const addr = parseAddrText(a1);
      if (!addr) continue;
      mark(roleKey(sheet.name, addr.col, addr.row), "marker");
      const role: CellRole = fn.name === "ssVarRanges" ? "variable" : "constraint";
      for (const argText of call.args) {
        const item = parseRangeItemText(argText);
        if (!item) continue;
        for (const pos of expandItem(item, sheet.name)) {
          mark(roleKey(pos.sheet, pos.col, pos.row), role);
        }
      }
    }
  }
  for (const sheet of grid.sheets) {
    for (const [a1, raw] of Object.entries(sheet.cells)) {
      if (cleanCellText(raw) === "") continue;
      const addr = parseAddrText(a1);
      if (!addr) continue;
      mark(roleKey(sheet.name, addr.col, addr.row), "constant");
    }
  }
  return roles;
}
