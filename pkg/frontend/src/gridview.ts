/**
 * Spreadsheet grid: renders the active sheet as a table, owns
 * selection (click, shift-click, drag, arrow keys) and the in-cell
 * editor. Selection is exported as an A1 or A1:B3 string so function
 * argument slots can be filled by pointing at the grid. Cell roles
 * from the last solve are painted as classes; variable cells showing
 * freshly solved values are highlighted, clue cells (variables that
 * already had text before the solve) are tinted differently.
 */

import { colLetters, formatA1, type CellRole } from "./sslang.js";

export interface GridRenderState {
  sheetNames: string[];
  active: number;
  cells: ReadonlyMap<string, string>;
  roles: ReadonlyMap<string, CellRole> | null;
  preSolveText: ReadonlyMap<string, string> | null;
  view: "original" | "showingSolution" | null;
  extent: { cols: number; rows: number };
}

export interface GridHandlers {
  onCommit(a1: string, text: string): void;
  onSelectionChange?(ref: string): void;
  onSheetChange?(index: number): void;
}

interface Pos {
  col: number;
  row: number;
}

export class GridView {
  private table: HTMLTableElement | null = null;
  private tabsEl: HTMLElement | null = null;
  private anchor: Pos = { col: 1, row: 1 };
  private focus: Pos = { col: 1, row: 1 };
  private dragging = false;
  private editor: { a1: string; input: HTMLInputElement } | null = null;
  private errorCell: string | null = null;
  private state: GridRenderState | null = null;

  constructor(private readonly handlers: GridHandlers) {}

  mount(container: HTMLElement): void {
    const wrap = document.createElement("div");
    wrap.className = "grid-wrap";

    const tabs = document.createElement("div");
    tabs.className = "sheet-tabs";
    wrap.appendChild(tabs);
    this.tabsEl = tabs;

    const scroller = document.createElement("div");
    scroller.className = "grid-scroller";
    const table = document.createElement("table");
    table.className = "grid";
    table.tabIndex = 0;
    scroller.appendChild(table);
    wrap.appendChild(scroller);
    container.appendChild(wrap);
    this.table = table;

    table.addEventListener("mousedown", (ev) => {
      const pos = this.posOf(ev.target);
      if (!pos) return;
      ev.preventDefault();
      this.commitEditor();
      if (ev.shiftKey) {
        this.focus = pos;
      } else {
        this.anchor = pos;
        this.focus = pos;
        this.dragging = true;
      }
      this.applySelection();
      table.focus();
    });
    table.addEventListener("mouseover", (ev) => {
      if (!this.dragging) return;
      const pos = this.posOf(ev.target);
      if (!pos) return;
      this.focus = pos;
      this.applySelection();
    });
    document.addEventListener("mouseup", () => {
      this.dragging = false;
    });
    table.addEventListener("dblclick", (ev) => {
      const pos = this.posOf(ev.target);
      if (pos) this.openEditor(pos);
    });
    table.addEventListener("keydown", (ev) => this.onKey(ev));
  }

  render(state: GridRenderState): void {
    if (!this.table || !this.tabsEl) return;
    this.cancelEditor();
    this.state = state;

    this.tabsEl.replaceChildren();
    if (state.sheetNames.length > 1) {
      state.sheetNames.forEach((name, idx) => {
        const tab = document.createElement("button");
        tab.type = "button";
        tab.className = "sheet-tab" + (idx === state.active ? " active" : "");
        tab.textContent = name;
        tab.addEventListener("click", () => this.handlers.onSheetChange?.(idx));
        this.tabsEl!.appendChild(tab);
      });
    }

    const { cols, rows } = state.extent;
    this.anchor = this.clamp(this.anchor, cols, rows);
    this.focus = this.clamp(this.focus, cols, rows);

    const sheetName = state.sheetNames[state.active];
    const head = document.createElement("tr");
    head.appendChild(document.createElement("th"));
    for (let c = 1; c <= cols; c++) {
      const th = document.createElement("th");
      th.textContent = colLetters(c);
      head.appendChild(th);
    }
    const frag = document.createDocumentFragment();
    frag.appendChild(head);
    for (let r = 1; r <= rows; r++) {
      const tr = document.createElement("tr");
      const th = document.createElement("th");
      th.textContent = String(r);
      tr.appendChild(th);
      for (let c = 1; c <= cols; c++) {
        const a1 = formatA1(c, r);
        const td = document.createElement("td");
        td.dataset.addr = a1;
        const text = state.cells.get(a1) ?? "";
        td.textContent = text;
        const role = state.roles?.get(`${sheetName}!${a1}`);
        if (role) {
          td.classList.add(`cell-${role}`);
          if (role === "variable") {
            const pre = state.preSolveText?.get(`${sheetName}!${a1}`) ?? "";
            if (pre !== "") td.classList.add("cell-clue");
            else if (state.view === "showingSolution" && text !== "") {
              td.classList.add("cell-solved");
            }
          }
        }
        tr.appendChild(td);
      }
      frag.appendChild(tr);
    }
    this.table.replaceChildren(frag);
    this.applySelection();
    this.applyErrorCell();
  }

  /** Current selection as "A1" or, for more than one cell, "A1:B3". */
  getSelectionRef(): string {
    const c1 = Math.min(this.anchor.col, this.focus.col);
    const c2 = Math.max(this.anchor.col, this.focus.col);
    const r1 = Math.min(this.anchor.row, this.focus.row);
    const r2 = Math.max(this.anchor.row, this.focus.row);
    if (c1 === c2 && r1 === r2) return formatA1(c1, r1);
    return `${formatA1(c1, r1)}:${formatA1(c2, r2)}`;
  }

  setErrorCell(a1: string | null): void {
    this.errorCell = a1 ? a1.toUpperCase() : null;
    this.applyErrorCell();
  }

  focusCell(a1: string): void {
    const m = /^([A-Z]{1,2})([0-9]+)$/.exec(a1.toUpperCase());
    if (!m) return;
    let col = 0;
    for (const ch of m[1]) col = col * 26 + (ch.charCodeAt(0) - 64);
    this.anchor = this.focus = { col, row: parseInt(m[2], 10) };
    this.applySelection();
    this.table?.focus();
  }

  /** Write text into the focused cell as if typed there. */
  insertIntoFocusedCell(text: string): void {
    this.cancelEditor();
    this.handlers.onCommit(formatA1(this.focus.col, this.focus.row), text);
  }

  // --- internals ------------------------------------------------------------

  private clamp(pos: Pos, cols: number, rows: number): Pos {
    return {
      col: Math.min(Math.max(pos.col, 1), cols),
      row: Math.min(Math.max(pos.row, 1), rows),
    };
  }

  private posOf(target: EventTarget | null): Pos | null {
    if (!(target instanceof Element)) return null;
    const td = target.closest("td[data-addr]");
    if (!(td instanceof HTMLTableCellElement) || !td.dataset.addr) return null;
    const m = /^([A-Z]{1,2})([0-9]+)$/.exec(td.dataset.addr);
    if (!m) return null;
    let col = 0;
    for (const ch of m[1]) col = col * 26 + (ch.charCodeAt(0) - 64);
    return { col, row: parseInt(m[2], 10) };
  }

  private cellAt(pos: Pos): HTMLTableCellElement | null {
    const td = this.table?.querySelector(`td[data-addr="${formatA1(pos.col, pos.row)}"]`);
    return td instanceof HTMLTableCellElement ? td : null;
  }

  private applySelection(): void {
    if (!this.table) return;
    for (const td of this.table.querySelectorAll("td.sel, td.sel-focus")) {
      td.classList.remove("sel", "sel-focus");
    }
    const c1 = Math.min(this.anchor.col, this.focus.col);
    const c2 = Math.max(this.anchor.col, this.focus.col);
    const r1 = Math.min(this.anchor.row, this.focus.row);
    const r2 = Math.max(this.anchor.row, this.focus.row);
    for (let r = r1; r <= r2; r++) {
      for (let c = c1; c <= c2; c++) {
        this.cellAt({ col: c, row: r })?.classList.add("sel");
      }
    }
    this.cellAt(this.focus)?.classList.add("sel-focus");
    this.handlers.onSelectionChange?.(this.getSelectionRef());
  }

  private applyErrorCell(): void {
    if (!this.table) return;
    for (const td of this.table.querySelectorAll("td.cell-error")) {
      td.classList.remove("cell-error");
    }
    if (this.errorCell) {
      const td = this.table.querySelector(`td[data-addr="${this.errorCell}"]`);
      td?.classList.add("cell-error");
    }
  }

  private onKey(ev: KeyboardEvent): void {
    if (this.editor) return; // the editor input handles its own keys
    const extent = this.state?.extent ?? { cols: 1, rows: 1 };
    const move = (dc: number, dr: number) => {
      ev.preventDefault();
      const next = this.clamp({ col: this.focus.col + dc, row: this.focus.row + dr }, extent.cols, extent.rows);
      this.focus = next;
      if (!ev.shiftKey) this.anchor = next;
      this.applySelection();
    };
    switch (ev.key) {
      case "ArrowUp":
        return move(0, -1);
      case "ArrowDown":
        return move(0, 1);
      case "ArrowLeft":
        return move(-1, 0);
      case "ArrowRight":
        return move(1, 0);
      case "Enter":
      case "F2":
        ev.preventDefault();
        this.openEditor(this.focus);
        return;
      case "Delete":
      case "Backspace":
        ev.preventDefault();
        this.handlers.onCommit(formatA1(this.focus.col, this.focus.row), "");
        return;
      default:
        if (ev.key.length === 1 && !ev.ctrlKey && !ev.metaKey && !ev.altKey) {
          ev.preventDefault();
          this.openEditor(this.focus, ev.key);
        }
    }
  }

  private openEditor(pos: Pos, seed?: string): void {
    this.commitEditor();
    this.anchor = this.focus = pos;
    this.applySelection();
    const td = this.cellAt(pos);
    if (!td) return;
    const a1 = formatA1(pos.col, pos.row);
    const input = document.createElement("input");
    input.type = "text";
    input.className = "cell-editor";
    input.value = seed ?? (this.state?.cells.get(a1) ?? "");
    td.textContent = "";
    td.appendChild(input);
    this.editor = { a1, input };
    input.addEventListener("keydown", (ev) => {
      // keep editor keystrokes away from the grid navigation handler —
      // a bubbled Enter would re-open the editor it just committed
      ev.stopPropagation();
      if (ev.key === "Enter") {
        ev.preventDefault();
        this.commitEditor();
        this.table?.focus();
      } else if (ev.key === "Escape") {
        ev.preventDefault();
        this.cancelEditor();
        this.table?.focus();
      }
    });
    input.addEventListener("blur", () => this.commitEditor());
    input.focus();
    if (seed === undefined) input.select();
  }

  private commitEditor(): void {
    if (!this.editor) return;
    const { a1, input } = this.editor;
    const text = input.value;
    const previous = this.state?.cells.get(a1) ?? "";
    this.editor = null;
    if (text === previous) {
      this.restoreCellText(a1, previous);
      return;
    }
    this.handlers.onCommit(a1, text);
  }

  private cancelEditor(): void {
    if (!this.editor) return;
    const { a1 } = this.editor;
    this.editor = null;
    this.restoreCellText(a1, this.state?.cells.get(a1) ?? "");
  }

  private restoreCellText(a1: string, text: string): void {
    const td = this.table?.querySelector(`td[data-addr="${a1}"]`);
    if (td instanceof HTMLTableCellElement) td.textContent = text;
  }
}
