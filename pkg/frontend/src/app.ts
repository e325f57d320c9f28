/**
 * Wires the grid, toolbar, helper palette and diagnostics panel to the
 * constraint service. The client never computes solutions: every grid
 * it displays is a grid the service returned, and toolbar enablement
 * comes from /api/status alone. At most one mutating request is in
 * flight; buttons are disabled while it runs.
 */

import { ApiClient, type ApiError, type ApiResult, type StatePayload, type WorkbookJson } from "./api.js";
import { DiagnosticsPanel } from "./diagnostics.js";
import { GridView, type GridRenderState } from "./gridview.js";
import {
  applyGrid,
  captureSolveContext,
  cellText,
  clearSolveOverlay,
  emptyModel,
  gridExtent,
  gridToJson,
  setCellText,
  toolbarState,
  type UiGridModel,
} from "./model.js";
import { HelperPalette } from "./palette.js";
import { classifyCellText } from "./sslang.js";
import { Toolbar } from "./toolbar.js";

function readFileText(file: File): Promise<string> {
  if (typeof file.text === "function") return file.text();
  return new Promise((resolve, reject) => {
    const reader = new FileReader();
    reader.onload = () => resolve(String(reader.result));
    reader.onerror = () => reject(reader.error ?? new Error("file read failed"));
    reader.readAsText(file);
  });
}

export class App {
  readonly model: UiGridModel = emptyModel();
  readonly toolbar: Toolbar;
  readonly grid: GridView;
  readonly palette: HelperPalette;
  readonly diagnostics: DiagnosticsPanel;
  private programEl: HTMLElement | null = null;
  private pending: Promise<unknown> = Promise.resolve();

  constructor(private readonly api: ApiClient) {
    this.toolbar = new Toolbar({
      onParseBuild: () => this.run(this.parseBuild()),
      onNext: () => this.run(this.nextSolution()),
      onPrevious: () => this.run(this.previousSolution()),
      onOriginal: () => this.run(this.originalState()),
      onOpenFile: (file) => this.run(this.openWorkbookFile(file)),
      onToggleProgram: () => this.run(this.toggleProgram()),
    });
    this.grid = new GridView({
      onCommit: (a1, text) => this.run(this.commitCell(a1, text)),
    });
    this.palette = new HelperPalette({
      onInsert: (text) => this.grid.insertIntoFocusedCell(text),
      getSelectionRef: () => this.grid.getSelectionRef(),
    });
    this.diagnostics = new DiagnosticsPanel({
      onFocusCell: (a1) => this.grid.focusCell(a1),
    });
  }

  async mount(root: HTMLElement): Promise<void> {
    const shell = document.createElement("div");
    shell.className = "app-shell";

    const header = document.createElement("header");
    header.className = "app-header";
    const title = document.createElement("h1");
    title.textContent = "sheetcsp";
    header.appendChild(title);
    this.toolbar.mount(header);
    shell.appendChild(header);

    const main = document.createElement("div");
    main.className = "app-main";
    const gridHost = document.createElement("div");
    gridHost.className = "app-grid";
    this.grid.mount(gridHost);
    main.appendChild(gridHost);

    const side = document.createElement("aside");
    side.className = "app-side";
    this.palette.mount(side);
    const diagHeading = document.createElement("h3");
    diagHeading.textContent = "Diagnostics";
    side.appendChild(diagHeading);
    this.diagnostics.mount(side);

    const program = document.createElement("pre");
    program.className = "program";
    program.dataset.role = "program";
    program.hidden = true;
    side.appendChild(program);
    this.programEl = program;

    main.appendChild(side);
    shell.appendChild(main);
    root.appendChild(shell);

    await this.refresh();
  }

  /** Wait until every started action has settled (used by tests). */
  async idle(): Promise<void> {
    let snapshot: Promise<unknown>;
    do {
      snapshot = this.pending;
      await snapshot;
    } while (snapshot !== this.pending);
  }

  // --- actions -----------------------------------------------------------------

  async refresh(): Promise<void> {
    const wb = await this.api.getWorkbook();
    if (wb.ok) {
      applyGrid(this.model, wb.value);
    } else {
      this.showError(wb.error);
    }
    await this.refreshStatus();
    this.render();
  }

  async parseBuild(): Promise<void> {
    await this.withBusy(async () => {
      this.clearDiagnostics();
      // Roles describe the grid that is being solved, so capture them
      // from the text as it stands before the service overlays values.
      const ctx = captureSolveContext(this.model);
      const res = await this.api.solve();
      if (res.ok) {
        applyGrid(this.model, res.value.grid);
        this.model.roles = ctx.roles;
        this.model.preSolveText = ctx.preSolveText;
      } else {
        clearSolveOverlay(this.model);
        this.showError(res.error);
      }
    });
  }

  nextSolution(): Promise<void> {
    return this.navigate(() => this.api.next());
  }

  previousSolution(): Promise<void> {
    return this.navigate(() => this.api.previous());
  }

  originalState(): Promise<void> {
    return this.navigate(() => this.api.reset());
  }

  async commitCell(a1: string, text: string): Promise<void> {
    setCellText(this.model, a1, text);
    clearSolveOverlay(this.model); // the stored solutions no longer match the text
    const precheck = classifyCellText(text);
    await this.withBusy(async () => {
      this.clearDiagnostics();
      const res = await this.api.putWorkbook(gridToJson(this.model));
      if (res.ok) {
        applyGrid(this.model, res.value.grid);
      } else {
        this.showError(res.error);
      }
    });
    if (precheck.error) {
      this.showError({ code: "SYNTAX", message: precheck.error, cell: a1 }, { note: true });
    }
  }

  async openWorkbookFile(file: File): Promise<void> {
    let workbook: WorkbookJson;
    try {
      workbook = JSON.parse(await readFileText(file)) as WorkbookJson;
    } catch (err) {
      this.showError(
        {
          code: "BAD_JSON",
          message: `${file.name} is not valid JSON: ${err instanceof Error ? err.message : err}`,
          cell: null,
        },
        { note: true },
      );
      return;
    }
    await this.withBusy(async () => {
      this.clearDiagnostics();
      const res = await this.api.putWorkbook(workbook);
      if (res.ok) {
        applyGrid(this.model, res.value.grid);
        clearSolveOverlay(this.model);
      } else {
        this.showError(res.error);
      }
    });
  }

  async toggleProgram(): Promise<void> {
    if (!this.programEl) return;
    if (!this.programEl.hidden) {
      this.programEl.hidden = true;
      return;
    }
    const res = await this.api.getClp();
    if (res.ok) {
      this.programEl.textContent = res.value;
      this.programEl.hidden = false;
    } else {
      this.showError(res.error);
    }
  }

  // --- plumbing ------------------------------------------------------------------

  private run(p: Promise<void>): void {
    this.pending = p.catch(() => {});
  }

  private async navigate(call: () => Promise<ApiResult<StatePayload>>): Promise<void> {
    await this.withBusy(async () => {
      const res = await call();
      if (res.ok) {
        applyGrid(this.model, res.value.grid);
        this.clearDiagnostics();
      } else {
        this.showError(res.error);
      }
    });
  }

  private async withBusy(fn: () => Promise<void>): Promise<void> {
    if (this.model.busy) return;
    this.model.busy = true;
    this.render();
    try {
      await fn();
    } finally {
      this.model.busy = false;
      await this.refreshStatus();
      this.render();
    }
  }

  private async refreshStatus(): Promise<void> {
    const res = await this.api.getStatus();
    if (res.ok) {
      this.model.status = res.value;
    } else {
      this.model.status = null;
      if (this.model.lastError === null) this.showError(res.error);
    }
  }

  private showError(error: ApiError, opts?: { note?: boolean }): void {
    this.model.lastError = error;
    this.diagnostics.show(error, opts);
    this.grid.setErrorCell(error.cell);
  }

  private clearDiagnostics(): void {
    this.model.lastError = null;
    this.diagnostics.clear();
    this.grid.setErrorCell(null);
  }

  render(): void {
    this.toolbar.update(toolbarState(this.model.status, this.model.busy));
    this.grid.render(this.gridState());
  }

  private gridState(): GridRenderState {
    const sheet = this.model.sheets[this.model.active];
    return {
      sheetNames: this.model.sheets.map((s) => s.name),
      active: this.model.active,
      cells: sheet.cells,
      roles: this.model.roles,
      preSolveText: this.model.preSolveText,
      view: this.model.status?.view ?? null,
      extent: gridExtent(this.model),
    };
  }

  /** Convenience accessor for tests: text of one cell on the active sheet. */
  textAt(a1: string): string {
    return cellText(this.model, a1);
  }
}
