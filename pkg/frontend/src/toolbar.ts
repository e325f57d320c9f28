/**
 * Toolbar: ParseBuild / Next Solution / Previous Solution / Original
 * State buttons, the "[N]" solution counter, a workbook file opener,
 * and a program-text toggle. Purely presentational — enablement and
 * labels arrive via update() from the model's ToolbarState.
 */

import type { ToolbarState } from "./model.js";

export interface ToolbarHandlers {
  onParseBuild(): void;
  onNext(): void;
  onPrevious(): void;
  onOriginal(): void;
  onOpenFile(file: File): void;
  onToggleProgram(): void;
}

const BUTTONS: { action: string; label: string; title: string }[] = [
  { action: "parse-build", label: "ParseBuild", title: "compile the grid and solve" },
  { action: "next", label: "Next Solution", title: "show the next stored solution" },
  { action: "previous", label: "Previous Solution", title: "show the previous stored solution" },
  { action: "original", label: "Original State", title: "restore the grid as it was before solving" },
];

export class Toolbar {
  private buttons = new Map<string, HTMLButtonElement>();
  private counterEl: HTMLElement | null = null;
  private cursorEl: HTMLElement | null = null;
  private objectiveEl: HTMLElement | null = null;
  private fileInput: HTMLInputElement | null = null;
  private openBtn: HTMLButtonElement | null = null;

  constructor(private readonly handlers: ToolbarHandlers) {}

  mount(container: HTMLElement): void {
    const bar = document.createElement("div");
    bar.className = "toolbar";

    const actions: Record<string, () => void> = {
      "parse-build": this.handlers.onParseBuild,
      next: this.handlers.onNext,
      previous: this.handlers.onPrevious,
      original: this.handlers.onOriginal,
    };
    for (const spec of BUTTONS) {
      const btn = document.createElement("button");
      btn.type = "button";
      btn.dataset.action = spec.action;
      btn.textContent = spec.label;
      btn.title = spec.title;
      btn.disabled = true;
      btn.addEventListener("click", () => {
        if (!btn.disabled) actions[spec.action]();
      });
      bar.appendChild(btn);
      this.buttons.set(spec.action, btn);
      if (spec.action === "parse-build") {
        const counter = document.createElement("span");
        counter.className = "counter";
        counter.dataset.role = "counter";
        counter.title = "number of stored solutions";
        counter.textContent = "[ ]";
        bar.appendChild(counter);
      }
    }
    this.counterEl = bar.querySelector('[data-role="counter"]');

    const cursor = document.createElement("span");
    cursor.className = "cursor-label";
    cursor.dataset.role = "cursor";
    bar.appendChild(cursor);
    this.cursorEl = cursor;

    const objective = document.createElement("span");
    objective.className = "objective-label";
    objective.dataset.role = "objective";
    bar.appendChild(objective);
    this.objectiveEl = objective;

    const spacer = document.createElement("span");
    spacer.className = "toolbar-spacer";
    bar.appendChild(spacer);

    const program = document.createElement("button");
    program.type = "button";
    program.dataset.action = "program";
    program.textContent = "Program";
    program.title = "show the emitted solver program";
    program.addEventListener("click", () => this.handlers.onToggleProgram());
    bar.appendChild(program);
    this.buttons.set("program", program);

    const open = document.createElement("button");
    open.type = "button";
    open.dataset.action = "open";
    open.textContent = "Open…";
    open.title = "load a workbook JSON file";
    const input = document.createElement("input");
    input.type = "file";
    input.accept = ".json,application/json";
    input.dataset.role = "workbook-file";
    input.style.display = "none";
    open.addEventListener("click", () => input.click());
    input.addEventListener("change", () => {
      const file = input.files && input.files[0];
      if (file) this.handlers.onOpenFile(file);
      input.value = "";
    });
    bar.appendChild(open);
    bar.appendChild(input);
    this.openBtn = open;
    this.fileInput = input;

    container.appendChild(bar);
  }

  update(state: ToolbarState): void {
    const enabled: Record<string, boolean> = {
      "parse-build": state.parseBuild,
      next: state.next,
      previous: state.previous,
      original: state.original,
    };
    for (const [action, btn] of this.buttons) {
      if (action in enabled) btn.disabled = !enabled[action];
    }
    if (this.openBtn) this.openBtn.disabled = !state.openFile;
    if (this.counterEl) this.counterEl.textContent = state.counter;
    if (this.cursorEl) this.cursorEl.textContent = state.cursorLabel;
    if (this.objectiveEl) {
      this.objectiveEl.textContent = state.objective === null ? "" : `objective ${state.objective}`;
    }
  }

  /** The hidden file input, exposed for tests that drive file loading. */
  get workbookFileInput(): HTMLInputElement | null {
    return this.fileInput;
  }
}
