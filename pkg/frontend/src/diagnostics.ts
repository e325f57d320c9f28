/**
 * Diagnostics panel: renders the latest service error (code, message,
 * offending cell) or a local pre-check note. The offending cell is
 * clickable and is highlighted in the grid via the onFocusCell hook.
 */

import type { ApiError } from "./api.js";

export interface DiagnosticsHandlers {
  onFocusCell(a1: string): void;
}

export class DiagnosticsPanel {
  private box: HTMLElement | null = null;

  constructor(private readonly handlers: DiagnosticsHandlers) {}

  mount(container: HTMLElement): void {
    const box = document.createElement("div");
    box.className = "diagnostics";
    box.dataset.role = "diagnostics";
    container.appendChild(box);
    this.box = box;
    this.clear();
  }

  clear(): void {
    if (!this.box) return;
    this.box.classList.remove("has-error", "is-note");
    this.box.replaceChildren();
    const idle = document.createElement("p");
    idle.className = "diag-idle";
    idle.textContent = "no problems";
    this.box.appendChild(idle);
  }

  /** Show a service error; `note` renders softer local pre-check text. */
  show(error: ApiError, opts?: { note?: boolean }): void {
    if (!this.box) return;
    this.box.replaceChildren();
    this.box.classList.toggle("is-note", opts?.note === true);
    this.box.classList.add("has-error");

    const code = document.createElement("span");
    code.className = "diag-code";
    code.textContent = opts?.note ? `pre-check ${error.code}` : error.code;
    this.box.appendChild(code);

    const message = document.createElement("p");
    message.className = "diag-message";
    message.dataset.role = "diag-message";
    message.textContent = error.message;
    this.box.appendChild(message);

    if (error.cell) {
      const cellBtn = document.createElement("button");
      cellBtn.type = "button";
      cellBtn.className = "diag-cell";
      cellBtn.dataset.role = "diag-cell";
      cellBtn.textContent = `cell ${error.cell}`;
      cellBtn.title = "jump to the offending cell";
      cellBtn.addEventListener("click", () => this.handlers.onFocusCell(error.cell!));
      this.box.appendChild(cellBtn);
    }
  }
}
