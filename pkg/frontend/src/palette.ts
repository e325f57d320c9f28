/**
 * Function helper: a palette of every ss* function with labeled
 * argument slots. Slots can be typed or filled from the current grid
 * selection; the call text is pre-checked against the client grammar
 * mirror (name, arity, argument shapes) and can only be inserted into
 * the focused cell once the pre-check passes. The service remains
 * authoritative — this guards against slips, not semantics.
 */

import {
  FUNCTIONS,
  buildCallText,
  checkCallArgs,
  splitTopLevel,
  type FunctionSpec,
} from "./sslang.js";

export interface PaletteHandlers {
  onInsert(text: string): void;
  getSelectionRef(): string;
}

const POINTABLE = new Set(["range", "rect", "cell", "rangeList", "index", "result"]);

export class HelperPalette {
  private select: HTMLSelectElement | null = null;
  private slotsEl: HTMLElement | null = null;
  private summaryEl: HTMLElement | null = null;
  private errorEl: HTMLElement | null = null;
  private insertBtn: HTMLButtonElement | null = null;
  private inputs: HTMLInputElement[] = [];
  private current: FunctionSpec | null = null;
  private lastFocusedSlot = 0;

  constructor(private readonly handlers: PaletteHandlers) {}

  mount(container: HTMLElement): void {
    const box = document.createElement("div");
    box.className = "palette";

    const heading = document.createElement("h3");
    heading.textContent = "Insert function";
    box.appendChild(heading);

    const select = document.createElement("select");
    select.dataset.role = "fn-pick";
    const placeholder = document.createElement("option");
    placeholder.value = "";
    placeholder.textContent = "pick a function…";
    select.appendChild(placeholder);
    for (const fn of FUNCTIONS) {
      const opt = document.createElement("option");
      opt.value = fn.name;
      opt.textContent = `${fn.name}${fn.marker ? "  (marker)" : ""}`;
      select.appendChild(opt);
    }
    select.addEventListener("change", () => this.pick(select.value));
    box.appendChild(select);
    this.select = select;

    const summary = document.createElement("p");
    summary.className = "palette-summary";
    box.appendChild(summary);
    this.summaryEl = summary;

    const slots = document.createElement("div");
    slots.className = "palette-slots";
    box.appendChild(slots);
    this.slotsEl = slots;

    const error = document.createElement("div");
    error.className = "palette-error";
    error.dataset.role = "palette-error";
    box.appendChild(error);
    this.errorEl = error;

    const insert = document.createElement("button");
    insert.type = "button";
    insert.dataset.action = "palette-insert";
    insert.textContent = "Insert into cell";
    insert.disabled = true;
    insert.addEventListener("click", () => {
      if (!this.current || insert.disabled) return;
      this.handlers.onInsert(this.callText());
    });
    box.appendChild(insert);
    this.insertBtn = insert;

    container.appendChild(box);
  }

  /** Programmatic selection, used by tests and keyboard flows. */
  pick(fnName: string): void {
    this.current = FUNCTIONS.find((f) => f.name === fnName) ?? null;
    if (this.select) this.select.value = this.current?.name ?? "";
    this.inputs = [];
    this.lastFocusedSlot = 0;
    if (this.summaryEl) this.summaryEl.textContent = this.current?.summary ?? "";
    if (!this.slotsEl) return;
    this.slotsEl.replaceChildren();
    if (!this.current) {
      this.check();
      return;
    }
    this.current.slots.forEach((slotSpec, idx) => {
      const row = document.createElement("label");
      row.className = "palette-slot";
      const caption = document.createElement("span");
      caption.textContent = slotSpec.name;
      caption.title = slotSpec.hint;
      row.appendChild(caption);
      const input = document.createElement("input");
      input.type = "text";
      input.dataset.slot = String(idx);
      input.placeholder = slotSpec.hint;
      input.addEventListener("input", () => this.check());
      input.addEventListener("focus", () => {
        this.lastFocusedSlot = idx;
      });
      row.appendChild(input);
      if (POINTABLE.has(slotSpec.kind)) {
        const useSel = document.createElement("button");
        useSel.type = "button";
        useSel.dataset.action = `use-selection-${idx}`;
        useSel.textContent = "use selection";
        useSel.title = "fill with the selected grid cells";
        useSel.addEventListener("click", () => {
          input.value = this.handlers.getSelectionRef();
          this.lastFocusedSlot = idx;
          this.check();
        });
        row.appendChild(useSel);
      }
      this.slotsEl!.appendChild(row);
      this.inputs.push(input);
    });
    this.check();
  }

  /** Fill the most recently focused slot (keyboard-free pointing). */
  fillFocusedSlot(value: string): void {
    const input = this.inputs[this.lastFocusedSlot];
    if (input) {
      input.value = value;
      this.check();
    }
  }

  setSlotValue(idx: number, value: string): void {
    const input = this.inputs[idx];
    if (input) {
      input.value = value;
      this.check();
    }
  }

  callText(): string {
    if (!this.current) return "";
    return buildCallText(this.current.name, this.args());
  }

  currentError(): string | null {
    if (!this.current) return "pick a function";
    return checkCallArgs(this.current, this.args());
  }

  private args(): string[] {
    if (!this.current) return [];
    if (this.current.marker) {
      const raw = this.inputs[0]?.value.trim() ?? "";
      return raw === "" ? [] : splitTopLevel(raw);
    }
    return this.inputs.map((i) => i.value);
  }

  private check(): void {
    const err = this.currentError();
    if (this.errorEl) this.errorEl.textContent = err ?? "";
    if (this.insertBtn) this.insertBtn.disabled = err !== null;
  }
}
