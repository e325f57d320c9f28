/**
 * End-to-end: the real client DOM driven against a live service
 * process. The service is spawned from the installed `sheetcsp`
 * console script; the UI runs in the test DOM with a real fetch, so
 * every assertion below crosses the HTTP boundary.
 *
 * Flow under test: load the Sudoku workbook through the Open control,
 * ParseBuild must show "[1]" with Next disabled; load 8-Queens,
 * ParseBuild must show "[92]", Next advances, Previous returns to the
 * same board, Original State restores the constraint text.
 */

import { spawn, type ChildProcess } from "node:child_process";
import { readFileSync } from "node:fs";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { App } from "../src/app.js";
import { PY_FIXTURES_DIR, buttonFor, cellEl, counterText, displayedCells, waitFor } from "./helpers.js";

const PORT = 8931;
const BASE = `http://127.0.0.1:${PORT}`;

let service: ChildProcess | null = null;
let stderrTail = "";
let app: App;

async function serviceReady(): Promise<void> {
  const deadline = Date.now() + 45_000;
  for (;;) {
    try {
      const res = await fetch(`${BASE}/api/status`);
      if (res.ok) return;
    } catch {
      // not listening yet
    }
    if (Date.now() > deadline) {
      throw new Error(`service did not come up on ${BASE}\n${stderrTail}`);
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
}

function loadWorkbookFile(name: string): void {
  const text = readFileSync(join(PY_FIXTURES_DIR, `${name}.json`), "utf8");
  const file = new File([text], `${name}.json`, { type: "application/json" });
  const input = document.querySelector<HTMLInputElement>('[data-role="workbook-file"]')!;
  Object.defineProperty(input, "files", { value: [file], configurable: true });
  input.dispatchEvent(new Event("change", { bubbles: true }));
}

async function click(action: string): Promise<void> {
  buttonFor(action).click();
  await app.idle();
}

/** Texts of the 8x8 board, a stable signature for one queens solution. */
function queensBoard(): string {
  const parts: string[] = [];
  for (let row = 1; row <= 8; row++) {
    for (const col of ["A", "B", "C", "D", "E", "F", "G", "H"]) {
      parts.push(cellEl(`${col}${row}`).textContent ?? "");
    }
  }
  return parts.join(",");
}

beforeAll(async () => {
  service = spawn("sheetcsp", ["serve", "--host", "127.0.0.1", "--port", String(PORT)], {
    stdio: ["ignore", "ignore", "pipe"],
  });
  service.stderr!.on("data", (chunk: Buffer) => {
    stderrTail = (stderrTail + chunk.toString()).slice(-4000);
  });
  await serviceReady();

  document.body.innerHTML = "";
  const root = document.createElement("div");
  document.body.appendChild(root);
  app = new App(new ApiClient(BASE));
  await app.mount(root);
});

afterAll(() => {
  service?.kill("SIGTERM");
});

describe("live service end to end", () => {
  it("solves the Sudoku workbook to a unique solution", async () => {
    loadWorkbookFile("sudoku");
    await app.idle();
    expect(app.textAt("A13")).toBe("ssDomain(A1:I9,1,9)");
    expect(counterText()).toBe("[ ]");

    await click("parse-build");
    await waitFor(() => counterText() === "[1]");
    expect(buttonFor("next").disabled).toBe(true);
    expect(buttonFor("previous").disabled).toBe(true);

    // all 81 cells now show digits…
    for (let row = 1; row <= 9; row++) {
      for (const col of ["A", "B", "C", "D", "E", "F", "G", "H", "I"]) {
        expect(cellEl(`${col}${row}`).textContent).toMatch(/^[1-9]$/);
      }
    }
    // …and the DOM displays exactly the grid the service holds.
    const live = (await (await fetch(`${BASE}/api/workbook`)).json()) as {
      sheets: { cells: Record<string, string> }[];
    };
    expect(Object.fromEntries(displayedCells())).toEqual(live.sheets[0]!.cells);
  });

  it("enumerates 8-queens and navigates the stored solutions", async () => {
    loadWorkbookFile("queens8");
    await app.idle();
    expect(counterText()).toBe("[ ]"); // new workbook, fresh session
    expect(app.textAt("A11")).toBe("ssVarRanges(A1:H8)");

    await click("parse-build");
    await waitFor(() => counterText() === "[92]");
    expect(buttonFor("next").disabled).toBe(false);
    expect(buttonFor("previous").disabled).toBe(true);
    const first = queensBoard();
    expect(first).toMatch(/[01]/);

    await click("next");
    const second = queensBoard();
    expect(second).not.toBe(first); // Next advances
    expect(buttonFor("previous").disabled).toBe(false);

    await click("previous");
    expect(queensBoard()).toBe(first); // Previous returns

    await click("original");
    expect(app.textAt("A11")).toBe("ssVarRanges(A1:H8)"); // constraint text restored
    expect(app.textAt("A17")).toBe("ssConstraintRanges(A12:A16)");
    expect(app.textAt("A1")).toBe(""); // board cleared back to the declaration
    expect(counterText()).toBe("[92]"); // solutions kept for further browsing

    console.log("[ui-e2e] PASS sudoku [1]; queens [92] with next/previous/original against the live service");
  });
});
