/**
 * Shared test utilities: recorded service responses, a scriptable fake
 * fetch, and DOM polling. The recordings under tests/recorded/ are real
 * responses captured from the service (regenerate with
 * scripts/record_api_fixtures.py in the repository root), which is what
 * lets these tests check that every grid the UI displays equals a grid
 * the service returned.
 */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { FetchLike, StatePayload, StatusPayload, WorkbookJson } from "../src/api.js";

const HERE = dirname(fileURLToPath(import.meta.url));
export const RECORDED_DIR = join(HERE, "recorded");
export const PY_FIXTURES_DIR = join(HERE, "..", "..", "tests", "fixtures");

export interface Recording {
  method: string;
  path: string;
  status: number;
  body?: unknown;
  text?: string;
}

export function recording(name: string): Recording {
  return JSON.parse(readFileSync(join(RECORDED_DIR, `${name}.json`), "utf8")) as Recording;
}

export function recordedBody<T>(name: string): T {
  const rec = recording(name);
  if (rec.body === undefined) throw new Error(`recording ${name} has no JSON body`);
  return rec.body as T;
}

export const recordedState = (name: string): StatePayload => recordedBody(name);
export const recordedStatus = (name: string): StatusPayload => recordedBody(name);
export const recordedWorkbook = (name: string): WorkbookJson => recordedBody(name);

export function pyFixture(name: string): WorkbookJson {
  return JSON.parse(readFileSync(join(PY_FIXTURES_DIR, `${name}.json`), "utf8")) as WorkbookJson;
}

function responseFor(rec: Recording): Response {
  if (rec.text !== undefined) {
    return new Response(rec.text, {
      status: rec.status,
      headers: { "content-type": "text/plain; charset=utf-8" },
    });
  }
  return new Response(JSON.stringify(rec.body), {
    status: rec.status,
    headers: { "content-type": "application/json" },
  });
}

/**
 * Scriptable stand-in for the service. Routes are keyed "METHOD /path";
 * once() responses are consumed in order, then the sticky() response
 * (if any) answers every further call. Unrouted requests fail the test
 * loudly with a 599.
 */
export class FakeService {
  private queues = new Map<string, Recording[]>();
  private stickies = new Map<string, Recording>();
  readonly requests: { method: string; path: string; body: unknown }[] = [];

  once(rec: Recording): this {
    const key = `${rec.method} ${rec.path}`;
    const queue = this.queues.get(key) ?? [];
    queue.push(rec);
    this.queues.set(key, queue);
    return this;
  }

  sticky(rec: Recording): this {
    this.stickies.set(`${rec.method} ${rec.path}`, rec);
    return this;
  }

  fetch: FetchLike = (url, init) => {
    const method = (init?.method ?? "GET").toUpperCase();
    const path = new URL(url, "http://fake.test").pathname;
    const key = `${method} ${path}`;
    this.requests.push({
      method,
      path,
      body: typeof init?.body === "string" ? JSON.parse(init.body) : undefined,
    });
    const queue = this.queues.get(key);
    const rec = queue?.length ? queue.shift()! : this.stickies.get(key);
    if (!rec) {
      return Promise.resolve(
        new Response(JSON.stringify({ error: { code: "UNROUTED", message: key, cell: null } }), {
          status: 599,
          headers: { "content-type": "application/json" },
        }),
      );
    }
    return Promise.resolve(responseFor(rec));
  };
}

export async function waitFor(cond: () => boolean, ms = 20_000, step = 25): Promise<void> {
  const deadline = Date.now() + ms;
  while (!cond()) {
    if (Date.now() > deadline) throw new Error("timed out waiting for condition");
    await new Promise((resolve) => setTimeout(resolve, step));
  }
}

export function counterText(root: ParentNode = document): string {
  return root.querySelector('[data-role="counter"]')?.textContent ?? "";
}

export function buttonFor(action: string, root: ParentNode = document): HTMLButtonElement {
  const btn = root.querySelector(`button[data-action="${action}"]`);
  if (!(btn instanceof HTMLButtonElement)) throw new Error(`no button ${action}`);
  return btn;
}

export function cellEl(a1: string, root: ParentNode = document): HTMLTableCellElement {
  const td = root.querySelector(`td[data-addr="${a1}"]`);
  if (!(td instanceof HTMLTableCellElement)) throw new Error(`no cell ${a1}`);
  return td;
}

/** All non-empty td texts keyed by A1 address. */
export function displayedCells(root: ParentNode = document): Map<string, string> {
  const out = new Map<string, string>();
  for (const td of root.querySelectorAll("td[data-addr]")) {
    const text = td.textContent ?? "";
    if (text !== "") out.set((td as HTMLElement).dataset.addr!, text);
  }
  return out;
}
