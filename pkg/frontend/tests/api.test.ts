import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { FakeService, recording } from "./helpers.js";

describe("ApiClient", () => {
  it("returns parsed JSON payloads on success", async () => {
    const svc = new FakeService()
      .sticky(recording("queens-status-initial"))
      .sticky(recording("queens-workbook"));
    const api = new ApiClient("", svc.fetch);
    const status = await api.getStatus();
    expect(status.ok).toBe(true);
    if (status.ok) expect(status.value.solutionCount).toBe(0);
    const grid = await api.getWorkbook();
    expect(grid.ok).toBe(true);
    if (grid.ok) expect(grid.value.sheets[0]!.cells["A11"]).toBe("ssVarRanges(A1:H8)");
  });

  it("passes service error envelopes through verbatim", async () => {
    const svc = new FakeService().sticky(recording("error-parse"));
    const api = new ApiClient("", svc.fetch);
    const result = await api.solve();
    expect(result.ok).toBe(false);
    if (!result.ok) {
      expect(result.status).toBe(422);
      expect(result.error.code).toBe("PARSE_ERROR");
      expect(result.error.cell).toBe("A13");
      expect(result.error.message).toContain("expected ','");
    }
  });

  it("reads the generated solver program as text", async () => {
    const svc = new FakeService().sticky(recording("queens-clp"));
    const api = new ApiClient("", svc.fetch);
    const result = await api.getClp();
    expect(result.ok).toBe(true);
    if (result.ok) {
      expect(result.value.split("\n")[0]).toBe(":- use_module(library(bounds)).");
    }
  });

  it("maps transport failures to a NETWORK error with status 0", async () => {
    const api = new ApiClient("", () => Promise.reject(new TypeError("fetch failed")));
    const result = await api.getStatus();
    expect(result.ok).toBe(false);
    if (!result.ok) {
      expect(result.status).toBe(0);
      expect(result.error.code).toBe("NETWORK");
    }
  });

  it("synthesizes an envelope when an error response lacks one", async () => {
    const fetchImpl = () =>
      Promise.resolve(
        new Response("gateway timeout", { status: 504, headers: { "content-type": "text/plain" } }),
      );
    const api = new ApiClient("", fetchImpl);
    const result = await api.solve();
    expect(result.ok).toBe(false);
    if (!result.ok) {
      expect(result.status).toBe(504);
      expect(result.error.code).toBe("HTTP_504");
    }
  });

  it("targets the documented endpoints", async () => {
    const svc = new FakeService()
      .sticky(recording("queens-solve"))
      .sticky(recording("queens-next"))
      .sticky(recording("queens-prev"))
      .sticky(recording("queens-reset"));
    const api = new ApiClient("", svc.fetch);
    await api.solve();
    await api.next();
    await api.previous();
    await api.reset();
    expect(svc.requests.map((r) => `${r.method} ${r.path}`)).toEqual([
      "POST /api/solve",
      "POST /api/next",
      "POST /api/prev",
      "POST /api/reset",
    ]);
  });
});
