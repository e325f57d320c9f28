/**
 * Typed client for the constraint service JSON API.
 *
 * Endpoints:
 *   GET  /api/workbook   current grid
 *   PUT  /api/workbook   replace the grid, reset the session
 *   POST /api/solve      parse, build, solve; first solution displayed
 *   POST /api/next       cursor forward (clamped)
 *   POST /api/prev       cursor back (clamped)
 *   POST /api/reset      restore the original grid
 *   GET  /api/clp        emitted program text (text/plain)
 *   GET  /api/status     view, cursor, counts, availability flags
 *
 * Every call resolves to an ApiResult; failures carry the service's
 * {"error": {code, message, cell}} envelope (or a synthesized one for
 * transport problems). This module performs no DOM work and holds no
 * state, so the whole UI's knowledge of the wire format lives here.
 */

export type ViewName = "original" | "showingSolution";

export interface SheetJson {
  name: string;
  cells: Record<string, string>;
}

export interface WorkbookJson {
  sheets: SheetJson[];
  active: number;
}

export interface StatusPayload {
  view: ViewName;
  cursor: number;
  solutionCount: number;
  solving: boolean;
  nextAvailable: boolean;
  prevAvailable: boolean;
  objective: number | null;
}

export interface StatePayload {
  solutionCount: number;
  cursor: number;
  view: ViewName;
  objective: number | null;
  grid: WorkbookJson;
}

export interface ApiError {
  code: string;
  message: string;
  cell: string | null;
}

export type ApiResult<T> =
  | { ok: true; value: T }
  | { ok: false; status: number; error: ApiError };

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

function transportError(message: string): ApiResult<never> {
  return { ok: false, status: 0, error: { code: "NETWORK", message, cell: null } };
}

export class ApiClient {
  private readonly fetchImpl: FetchLike;

  constructor(
    readonly baseUrl: string = "",
    fetchImpl?: FetchLike,
  ) {
    this.fetchImpl = fetchImpl ?? ((url, init) => globalThis.fetch(url, init));
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<ApiResult<T>> {
    let resp: Response;
    try {
      resp = await this.fetchImpl(this.baseUrl + path, {
        method,
        headers: body === undefined ? undefined : { "content-type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      return transportError(err instanceof Error ? err.message : String(err));
    }
    if (!resp.ok) {
      let envelope: Partial<ApiError> = {};
      try {
        envelope = ((await resp.json()) as { error?: Partial<ApiError> }).error ?? {};
      } catch {
        /* non-JSON error body: keep the HTTP status, synthesize the rest */
      }
      return {
        ok: false,
        status: resp.status,
        error: {
          code: envelope.code ?? `HTTP_${resp.status}`,
          message: envelope.message ?? `request failed with HTTP ${resp.status}`,
          cell: envelope.cell ?? null,
        },
      };
    }
    try {
      return { ok: true, value: (await resp.json()) as T };
    } catch {
      return transportError(`non-JSON response (HTTP ${resp.status}) from ${path}`);
    }
  }

  getWorkbook(): Promise<ApiResult<WorkbookJson>> {
    return this.request("GET", "/api/workbook");
  }

  putWorkbook(workbook: WorkbookJson): Promise<ApiResult<StatePayload>> {
    return this.request("PUT", "/api/workbook", workbook);
  }

  solve(): Promise<ApiResult<StatePayload>> {
    return this.request("POST", "/api/solve");
  }

  next(): Promise<ApiResult<StatePayload>> {
    return this.request("POST", "/api/next");
  }

  previous(): Promise<ApiResult<StatePayload>> {
    return this.request("POST", "/api/prev");
  }

  reset(): Promise<ApiResult<StatePayload>> {
    return this.request("POST", "/api/reset");
  }

  getStatus(): Promise<ApiResult<StatusPayload>> {
    return this.request("GET", "/api/status");
  }

  async getClp(): Promise<ApiResult<string>> {
    let resp: Response;
    try {
      resp = await this.fetchImpl(this.baseUrl + "/api/clp");
    } catch (err) {
      return transportError(err instanceof Error ? err.message : String(err));
    }
    if (!resp.ok) {
      let envelope: Partial<ApiError> = {};
      try {
        envelope = ((await resp.json()) as { error?: Partial<ApiError> }).error ?? {};
      } catch {
        /* fall through to defaults */
      }
      return {
        ok: false,
        status: resp.status,
        error: {
          code: envelope.code ?? `HTTP_${resp.status}`,
          message: envelope.message ?? `request failed with HTTP ${resp.status}`,
          cell: envelope.cell ?? null,
        },
      };
    }
    return { ok: true, value: await resp.text() };
  }
}
