/** Thin fetch client for the cellpop service. Every method maps to exactly
 * one HTTP request; errors surface as ApiError with the server's error code
 * and detail so callers can distinguish validation failures from transport
 * problems. */

import type {
  ConfigPatch,
  DatasetInfo,
  HistoryResult,
  RenderModel,
  SessionInfo,
  ViewConfig,
} from "./types.js";

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly detail: unknown;

  constructor(status: number, code: string, detail: unknown) {
    super(`${code} (HTTP ${status})`);
    this.name = "ApiError";
    this.status = status;
    this.code = code;
    this.detail = detail;
  }
}

async function raise(resp: Response): Promise<never> {
  let code = "http_error";
  let detail: unknown = resp.statusText;
  try {
    const body = (await resp.json()) as Record<string, unknown>;
    if (typeof body.error === "string") code = body.error;
    if ("detail" in body) detail = body.detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ApiError(resp.status, code, detail);
}

export class ApiClient {
  readonly baseUrl: string;

  constructor(baseUrl = "") {
    this.baseUrl = baseUrl.replace(/\/$/, "");
  }

  private async requestJson<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const resp = await fetch(this.baseUrl + path, init);
    if (!resp.ok) await raise(resp);
    return (await resp.json()) as T;
  }

  async health(): Promise<boolean> {
    const out = await this.requestJson<{ status: string }>("GET", "/health");
    return out.status === "ok";
  }

  async datasets(): Promise<DatasetInfo[]> {
    const out = await this.requestJson<{ datasets: DatasetInfo[] }>("GET", "/datasets");
    return out.datasets;
  }

  createSession(dataset: string): Promise<SessionInfo> {
    return this.requestJson("POST", "/sessions", { dataset });
  }

  getConfig(sessionId: string): Promise<ViewConfig> {
    return this.requestJson("GET", `/sessions/${sessionId}/config`);
  }

  /** Applies one config patch; the response is the new view. */
  patchConfig(sessionId: string, patch: ConfigPatch): Promise<RenderModel> {
    return this.requestJson("POST", `/sessions/${sessionId}/config`, patch);
  }

  getView(sessionId: string): Promise<RenderModel> {
    return this.requestJson("GET", `/sessions/${sessionId}/view`);
  }

  async undo(sessionId: string): Promise<HistoryResult> {
    const out = await this.requestJson<Record<string, unknown>>(
      "POST",
      `/sessions/${sessionId}/undo`,
    );
    const { noop, ...model } = out;
    return { noop: Boolean(noop), model: model as unknown as RenderModel };
  }

  async redo(sessionId: string): Promise<HistoryResult> {
    const out = await this.requestJson<Record<string, unknown>>(
      "POST",
      `/sessions/${sessionId}/redo`,
    );
    const { noop, ...model } = out;
    return { noop: Boolean(noop), model: model as unknown as RenderModel };
  }

  /** Fetches the current view as SVG text at the requested pixel size. */
  async exportSvg(sessionId: string, width: number, height: number): Promise<string> {
    const path = `/sessions/${sessionId}/export.svg?width=${width}&height=${height}`;
    const resp = await fetch(this.baseUrl + path, { method: "GET" });
    if (!resp.ok) await raise(resp);
    return resp.text();
  }
}
