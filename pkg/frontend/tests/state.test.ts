import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { SessionStore } from "../src/state.js";
import type { ClientState } from "../src/state.js";
import type { ConfigPatch, RenderModel, ViewConfig } from "../src/types.js";
import { DEFAULT_CONFIG, STACKED_MODEL, TOY_MODEL, clone } from "./fixtures.js";

interface Deferred<T> {
  promise: Promise<T>;
  resolve: (value: T) => void;
  reject: (err: unknown) => void;
}

function deferred<T>(): Deferred<T> {
  let resolve!: (value: T) => void;
  let reject!: (err: unknown) => void;
  const promise = new Promise<T>((res, rej) => {
    resolve = res;
    reject = rej;
  });
  return { promise, resolve, reject };
}

/** In-memory stand-in for the HTTP client: records calls, answers from
 * queues, and lets tests hold responses open to probe pending behavior. */
class FakeApi {
  calls: { method: string; args: unknown[] }[] = [];
  config: ViewConfig = clone(DEFAULT_CONFIG);
  model: RenderModel = clone(TOY_MODEL);
  patchGate: Deferred<RenderModel> | null = null;
  failPatchWith: unknown = null;
  undoNoop = false;

  asClient(): ApiClient {
    return this as unknown as ApiClient;
  }

  async getView(sessionId: string): Promise<RenderModel> {
    this.calls.push({ method: "getView", args: [sessionId] });
    return clone(this.model);
  }

  async getConfig(sessionId: string): Promise<ViewConfig> {
    this.calls.push({ method: "getConfig", args: [sessionId] });
    return clone(this.config);
  }

  async patchConfig(sessionId: string, patch: ConfigPatch): Promise<RenderModel> {
    this.calls.push({ method: "patchConfig", args: [sessionId, patch] });
    if (this.failPatchWith) throw this.failPatchWith;
    if (this.patchGate) return this.patchGate.promise;
    this.config = { ...this.config, ...patch } as ViewConfig;
    return clone(this.model);
  }

  async undo(sessionId: string): Promise<{ noop: boolean; model: RenderModel }> {
    this.calls.push({ method: "undo", args: [sessionId] });
    return { noop: this.undoNoop, model: clone(this.model) };
  }

  async redo(sessionId: string): Promise<{ noop: boolean; model: RenderModel }> {
    this.calls.push({ method: "redo", args: [sessionId] });
    return { noop: this.undoNoop, model: clone(this.model) };
  }

  named(method: string): { method: string; args: unknown[] }[] {
    return this.calls.filter((c) => c.method === method);
  }
}

async function loadedStore(api: FakeApi): Promise<SessionStore> {
  const store = new SessionStore(api.asClient(), "sess", "toy");
  await store.load();
  api.calls = [];
  return store;
}

describe("SessionStore", () => {
  it("seeds model and config from the server on load", async () => {
    const api = new FakeApi();
    const store = new SessionStore(api.asClient(), "sess", "toy");
    await store.load();
    expect(store.state.model?.grid_cells).toHaveLength(9);
    expect(store.state.config?.normalization).toBe("none");
    expect(store.state.banner).toBeNull();
  });

  it("sends exactly one POST per accepted mutation", async () => {
    const api = new FakeApi();
    const store = await loadedStore(api);
    await store.patch({ transpose: true });
    expect(api.named("patchConfig")).toHaveLength(1);
    expect(api.named("patchConfig")[0]?.args[1]).toEqual({ transpose: true });
  });

  it("drops mutations that arrive while one is pending", async () => {
    const api = new FakeApi();
    const store = await loadedStore(api);
    api.patchGate = deferred<RenderModel>();
    const first = store.patch({ transpose: true });
    expect(store.state.pending).toBe(true);
    const second = await store.patch({ log_applied: true });
    expect(second).toBe(false);
    const third = await store.undo();
    expect(third).toBe(false);
    api.patchGate.resolve(clone(STACKED_MODEL));
    await expect(first).resolves.toBe(true);
    expect(api.named("patchConfig")).toHaveLength(1);
    expect(api.named("undo")).toHaveLength(0);
    expect(store.state.pending).toBe(false);
  });

  it("replaces model and config atomically in a single notification", async () => {
    const api = new FakeApi();
    const store = await loadedStore(api);
    const seen: { model: RenderModel | null; config: ViewConfig | null; pending: boolean }[] = [];
    store.subscribe((s: ClientState) =>
      seen.push({ model: s.model, config: s.config, pending: s.pending }),
    );
    api.config = { ...clone(DEFAULT_CONFIG), transpose: true };
    api.model = clone(STACKED_MODEL);
    await store.patch({ transpose: true });
    expect(seen).toHaveLength(2);
    expect(seen[0]?.pending).toBe(true);
    expect(seen[0]?.model?.grid_cells).toHaveLength(9);
    const final = seen[1];
    expect(final?.pending).toBe(false);
    expect(final?.model?.grid_cells).toHaveLength(0);
    expect(final?.config?.transpose).toBe(true);
  });

  it("records violations and keeps the last valid state on 422", async () => {
    const api = new FakeApi();
    const store = await loadedStore(api);
    const before = store.state.config;
    api.failPatchWith = new ApiError(422, "invalid_config", [
      { field: "row_group_by", reason: "unknown metadata column" },
    ]);
    const ok = await store.patch({ row_group_by: "nope" });
    expect(ok).toBe(false);
    expect(store.state.violations).toEqual([
      { field: "row_group_by", reason: "unknown metadata column" },
    ]);
    expect(store.state.banner).toBeNull();
    expect(store.state.config).toBe(before);
    expect(store.state.model?.grid_cells).toHaveLength(9);
    expect(api.named("getConfig")).toHaveLength(0);
  });

  it("clears old violations when the next mutation starts", async () => {
    const api = new FakeApi();
    const store = await loadedStore(api);
    api.failPatchWith = new ApiError(422, "invalid_config", [{ field: "zoom", reason: "bad" }]);
    await store.patch({ zoom: null });
    expect(store.state.violations).toHaveLength(1);
    api.failPatchWith = null;
    await store.patch({ transpose: true });
    expect(store.state.violations).toHaveLength(0);
  });

  it("shows a banner on transport failures", async () => {
    const api = new FakeApi();
    const store = await loadedStore(api);
    api.failPatchWith = new TypeError("NetworkError");
    await store.patch({ transpose: true });
    expect(store.state.banner).toContain("NetworkError");
    expect(store.state.violations).toHaveLength(0);
  });

  it("rejects malformed view payloads with a banner, keeping the old view", async () => {
    const api = new FakeApi();
    const store = await loadedStore(api);
    api.model = { theme: "light", nonsense: true } as unknown as RenderModel;
    await store.patch({ transpose: true });
    expect(store.state.banner).toContain("malformed");
    expect(store.state.model?.grid_cells).toHaveLength(9);
  });

  it("keeps state untouched on noop undo and skips the config refetch", async () => {
    const api = new FakeApi();
    const store = await loadedStore(api);
    const model = store.state.model;
    api.undoNoop = true;
    api.model = clone(STACKED_MODEL);
    const ok = await store.undo();
    expect(ok).toBe(true);
    expect(store.state.model).toBe(model);
    expect(api.named("getConfig")).toHaveLength(0);
  });

  it("applies the undone view when undo is effective", async () => {
    const api = new FakeApi();
    const store = await loadedStore(api);
    api.model = clone(STACKED_MODEL);
    await store.undo();
    expect(store.state.model?.col_panel.kind).toBe("stacked_bars");
    expect(api.named("getConfig")).toHaveLength(1);
  });

  it("toggles row expansion in both directions", async () => {
    const api = new FakeApi();
    const store = await loadedStore(api);
    await store.toggleRow("S3");
    expect(api.named("patchConfig")[0]?.args[1]).toEqual({ expanded_rows: ["S3"] });
    await store.toggleRow("S1");
    expect(api.named("patchConfig")[1]?.args[1]).toEqual({ expanded_rows: ["S1", "S3"] });
    await store.toggleRow("S3");
    expect(api.named("patchConfig")[2]?.args[1]).toEqual({ expanded_rows: ["S1"] });
  });

  it("zooms to a half-open column window, preserving the row window", async () => {
    const api = new FakeApi();
    const store = await loadedStore(api);
    api.config = {
      ...clone(DEFAULT_CONFIG),
      zoom: { row_window: [1, 3], col_window: null },
    };
    await store.patch({});
    api.calls = [];
    await store.zoomCols(2, 5);
    expect(api.named("patchConfig")[0]?.args[1]).toEqual({
      zoom: { row_window: [1, 3], col_window: [2, 5] },
    });
  });

  it("applies the stacked-bars preset as a single patch", async () => {
    const api = new FakeApi();
    const store = await loadedStore(api);
    await store.applyStackedPreset();
    expect(api.named("patchConfig")).toHaveLength(1);
    expect(api.named("patchConfig")[0]?.args[1]).toEqual({
      transpose: true,
      heatmap_visible: false,
      col_side_panel: "stacked_bars",
      normalization: "row_proportion",
    });
  });
});
