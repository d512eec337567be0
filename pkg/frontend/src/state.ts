/** Client-side session state. The server owns every transform; this store
 * only tracks the last payloads it received plus purely presentational flags
 * (pending, banners, open menus). One mutation may be in flight at a time:
 * further mutation attempts are dropped until the active one settles, so a
 * user action maps to at most one POST. */

import { ApiClient, ApiError } from "./api.js";
import { isRenderModel } from "./types.js";
import type { ConfigPatch, RenderModel, ViewConfig, Violation } from "./types.js";

export interface ClientState {
  model: RenderModel | null;
  config: ViewConfig | null;
  /** true while a mutation round-trip is in flight; inputs are disabled */
  pending: boolean;
  /** fatal-ish message shown in the error banner, null when healthy */
  banner: string | null;
  /** per-field validation failures from the last rejected patch */
  violations: Violation[];
  /** open context menu position in page pixels, null when closed */
  contextMenu: { x: number; y: number } | null;
  helpOpen: boolean;
  /** client-only width override for the row panel, fraction of the figure */
  rowPanelWidth: number | null;
}

export type Listener = (state: ClientState) => void;

function initialState(): ClientState {
  return {
    model: null,
    config: null,
    pending: false,
    banner: null,
    violations: [],
    contextMenu: null,
    helpOpen: false,
    rowPanelWidth: null,
  };
}

export class SessionStore {
  readonly sessionId: string;
  readonly dataset: string;
  readonly state: ClientState;
  private readonly api: ApiClient;
  private readonly listeners = new Set<Listener>();

  constructor(api: ApiClient, sessionId: string, dataset: string) {
    this.api = api;
    this.sessionId = sessionId;
    this.dataset = dataset;
    this.state = initialState();
  }

  subscribe(fn: Listener): () => void {
    this.listeners.add(fn);
    return () => this.listeners.delete(fn);
  }

  private notify(): void {
    for (const fn of this.listeners) fn(this.state);
  }

  /** Updates presentation-only fields; never talks to the server. */
  setLocal(partial: Partial<ClientState>): void {
    Object.assign(this.state, partial);
    this.notify();
  }

  /** Fetches the current view and config to seed the store. */
  async load(): Promise<void> {
    try {
      const model = await this.api.getView(this.sessionId);
      const config = await this.api.getConfig(this.sessionId);
      this.accept(model, config);
      this.notify();
    } catch (err) {
      this.state.banner = describe(err);
      this.notify();
    }
  }

  /** Installs a payload pair, rejecting structurally invalid views. */
  private accept(model: unknown, config: ViewConfig): void {
    if (!isRenderModel(model)) {
      this.state.banner = "malformed view payload from server";
      return;
    }
    this.state.model = model;
    this.state.config = config;
    this.state.banner = null;
  }

  /** Runs one server mutation. Returns false without any request when
   * another mutation is already pending. */
  private async mutate(run: () => Promise<void>): Promise<boolean> {
    if (this.state.pending) return false;
    this.state.pending = true;
    this.state.violations = [];
    this.state.contextMenu = null;
    this.notify();
    let ok = true;
    try {
      await run();
    } catch (err) {
      ok = false;
      if (err instanceof ApiError && err.code === "invalid_config" && Array.isArray(err.detail)) {
        // Server state is unchanged; keeping the old config makes the
        // next render roll the form back to the last valid values.
        this.state.violations = err.detail as Violation[];
      } else {
        this.state.banner = describe(err);
      }
    } finally {
      this.state.pending = false;
      this.notify();
    }
    return ok;
  }

  /** Sends one config patch; on success the response view and the refreshed
   * config replace local state atomically (single notify). */
  patch(patch: ConfigPatch): Promise<boolean> {
    return this.mutate(async () => {
      const model = await this.api.patchConfig(this.sessionId, patch);
      const config = await this.api.getConfig(this.sessionId);
      this.accept(model, config);
    });
  }

  undo(): Promise<boolean> {
    return this.mutate(async () => {
      const result = await this.api.undo(this.sessionId);
      if (result.noop) return;
      const config = await this.api.getConfig(this.sessionId);
      this.accept(result.model, config);
    });
  }

  redo(): Promise<boolean> {
    return this.mutate(async () => {
      const result = await this.api.redo(this.sessionId);
      if (result.noop) return;
      const config = await this.api.getConfig(this.sessionId);
      this.accept(result.model, config);
    });
  }

  /** Expands a collapsed row or collapses an expanded one. */
  toggleRow(rowId: string): Promise<boolean> {
    const current = new Set(this.state.config?.expanded_rows ?? []);
    if (current.has(rowId)) current.delete(rowId);
    else current.add(rowId);
    return this.patch({ expanded_rows: [...current].sort() });
  }

  /** Zooms to the half-open column window [start, end). */
  zoomCols(start: number, end: number): Promise<boolean> {
    const zoom = this.state.config?.zoom ?? { row_window: null, col_window: null };
    return this.patch({ zoom: { row_window: zoom.row_window, col_window: [start, end] } });
  }

  resetZoom(): Promise<boolean> {
    return this.patch({ zoom: null });
  }

  /** One-click composition view: transposed stacked bars of row proportions. */
  applyStackedPreset(): Promise<boolean> {
    return this.patch({
      transpose: true,
      heatmap_visible: false,
      col_side_panel: "stacked_bars",
      normalization: "row_proportion",
    });
  }
}

function describe(err: unknown): string {
  if (err instanceof ApiError) return `request failed: ${err.code} (HTTP ${err.status})`;
  if (err instanceof Error) return `request failed: ${err.message}`;
  return `request failed: ${String(err)}`;
}
