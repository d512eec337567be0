import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { installInteractions } from "../src/interactions.js";
import { render } from "../src/render.js";
import { SessionStore } from "../src/state.js";
import type { ConfigPatch, RenderModel, ViewConfig } from "../src/types.js";
import { DEFAULT_CONFIG, TOY_MODEL, clone } from "./fixtures.js";

interface Deferred<T> {
  promise: Promise<T>;
  resolve: (value: T) => void;
}

function deferred<T>(): Deferred<T> {
  let resolve!: (value: T) => void;
  const promise = new Promise<T>((res) => {
    resolve = res;
  });
  return { promise, resolve };
}

/** Fake server with real undo/redo semantics over the config, so replayed
 * interactions can be checked end to end. */
class FakeApi {
  patches: ConfigPatch[] = [];
  undoCalls = 0;
  redoCalls = 0;
  config: ViewConfig = clone(DEFAULT_CONFIG);
  model: RenderModel = clone(TOY_MODEL);
  private past: ViewConfig[] = [];
  private future: ViewConfig[] = [];
  patchGate: Deferred<RenderModel> | null = null;
  failPatchWith: unknown = null;

  asClient(): ApiClient {
    return this as unknown as ApiClient;
  }

  async getView(): Promise<RenderModel> {
    return clone(this.model);
  }

  async getConfig(): Promise<ViewConfig> {
    return clone(this.config);
  }

  async patchConfig(_sessionId: string, patch: ConfigPatch): Promise<RenderModel> {
    this.patches.push(clone(patch));
    if (this.failPatchWith) throw this.failPatchWith;
    if (this.patchGate) await this.patchGate.promise;
    this.past.push(this.config);
    this.future = [];
    this.config = { ...this.config, ...patch } as ViewConfig;
    return clone(this.model);
  }

  async undo(): Promise<{ noop: boolean; model: RenderModel }> {
    this.undoCalls += 1;
    const previous = this.past.pop();
    if (previous === undefined) return { noop: true, model: clone(this.model) };
    this.future.push(this.config);
    this.config = previous;
    return { noop: false, model: clone(this.model) };
  }

  async redo(): Promise<{ noop: boolean; model: RenderModel }> {
    this.redoCalls += 1;
    const next = this.future.pop();
    if (next === undefined) return { noop: true, model: clone(this.model) };
    this.past.push(this.config);
    this.config = next;
    return { noop: false, model: clone(this.model) };
  }
}

let root: HTMLElement;
let api: FakeApi;
let store: SessionStore;
let exportCalls: number;
let uninstall: (() => void) | null = null;

async function setup(model?: RenderModel): Promise<void> {
  uninstall?.();
  document.body.innerHTML = '<div id="app"></div>';
  root = document.getElementById("app") as HTMLElement;
  api = new FakeApi();
  if (model) api.model = model;
  store = new SessionStore(api.asClient(), "sess", "toy");
  store.subscribe((state) => render(root, state, "toy"));
  exportCalls = 0;
  uninstall = installInteractions(root, store, {
    exportPng: () => {
      exportCalls += 1;
    },
  });
  await store.load();
}

function settle(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}

function click(target: Element): void {
  target.dispatchEvent(new MouseEvent("click", { bubbles: true, button: 0 }));
}

function keydown(init: KeyboardEventInit): void {
  document.dispatchEvent(new KeyboardEvent("keydown", { bubbles: true, ...init }));
}

beforeEach(async () => {
  await setup();
});

describe("row expansion", () => {
  it("maps a row label click to exactly one config POST", async () => {
    click(root.querySelector('button[data-row-id="S3"]')!);
    await settle();
    expect(api.patches).toEqual([{ expanded_rows: ["S3"] }]);
  });

  it("drops clicks that land while a mutation is pending", async () => {
    api.patchGate = deferred<RenderModel>();
    click(root.querySelector('button[data-row-id="S3"]')!);
    await settle();
    expect(store.state.pending).toBe(true);
    expect(root.querySelector<HTMLButtonElement>('button[data-row-id="S1"]')?.disabled).toBe(
      true,
    );
    click(root.querySelector('button[data-row-id="S1"]')!);
    await settle();
    api.patchGate.resolve(clone(TOY_MODEL));
    await settle();
    expect(api.patches).toHaveLength(1);
    expect(store.state.pending).toBe(false);
  });

  it("collapses an expanded row on the second click", async () => {
    click(root.querySelector('button[data-row-id="S3"]')!);
    await settle();
    click(root.querySelector('button[data-row-id="S3"]')!);
    await settle();
    expect(api.patches).toEqual([{ expanded_rows: ["S3"] }, { expanded_rows: [] }]);
  });
});

describe("keyboard shortcuts", () => {
  it("maps Ctrl+Z to a single undo request", async () => {
    keydown({ key: "z", ctrlKey: true });
    await settle();
    expect(api.undoCalls).toBe(1);
    expect(api.redoCalls).toBe(0);
  });

  it("maps Ctrl+Shift+Z to a single redo request", async () => {
    keydown({ key: "Z", ctrlKey: true, shiftKey: true });
    await settle();
    expect(api.redoCalls).toBe(1);
    expect(api.undoCalls).toBe(0);
  });

  it("ignores plain Z and Alt-modified chords", async () => {
    keydown({ key: "z" });
    keydown({ key: "z", ctrlKey: true, altKey: true });
    await settle();
    expect(api.undoCalls).toBe(0);
  });

  it("restores the pre-action state via undo after an expansion", async () => {
    click(root.querySelector('button[data-row-id="S3"]')!);
    await settle();
    expect(store.state.config?.expanded_rows).toEqual(["S3"]);
    keydown({ key: "z", ctrlKey: true });
    await settle();
    expect(store.state.config?.expanded_rows).toEqual([]);
  });

  it("replays interactions identically after an undo/redo pair", async () => {
    click(root.querySelector('button[data-row-id="S3"]')!);
    await settle();
    keydown({ key: "z", ctrlKey: true });
    await settle();
    keydown({ key: "Z", ctrlKey: true, shiftKey: true });
    await settle();
    expect(store.state.config?.expanded_rows).toEqual(["S3"]);
    click(root.querySelector('button[data-row-id="S3"]')!);
    await settle();
    expect(store.state.config?.expanded_rows).toEqual([]);
    expect(api.patches).toEqual([{ expanded_rows: ["S3"] }, { expanded_rows: [] }]);
  });
});

describe("zoom drag", () => {
  it("turns a drag across columns 2..5 into the half-open window [2, 5)", async () => {
    const wide = clone(TOY_MODEL);
    wide.axis_labels = { rows: ["S1", "S2", "S3"], cols: ["C0", "C1", "C2", "C3", "C4", "C5"] };
    wide.grid_cells = [];
    await setup(wide);
    const region = root.querySelector<HTMLElement>(".region-heatmap")!;
    expect(region.dataset.cols).toBe("6");
    region.getBoundingClientRect = () =>
      ({ left: 0, top: 0, width: 600, height: 400, right: 600, bottom: 400 }) as DOMRect;
    region.dispatchEvent(
      new MouseEvent("mousedown", { bubbles: true, button: 0, clientX: 250, clientY: 10 }),
    );
    document.dispatchEvent(new MouseEvent("mousemove", { clientX: 450, clientY: 12 }));
    expect(root.querySelector(".zoom-band")).not.toBeNull();
    document.dispatchEvent(new MouseEvent("mouseup", { clientX: 450, clientY: 12 }));
    await settle();
    expect(api.patches).toEqual([
      { zoom: { row_window: null, col_window: [2, 5] } },
    ]);
  });

  it("treats a click without horizontal travel as no zoom", async () => {
    const region = root.querySelector<HTMLElement>(".region-heatmap")!;
    region.getBoundingClientRect = () =>
      ({ left: 0, top: 0, width: 600, height: 400, right: 600, bottom: 400 }) as DOMRect;
    region.dispatchEvent(
      new MouseEvent("mousedown", { bubbles: true, button: 0, clientX: 250, clientY: 10 }),
    );
    document.dispatchEvent(new MouseEvent("mouseup", { clientX: 252, clientY: 11 }));
    await settle();
    expect(api.patches).toHaveLength(0);
  });
});

describe("config panel round trip", () => {
  it("maps a select change to one patch", async () => {
    const select = root.querySelector<HTMLSelectElement>('select[data-field="normalization"]')!;
    select.value = "row_proportion";
    select.dispatchEvent(new Event("change", { bubbles: true }));
    await settle();
    expect(api.patches).toEqual([{ normalization: "row_proportion" }]);
    expect(store.state.config?.normalization).toBe("row_proportion");
  });

  it("maps checkbox changes to boolean patches", async () => {
    const box = root.querySelector<HTMLInputElement>('input[data-field="transpose"]')!;
    box.checked = true;
    box.dispatchEvent(new Event("change", { bubbles: true }));
    await settle();
    expect(api.patches).toEqual([{ transpose: true }]);
  });

  it("sends null when the group-by field is cleared", async () => {
    const input = root.querySelector<HTMLInputElement>('input[data-field="row_group_by"]')!;
    input.value = "  ";
    input.dispatchEvent(new Event("change", { bubbles: true }));
    await settle();
    expect(api.patches).toEqual([{ row_group_by: null }]);
  });

  it("rolls the panel back and shows the violation inline on 422", async () => {
    api.failPatchWith = new ApiError(422, "invalid_config", [
      { field: "row_group_by", reason: "unknown metadata column" },
    ]);
    const input = root.querySelector<HTMLInputElement>('input[data-field="row_group_by"]')!;
    input.value = "nope";
    input.dispatchEvent(new Event("change", { bubbles: true }));
    await settle();
    const note = root.querySelector<HTMLElement>(".violation");
    expect(note?.textContent).toBe("unknown metadata column");
    const rolledBack = root.querySelector<HTMLInputElement>('input[data-field="row_group_by"]')!;
    expect(rolledBack.value).toBe("");
    expect(store.state.config?.row_group_by).toBeNull();
  });
});

describe("context menu", () => {
  it("opens on right click over the heatmap and patches transpose", async () => {
    const region = root.querySelector<HTMLElement>(".region-heatmap")!;
    region.dispatchEvent(
      new MouseEvent("contextmenu", { bubbles: true, clientX: 120, clientY: 80 }),
    );
    const menu = root.querySelector<HTMLElement>(".context-menu");
    expect(menu).not.toBeNull();
    click(menu!.querySelector('[data-action="transpose"]')!);
    await settle();
    expect(api.patches).toEqual([{ transpose: true }]);
    expect(root.querySelector(".context-menu")).toBeNull();
  });

  it("closes on a plain click elsewhere without any request", async () => {
    const region = root.querySelector<HTMLElement>(".region-heatmap")!;
    region.dispatchEvent(
      new MouseEvent("contextmenu", { bubbles: true, clientX: 10, clientY: 10 }),
    );
    expect(root.querySelector(".context-menu")).not.toBeNull();
    click(root.querySelector(".figure")!);
    await settle();
    expect(root.querySelector(".context-menu")).toBeNull();
    expect(api.patches).toHaveLength(0);
  });
});

describe("toolbar", () => {
  it("applies the stacked-bars preset in one patch", async () => {
    click(root.querySelector('[data-action="stacked-preset"]')!);
    await settle();
    expect(api.patches).toEqual([
      {
        transpose: true,
        heatmap_visible: false,
        col_side_panel: "stacked_bars",
        normalization: "row_proportion",
      },
    ]);
  });

  it("invokes the export flow from the toolbar", async () => {
    click(root.querySelector('[data-action="export-png"]')!);
    expect(exportCalls).toBe(1);
  });

  it("opens and closes the help overlay", async () => {
    click(root.querySelector('[data-action="help"]')!);
    expect(root.querySelector(".help-overlay")).not.toBeNull();
    click(root.querySelector('[data-action="close-help"]')!);
    expect(root.querySelector(".help-overlay")).toBeNull();
    expect(api.patches).toHaveLength(0);
  });
});

describe("row panel resize", () => {
  it("updates the client-side width without touching the server", async () => {
    const figure = root.querySelector<HTMLElement>(".figure")!;
    figure.getBoundingClientRect = () =>
      ({ left: 0, top: 0, width: 1000, height: 750, right: 1000, bottom: 750 }) as DOMRect;
    const handle = root.querySelector<HTMLElement>(".resize-handle")!;
    handle.dispatchEvent(new MouseEvent("mousedown", { bubbles: true, button: 0, clientX: 730 }));
    document.dispatchEvent(new MouseEvent("mousemove", { clientX: 650 }));
    document.dispatchEvent(new MouseEvent("mouseup", {}));
    await settle();
    expect(store.state.rowPanelWidth).toBeCloseTo(0.35, 12);
    expect(api.patches).toHaveLength(0);
    const panel = root.querySelector<HTMLElement>(".region-row-panel")!;
    expect(parseFloat(panel.style.width)).toBeCloseTo(35, 6);
  });
});
