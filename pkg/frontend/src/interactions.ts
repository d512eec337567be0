/** Event wiring. Handlers are installed once on the root element and the
 * document; they survive re-renders because every lookup goes through event
 * delegation. Each user gesture funnels into exactly one store mutation,
 * and the store drops gestures that arrive while a mutation is pending. */

import type { ConfigPatch, PanelKind, ViewConfig } from "./types.js";
import type { SessionStore } from "./state.js";
import { ROW_PANEL_MAX, ROW_PANEL_MIN } from "./render.js";

export interface InteractionDeps {
  /** Starts a PNG export of the current view; wired by main. */
  exportPng(): void;
}

interface ZoomDrag {
  region: HTMLElement;
  startCol: number;
  endCol: number;
  band: HTMLElement;
}

interface ResizeDrag {
  figure: HTMLElement;
}

function colAt(region: HTMLElement, clientX: number): number {
  const nCols = Number(region.dataset.cols ?? "0");
  if (nCols <= 0) return 0;
  const rect = region.getBoundingClientRect();
  if (rect.width <= 0) return 0;
  const frac = (clientX - rect.left) / rect.width;
  return Math.max(0, Math.min(nCols - 1, Math.floor(frac * nCols)));
}

function patchFromControl(node: HTMLElement, config: ViewConfig | null): ConfigPatch | null {
  const field = node.dataset.field;
  if (!field) return null;
  if (node instanceof HTMLInputElement && node.type === "checkbox") {
    return { [field]: node.checked } as ConfigPatch;
  }
  if (node instanceof HTMLInputElement && field === "row_group_by") {
    const value = node.value.trim();
    return { row_group_by: value === "" ? null : value };
  }
  if (node instanceof HTMLSelectElement) {
    if (field === "row_side_panel" || field === "col_side_panel") {
      return { [field]: node.value as PanelKind } as ConfigPatch;
    }
    return { [field]: node.value } as ConfigPatch;
  }
  void config;
  return null;
}

export function installInteractions(
  root: HTMLElement,
  store: SessionStore,
  deps: InteractionDeps,
): () => void {
  let zoomDrag: ZoomDrag | null = null;
  let resizeDrag: ResizeDrag | null = null;

  const runAction = (action: string): void => {
    switch (action) {
      case "undo":
        void store.undo();
        break;
      case "redo":
        void store.redo();
        break;
      case "transpose":
        void store.patch({ transpose: !(store.state.config?.transpose ?? false) });
        break;
      case "reset-zoom":
        void store.resetZoom();
        break;
      case "toggle-heatmap":
        void store.patch({ heatmap_visible: !(store.state.config?.heatmap_visible ?? true) });
        break;
      case "stacked-preset":
        void store.applyStackedPreset();
        break;
      case "export-png":
        store.setLocal({ contextMenu: null });
        deps.exportPng();
        break;
      case "help":
        store.setLocal({ helpOpen: true, contextMenu: null });
        break;
      case "close-help":
        store.setLocal({ helpOpen: false });
        break;
    }
  };

  const onClick = (event: MouseEvent): void => {
    const target = event.target as HTMLElement | null;
    if (!target) return;
    const actionNode = target.closest<HTMLElement>("[data-action]");
    if (actionNode && root.contains(actionNode)) {
      runAction(actionNode.dataset.action ?? "");
      return;
    }
    const rowLabel = target.closest<HTMLElement>("button.row-label");
    if (rowLabel && root.contains(rowLabel) && rowLabel.dataset.rowId) {
      void store.toggleRow(rowLabel.dataset.rowId);
      return;
    }
    if (store.state.contextMenu) store.setLocal({ contextMenu: null });
  };

  const onChange = (event: Event): void => {
    const target = event.target as HTMLElement | null;
    if (!target || !root.contains(target)) return;
    const patch = patchFromControl(target, store.state.config);
    if (patch) void store.patch(patch);
  };

  const onContextMenu = (event: MouseEvent): void => {
    const target = event.target as HTMLElement | null;
    const region = target?.closest<HTMLElement>(".region-heatmap");
    if (!region || !root.contains(region)) return;
    event.preventDefault();
    store.setLocal({ contextMenu: { x: event.clientX, y: event.clientY } });
  };

  const onMouseDown = (event: MouseEvent): void => {
    if (event.button !== 0) return;
    const target = event.target as HTMLElement | null;
    if (!target) return;
    const handle = target.closest<HTMLElement>(".resize-handle");
    if (handle && root.contains(handle)) {
      const figure = handle.closest<HTMLElement>(".figure");
      if (figure) {
        resizeDrag = { figure };
        event.preventDefault();
      }
      return;
    }
    const region = target.closest<HTMLElement>(".region-heatmap");
    if (!region || !root.contains(region)) return;
    const start = colAt(region, event.clientX);
    const band = document.createElement("div");
    band.className = "zoom-band";
    region.appendChild(band);
    zoomDrag = { region, startCol: start, endCol: start, band };
    event.preventDefault();
  };

  const onMouseMove = (event: MouseEvent): void => {
    if (resizeDrag) {
      const rect = resizeDrag.figure.getBoundingClientRect();
      if (rect.width > 0) {
        const width = (rect.right - event.clientX) / rect.width;
        store.setLocal({
          rowPanelWidth: Math.min(ROW_PANEL_MAX, Math.max(ROW_PANEL_MIN, width)),
        });
      }
      return;
    }
    if (!zoomDrag) return;
    zoomDrag.endCol = colAt(zoomDrag.region, event.clientX);
    const nCols = Number(zoomDrag.region.dataset.cols ?? "1");
    const lo = Math.min(zoomDrag.startCol, zoomDrag.endCol);
    const hi = Math.max(zoomDrag.startCol, zoomDrag.endCol) + 1;
    zoomDrag.band.style.left = `${(lo / nCols) * 100}%`;
    zoomDrag.band.style.width = `${((hi - lo) / nCols) * 100}%`;
  };

  const onMouseUp = (): void => {
    if (resizeDrag) {
      resizeDrag = null;
      return;
    }
    if (!zoomDrag) return;
    const { startCol, endCol, band } = zoomDrag;
    band.remove();
    zoomDrag = null;
    const lo = Math.min(startCol, endCol);
    const hi = Math.max(startCol, endCol) + 1;
    // A plain click (no horizontal travel) is not a zoom gesture.
    if (hi - lo <= 1) return;
    void store.zoomCols(lo, hi);
  };

  const onKeyDown = (event: KeyboardEvent): void => {
    if (!event.ctrlKey || event.altKey || event.metaKey) return;
    if (event.key.toLowerCase() !== "z") return;
    event.preventDefault();
    if (event.shiftKey) void store.redo();
    else void store.undo();
  };

  root.addEventListener("click", onClick);
  root.addEventListener("change", onChange);
  root.addEventListener("contextmenu", onContextMenu);
  root.addEventListener("mousedown", onMouseDown);
  document.addEventListener("mousemove", onMouseMove);
  document.addEventListener("mouseup", onMouseUp);
  document.addEventListener("keydown", onKeyDown);

  return () => {
    root.removeEventListener("click", onClick);
    root.removeEventListener("change", onChange);
    root.removeEventListener("contextmenu", onContextMenu);
    root.removeEventListener("mousedown", onMouseDown);
    document.removeEventListener("mousemove", onMouseMove);
    document.removeEventListener("mouseup", onMouseUp);
    document.removeEventListener("keydown", onKeyDown);
  };
}
