/** DOM renderer. A render pass rebuilds the page from the current state; it
 * never talks to the server and never mutates the payloads it is given, so
 * the page is always a pure function of the last server response plus local
 * UI flags. */

import { isRenderModel } from "./types.js";
import type {
  BarEntry,
  ExpandedBar,
  LayoutRect,
  Legend,
  Panel,
  RenderModel,
  StackedEntry,
  ViewConfig,
  ViolinEntry,
  Violation,
} from "./types.js";
import type { ClientState } from "./state.js";

const SVG_NS = "http://www.w3.org/2000/svg";

/** Smallest and largest width the row panel can be dragged to. */
export const ROW_PANEL_MIN = 0.08;
export const ROW_PANEL_MAX = 0.6;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function pct(v: number): string {
  return `${(v * 100).toFixed(4)}%`;
}

function place(node: HTMLElement, rect: LayoutRect): void {
  node.style.left = pct(rect[0]);
  node.style.top = pct(rect[1]);
  node.style.width = pct(rect[2]);
  node.style.height = pct(rect[3]);
}

function formatNumber(v: number): string {
  if (Number.isInteger(v)) return String(v);
  return String(parseFloat(v.toFixed(3)));
}

/** Applies the client-only row panel width override: the panel keeps its
 * right edge, everything left of it rescales proportionally. */
export function remapRect(
  rect: LayoutRect,
  name: string,
  panel: LayoutRect | undefined,
  width: number | null,
): LayoutRect {
  if (width === null || !panel) return rect;
  const f = Math.min(ROW_PANEL_MAX, Math.max(ROW_PANEL_MIN, width));
  const boundary = panel[0];
  const right = panel[0] + panel[2];
  const newBoundary = right - f;
  if (name === "row_panel") return [newBoundary, rect[1], f, rect[3]];
  if (boundary <= 0) return rect;
  const scale = newBoundary / boundary;
  if (rect[0] + rect[2] <= boundary + 1e-9) {
    return [rect[0] * scale, rect[1], rect[2] * scale, rect[3]];
  }
  return rect;
}

function renderHeatmap(region: HTMLElement, model: RenderModel): void {
  const rows = model.axis_labels.rows;
  const cols = model.axis_labels.cols;
  const nRows = Math.max(rows.length, 1);
  const nCols = Math.max(cols.length, 1);
  region.dataset.rows = String(rows.length);
  region.dataset.cols = String(cols.length);
  for (const [r, c, value, raw, color] of model.grid_cells) {
    const cell = el("div", "cell");
    cell.style.left = pct(c / nCols);
    cell.style.top = pct(r / nRows);
    cell.style.width = pct(1 / nCols);
    cell.style.height = pct(1 / nRows);
    cell.style.backgroundColor = color;
    cell.title = `${rows[r] ?? r} × ${cols[c] ?? c}: ${formatNumber(value)} (raw ${raw})`;
    region.appendChild(cell);
  }
  for (const [rowId, bars] of Object.entries(model.expanded_rows)) {
    const r = rows.indexOf(rowId);
    if (r < 0) continue;
    const strip = el("div", "expanded-strip");
    strip.dataset.rowId = rowId;
    strip.style.left = "0";
    strip.style.top = pct(r / nRows);
    strip.style.width = "100%";
    strip.style.height = pct(1 / nRows);
    for (const [colId, length, color] of bars as ExpandedBar[]) {
      const c = cols.indexOf(colId);
      if (c < 0) continue;
      const slot = el("div", "expanded-slot");
      slot.style.left = pct(c / nCols);
      slot.style.width = pct(1 / nCols);
      const bar = el("div", "expanded-bar");
      bar.style.height = pct(Math.max(0, Math.min(1, length)));
      bar.style.backgroundColor = color;
      bar.title = `${rowId} × ${colId}`;
      slot.appendChild(bar);
      strip.appendChild(slot);
    }
    region.appendChild(strip);
  }
}

function violinSvg(entry: ViolinEntry, horizontal: boolean): SVGSVGElement {
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", "0 0 100 100");
  svg.setAttribute("preserveAspectRatio", "none");
  svg.classList.add("violin");
  const [, curve, flat] = entry;
  if (curve && curve.grid.length > 1) {
    const lo = curve.grid[0] ?? 0;
    const hi = curve.grid[curve.grid.length - 1] ?? 1;
    const span = hi - lo || 1;
    const peak = Math.max(...curve.density, 1e-12);
    const upper: string[] = [];
    const lower: string[] = [];
    curve.grid.forEach((g, i) => {
      const d = (curve.density[i] ?? 0) / peak;
      const along = ((g - lo) / span) * 100;
      const half = d * 48;
      if (horizontal) {
        upper.push(`${along},${50 - half}`);
        lower.unshift(`${along},${50 + half}`);
      } else {
        upper.push(`${50 - half},${100 - along}`);
        lower.unshift(`${50 + half},${100 - along}`);
      }
    });
    const polygon = document.createElementNS(SVG_NS, "polygon");
    polygon.setAttribute("points", [...upper, ...lower].join(" "));
    polygon.classList.add("violin-shape");
    svg.appendChild(polygon);
  } else if (flat !== null) {
    // Degenerate distribution: a single tick at the flat value's position.
    const line = document.createElementNS(SVG_NS, "line");
    line.classList.add("violin-flat");
    if (horizontal) {
      line.setAttribute("x1", "50");
      line.setAttribute("x2", "50");
      line.setAttribute("y1", "10");
      line.setAttribute("y2", "90");
    } else {
      line.setAttribute("x1", "10");
      line.setAttribute("x2", "90");
      line.setAttribute("y1", "50");
      line.setAttribute("y2", "50");
    }
    svg.appendChild(line);
  }
  return svg;
}

/** Renders a side panel; `horizontal` means bars grow along the x axis
 * (row panel), otherwise they grow upward (column panel). */
function renderPanel(region: HTMLElement, panel: Panel, horizontal: boolean): void {
  region.dataset.kind = panel.kind;
  if (panel.kind === "none") return;
  const n = Math.max(panel.entries.length, 1);
  panel.entries.forEach((entry, i) => {
    const slot = el("div", horizontal ? "panel-slot slot-h" : "panel-slot slot-v");
    if (horizontal) {
      slot.style.top = pct(i / n);
      slot.style.height = pct(1 / n);
    } else {
      slot.style.left = pct(i / n);
      slot.style.width = pct(1 / n);
    }
    slot.dataset.entryId = String(entry[0]);
    if (panel.kind === "bars") {
      const [id, total, length] = entry as BarEntry;
      const bar = el("div", "bar");
      if (horizontal) bar.style.width = pct(Math.max(0, Math.min(1, length)));
      else bar.style.height = pct(Math.max(0, Math.min(1, length)));
      bar.title = `${id}: ${formatNumber(total)}`;
      slot.appendChild(bar);
    } else if (panel.kind === "stacked_bars") {
      const [id, total, length, segments] = entry as StackedEntry;
      const bar = el("div", "stacked-bar");
      if (horizontal) bar.style.width = pct(Math.max(0, Math.min(1, length)));
      else bar.style.height = pct(Math.max(0, Math.min(1, length)));
      const denom = total > 0 ? total : 1;
      for (const [category, value, color] of segments) {
        const seg = el("div", "segment");
        const frac = Math.max(0, value / denom);
        if (horizontal) seg.style.width = pct(frac);
        else seg.style.height = pct(frac);
        seg.style.backgroundColor = color;
        seg.title = `${id} / ${category}: ${formatNumber(value)}`;
        seg.dataset.category = category;
        bar.appendChild(seg);
      }
      slot.appendChild(bar);
    } else {
      slot.appendChild(violinSvg(entry as ViolinEntry, horizontal));
    }
    region.appendChild(slot);
  });
}

function renderLegend(region: HTMLElement, legend: Legend): void {
  const gradient = el("div", "legend-gradient");
  const stops = legend.anchors
    .map(([pos, color]) => `${color} ${(pos * 100).toFixed(2)}%`)
    .join(", ");
  gradient.style.background = `linear-gradient(to right, ${stops})`;
  gradient.dataset.stops = stops;
  region.appendChild(gradient);
  const ticksRow = el("div", "legend-ticks");
  for (const tick of legend.ticks) {
    ticksRow.appendChild(el("span", "legend-tick", formatNumber(tick)));
  }
  region.appendChild(ticksRow);
}

function renderFigure(container: HTMLElement, model: RenderModel, state: ClientState): void {
  const figure = el("div", "figure");
  const panelRect = model.layout_units.row_panel;
  for (const [name, rawRect] of Object.entries(model.layout_units)) {
    const rect = remapRect(rawRect, name, panelRect, state.rowPanelWidth);
    const region = el("div", `region region-${name.replace(/_/g, "-")}`);
    region.dataset.region = name;
    place(region, rect);
    if (name === "heatmap") {
      renderHeatmap(region, model);
    } else if (name === "row_labels") {
      const n = Math.max(model.axis_labels.rows.length, 1);
      model.axis_labels.rows.forEach((rowId, i) => {
        const btn = el("button", "row-label", rowId);
        btn.type = "button";
        btn.dataset.rowId = rowId;
        btn.style.top = pct(i / n);
        btn.style.height = pct(1 / n);
        btn.title = `toggle per-cell-type breakdown for ${rowId}`;
        region.appendChild(btn);
      });
    } else if (name === "col_labels") {
      const n = Math.max(model.axis_labels.cols.length, 1);
      model.axis_labels.cols.forEach((colId, i) => {
        const label = el("div", "col-label", colId);
        label.style.left = pct(i / n);
        label.style.width = pct(1 / n);
        region.appendChild(label);
      });
    } else if (name === "row_panel") {
      renderPanel(region, model.row_panel, true);
      const handle = el("div", "resize-handle");
      handle.title = "drag to resize the row panel";
      region.appendChild(handle);
    } else if (name === "col_panel") {
      renderPanel(region, model.col_panel, false);
    } else if (name === "legend" && model.legend) {
      renderLegend(region, model.legend);
    }
    figure.appendChild(region);
  }
  container.appendChild(figure);
}

interface Control {
  field: keyof ViewConfig;
  label: string;
  node: HTMLElement;
}

function selectControl(
  field: keyof ViewConfig,
  label: string,
  options: string[],
  value: string,
): Control {
  const select = el("select");
  select.dataset.field = field;
  for (const opt of options) {
    const o = el("option", undefined, opt);
    o.value = opt;
    if (opt === value) o.selected = true;
    select.appendChild(o);
  }
  return { field, label, node: select };
}

function checkboxControl(field: keyof ViewConfig, label: string, value: boolean): Control {
  const input = el("input");
  input.type = "checkbox";
  input.dataset.field = field;
  input.checked = value;
  return { field, label, node: input };
}

function renderConfigPanel(
  container: HTMLElement,
  config: ViewConfig,
  violations: Violation[],
): void {
  const aside = el("aside", "config-panel");
  aside.appendChild(el("h2", undefined, "View options"));
  const panelKinds = ["none", "bars", "stacked_bars", "violins"];
  const controls: Control[] = [
    selectControl(
      "normalization",
      "Normalization",
      ["none", "row_proportion", "col_proportion"],
      config.normalization,
    ),
    checkboxControl("log_applied", "Log scale", config.log_applied),
    checkboxControl("transpose", "Transpose", config.transpose),
    checkboxControl("heatmap_visible", "Show heatmap", config.heatmap_visible),
    selectControl("row_side_panel", "Row panel", panelKinds, config.row_side_panel),
    selectControl("col_side_panel", "Column panel", panelKinds, config.col_side_panel),
    selectControl(
      "heatmap_colormap",
      "Colormap",
      ["ocean", "ember", "ice", "grays"],
      config.heatmap_colormap,
    ),
    selectControl("theme", "Theme", ["light", "dark"], config.theme),
  ];
  const groupBy = el("input");
  groupBy.type = "text";
  groupBy.dataset.field = "row_group_by";
  groupBy.value = config.row_group_by ?? "";
  groupBy.placeholder = "metadata column";
  controls.push({ field: "row_group_by", label: "Group rows by", node: groupBy });

  for (const control of controls) {
    const rowDiv = el("label", "config-row");
    rowDiv.appendChild(el("span", "config-label", control.label));
    rowDiv.appendChild(control.node);
    aside.appendChild(rowDiv);
    for (const violation of violations) {
      if (violation.field === control.field || violation.field.startsWith(`${control.field}.`)) {
        const note = el("div", "violation", violation.reason);
        note.dataset.field = violation.field;
        aside.appendChild(note);
      }
    }
  }
  // Violations on fields without a dedicated control still need a home.
  const shownFields = new Set(controls.map((c) => c.field as string));
  for (const violation of violations) {
    const base = violation.field.split(".")[0] ?? violation.field;
    if (!shownFields.has(base)) {
      const note = el("div", "violation", `${violation.field}: ${violation.reason}`);
      note.dataset.field = violation.field;
      aside.appendChild(note);
    }
  }
  container.appendChild(aside);
}

function renderContextMenu(root: HTMLElement, state: ClientState): void {
  if (!state.contextMenu) return;
  const menu = el("ul", "context-menu");
  menu.style.left = `${state.contextMenu.x}px`;
  menu.style.top = `${state.contextMenu.y}px`;
  const items: [string, string][] = [
    ["transpose", "Transpose"],
    ["reset-zoom", "Reset zoom"],
    ["toggle-heatmap", "Toggle heatmap"],
    ["stacked-preset", "Stacked bar view"],
    ["export-png", "Export PNG"],
  ];
  for (const [action, label] of items) {
    const item = el("li", "menu-item", label);
    item.dataset.action = action;
    menu.appendChild(item);
  }
  root.appendChild(menu);
}

function renderHelp(root: HTMLElement, state: ClientState): void {
  if (!state.helpOpen) return;
  const overlay = el("div", "help-overlay");
  const card = el("div", "help-card");
  card.appendChild(el("h2", undefined, "Keyboard shortcuts"));
  const list = el("dl");
  const entries: [string, string][] = [
    ["Ctrl+Z", "Undo the last view change"],
    ["Ctrl+Shift+Z", "Redo an undone view change"],
  ];
  for (const [keys, what] of entries) {
    const dt = el("dt");
    dt.appendChild(el("kbd", undefined, keys));
    list.appendChild(dt);
    list.appendChild(el("dd", undefined, what));
  }
  card.appendChild(list);
  card.appendChild(
    el("p", "help-hints", "Click a row label to expand it. Drag across heatmap columns to zoom."),
  );
  const close = el("button", "help-close", "Close");
  close.type = "button";
  close.dataset.action = "close-help";
  card.appendChild(close);
  overlay.appendChild(card);
  root.appendChild(overlay);
}

/** Rebuilds the whole page under `root` from `state`. */
export function render(root: HTMLElement, state: ClientState, dataset: string): void {
  const theme = state.model?.theme ?? "light";
  root.className = `app theme-${theme}${state.pending ? " pending" : ""}`;
  root.replaceChildren();

  const header = el("header", "topbar");
  const heading = el("h1", "title", "cellpop");
  heading.appendChild(el("span", "dataset-name", ` ${dataset}`));
  header.appendChild(heading);
  const toolbar = el("div", "toolbar");
  const buttons: [string, string][] = [
    ["undo", "Undo"],
    ["redo", "Redo"],
    ["stacked-preset", "Stacked bars"],
    ["export-png", "Export PNG"],
    ["help", "Help"],
  ];
  for (const [action, label] of buttons) {
    const btn = el("button", "tool", label);
    btn.type = "button";
    btn.dataset.action = action;
    toolbar.appendChild(btn);
  }
  header.appendChild(toolbar);
  root.appendChild(header);

  if (state.banner) {
    root.appendChild(el("div", "error-banner", state.banner));
  }

  const model = state.model;
  const modelOk = model !== null && isRenderModel(model);
  if (model !== null && !modelOk && !state.banner) {
    root.appendChild(el("div", "error-banner", "malformed view payload from server"));
  }

  if (modelOk && model.warnings.length > 0) {
    const strip = el("div", "warnings");
    for (const w of model.warnings) strip.appendChild(el("span", "warning", w));
    root.appendChild(strip);
  }

  const workspace = el("div", "workspace");
  if (modelOk) renderFigure(workspace, model, state);
  if (state.config) renderConfigPanel(workspace, state.config, state.violations);
  root.appendChild(workspace);

  renderContextMenu(root, state);
  renderHelp(root, state);

  if (state.pending) {
    for (const node of root.querySelectorAll<HTMLElement>("button, select, input")) {
      (node as HTMLButtonElement).disabled = true;
    }
  }
}
