/** Wire types for the cellpop HTTP API. The client treats every payload as
 * immutable: views are replaced wholesale, never mutated in place. */

export type PanelKind = "none" | "bars" | "stacked_bars" | "violins";
export type Normalization = "none" | "row_proportion" | "col_proportion";
export type Theme = "light" | "dark";
export type SortDirection = "asc" | "desc";

export interface SortKey {
  /** "count_total" | "alphabetical" | "metadata(<name>)" | "hierarchy_level(<i>)" */
  field: string;
  direction: SortDirection;
}

export interface FilterPredicate {
  axis: "rows" | "cols";
  field: string;
  op: string;
  value?: unknown;
  values?: unknown[];
  min?: number | null;
  max?: number | null;
  inclusive?: boolean;
  missing_policy?: string;
}

export interface ZoomState {
  row_window: [number, number] | null;
  col_window: [number, number] | null;
}

export interface ViewConfig {
  normalization: Normalization;
  log_applied: boolean;
  transpose: boolean;
  row_sort: SortKey[];
  col_sort: SortKey[];
  filters: FilterPredicate[];
  row_group_by: string | null;
  expanded_rows: string[];
  row_side_panel: PanelKind;
  col_side_panel: PanelKind;
  heatmap_visible: boolean;
  zoom: ZoomState | null;
  theme: Theme;
  heatmap_colormap: string;
  category_colors: Record<string, string>;
}

export type ConfigPatch = Partial<ViewConfig>;

/** [row index, col index, display value, raw count, fill color] */
export type GridCell = [number, number, number, number, string];

/** [col id, bar length in 0..1, fill color] */
export type ExpandedBar = [string, number, string];

/** [entry id, total, bar length in 0..1] */
export type BarEntry = [string, number, number];

/** [category, value, fill color] */
export type StackedSegment = [string, number, string];

/** [entry id, total, bar length, segments] */
export type StackedEntry = [string, number, number, StackedSegment[]];

export interface DensityCurve {
  grid: number[];
  density: number[];
  bandwidth: number;
  n: number;
}

/** [entry id, curve or null, flat value or null] */
export type ViolinEntry = [string, DensityCurve | null, number | null];

export type PanelEntry = BarEntry | StackedEntry | ViolinEntry;

export interface Panel {
  kind: PanelKind;
  entries: PanelEntry[];
}

export interface Legend {
  colormap: string;
  vmin: number;
  vmax: number;
  ticks: number[];
  /** [position in 0..1, color] gradient stops */
  anchors: [number, string][];
}

/** [x, y, width, height] in figure-fraction units */
export type LayoutRect = [number, number, number, number];

export interface RenderModel {
  theme: Theme;
  grid_cells: GridCell[];
  expanded_rows: Record<string, ExpandedBar[]>;
  row_panel: Panel;
  col_panel: Panel;
  legend: Legend | null;
  axis_labels: { rows: string[]; cols: string[] };
  layout_units: Record<string, LayoutRect>;
  warnings: string[];
}

export interface Violation {
  field: string;
  reason: string;
}

export interface DatasetInfo {
  name: string;
  samples: number;
  cell_types: number;
}

export interface SessionInfo {
  session_id: string;
  dataset: string;
  config: ViewConfig;
}

export interface HistoryResult {
  noop: boolean;
  model: RenderModel;
}

function isRect(x: unknown): x is LayoutRect {
  return Array.isArray(x) && x.length === 4 && x.every((v) => typeof v === "number");
}

/** Structural check applied to every payload before it replaces the current
 * view; a failure renders an error banner instead of a broken page. */
export function isRenderModel(x: unknown): x is RenderModel {
  if (typeof x !== "object" || x === null) return false;
  const m = x as Record<string, unknown>;
  if (m.theme !== "light" && m.theme !== "dark") return false;
  if (!Array.isArray(m.grid_cells)) return false;
  if (typeof m.expanded_rows !== "object" || m.expanded_rows === null) return false;
  for (const panel of [m.row_panel, m.col_panel]) {
    if (typeof panel !== "object" || panel === null) return false;
    const p = panel as Record<string, unknown>;
    if (typeof p.kind !== "string" || !Array.isArray(p.entries)) return false;
  }
  if (m.legend !== null) {
    const lg = m.legend as Record<string, unknown> | null;
    if (typeof lg !== "object" || lg === null) return false;
    if (!Array.isArray(lg.ticks) || !Array.isArray(lg.anchors)) return false;
  }
  const labels = m.axis_labels as Record<string, unknown> | undefined;
  if (typeof labels !== "object" || labels === null) return false;
  if (!Array.isArray(labels.rows) || !Array.isArray(labels.cols)) return false;
  const layout = m.layout_units;
  if (typeof layout !== "object" || layout === null) return false;
  if (!Object.values(layout).every(isRect)) return false;
  if (!Array.isArray(m.warnings)) return false;
  return true;
}
