/** Wire payloads captured verbatim from a live server running the toy
 * dataset (3 samples x 3 cell types). Tests deep-clone before use so no
 * test can contaminate another through shared references. */

import type { RenderModel, ViewConfig } from "../src/types.js";

export const DEFAULT_CONFIG: ViewConfig = {
  normalization: "none",
  log_applied: false,
  transpose: false,
  row_sort: [{ field: "count_total", direction: "desc" }],
  col_sort: [{ field: "count_total", direction: "desc" }],
  filters: [],
  row_group_by: null,
  expanded_rows: [],
  row_side_panel: "bars",
  col_side_panel: "bars",
  heatmap_visible: true,
  zoom: null,
  theme: "light",
  heatmap_colormap: "ocean",
  category_colors: {},
};

export const TOY_MODEL: RenderModel = {
  theme: "light",
  grid_cells: [
    [0, 0, 8.0, 8, "#cfd727"],
    [0, 1, 0.0, 0, "#132b6b"],
    [0, 2, 2.0, 2, "#156f7b"],
    [1, 0, 5.0, 5, "#48aa4b"],
    [1, 1, 0.0, 0, "#132b6b"],
    [1, 2, 5.0, 5, "#48aa4b"],
    [2, 0, 0.0, 0, "#132b6b"],
    [2, 1, 9.0, 9, "#f6e61f"],
    [2, 2, 1.0, 1, "#144d73"],
  ],
  expanded_rows: {},
  row_panel: {
    kind: "bars",
    entries: [
      ["S1", 10.0, 1.0],
      ["S2", 10.0, 1.0],
      ["S3", 10.0, 1.0],
    ],
  },
  col_panel: {
    kind: "bars",
    entries: [
      ["T", 13.0, 1.0],
      ["NK", 9.0, 0.6923076923076923],
      ["B", 8.0, 0.6153846153846154],
    ],
  },
  legend: {
    colormap: "ocean",
    vmin: 0.0,
    vmax: 9.0,
    ticks: [0.0, 2.25, 4.5, 6.75, 9.0],
    anchors: [
      [0.0, "#132b6b"],
      [0.25, "#15787d"],
      [0.5, "#2fa352"],
      [0.75, "#9fc431"],
      [1.0, "#f6e61f"],
    ],
  },
  axis_labels: { rows: ["S1", "S2", "S3"], cols: ["T", "NK", "B"] },
  layout_units: {
    heatmap: [0.1, 0.24, 0.63, 0.56],
    row_labels: [0.0, 0.24, 0.1, 0.56],
    col_panel: [0.1, 0.0, 0.63, 0.24],
    row_panel: [0.73, 0.24, 0.27, 0.56],
    col_labels: [0.1, 0.8, 0.63, 0.12],
    legend: [0.1, 0.92, 0.63, 0.08],
  },
  warnings: [],
};

/** Same view with row S3 expanded: its heatmap cells are replaced by a
 * per-cell-type bar strip. */
export const EXPANDED_MODEL: RenderModel = {
  ...structuredClone(TOY_MODEL),
  grid_cells: [
    [0, 0, 8.0, 8, "#cfd727"],
    [0, 1, 0.0, 0, "#132b6b"],
    [0, 2, 2.0, 2, "#156f7b"],
    [1, 0, 5.0, 5, "#48aa4b"],
    [1, 1, 0.0, 0, "#132b6b"],
    [1, 2, 5.0, 5, "#48aa4b"],
  ],
  expanded_rows: {
    S3: [
      ["T", 0.0, "#4e79a7"],
      ["NK", 1.0, "#f28e2b"],
      ["B", 0.1111111111111111, "#e15759"],
    ],
  },
};

/** The one-click composition preset: transposed, heatmap hidden, stacked
 * bars of row proportions in the column panel. */
export const STACKED_MODEL: RenderModel = {
  theme: "light",
  grid_cells: [],
  expanded_rows: {},
  row_panel: {
    kind: "bars",
    entries: [
      ["T", 13.0, 1.0],
      ["NK", 9.0, 0.6923076923076923],
      ["B", 8.0, 0.6153846153846154],
    ],
  },
  col_panel: {
    kind: "stacked_bars",
    entries: [
      [
        "S1",
        1.0,
        1.0,
        [
          ["T", 0.8, "#4e79a7"],
          ["NK", 0.0, "#f28e2b"],
          ["B", 0.2, "#e15759"],
        ],
      ],
      [
        "S2",
        1.0,
        1.0,
        [
          ["T", 0.5, "#4e79a7"],
          ["NK", 0.0, "#f28e2b"],
          ["B", 0.5, "#e15759"],
        ],
      ],
      [
        "S3",
        1.0,
        1.0,
        [
          ["T", 0.0, "#4e79a7"],
          ["NK", 0.9, "#f28e2b"],
          ["B", 0.1, "#e15759"],
        ],
      ],
    ],
  },
  legend: null,
  axis_labels: { rows: ["T", "NK", "B"], cols: ["S1", "S2", "S3"] },
  layout_units: {
    col_panel: [0.1, 0.0, 0.63, 0.8],
    row_panel: [0.73, 0.24, 0.27, 0.56],
    col_labels: [0.1, 0.8, 0.63, 0.12],
  },
  warnings: [],
};

export function clone<T>(value: T): T {
  return structuredClone(value);
}
