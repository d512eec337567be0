"""Resolution-independent render model built from a displayed view.

All geometry is expressed in abstract 0..1 layout units; pixel mapping
happens in the SVG renderer and in web clients, so one model serves both.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Any, Mapping

import numpy as np

from ..errors import (
    DegenerateValuesError,
    InconsistentViewConfigError,
    TooFewValuesError,
)
from ..model import ViewConfig
from ..stats import DensityCurve, kde
from ..transform import DisplayedView
from .colors import ColorScale
from .palettes import CATEGORY_PALETTE

PANEL_GRID_SIZE = 128

# Region rectangles (x, y, w, h) in 0..1 units, y growing downward.
# The heatmap gets 70% of each shared span, side panels the remaining 30%.
REGION_COL_PANEL = (0.10, 0.00, 0.63, 0.24)
REGION_HEATMAP = (0.10, 0.24, 0.63, 0.56)
REGION_ROW_LABELS = (0.00, 0.24, 0.10, 0.56)
REGION_ROW_PANEL = (0.73, 0.24, 0.27, 0.56)
REGION_COL_LABELS = (0.10, 0.80, 0.63, 0.12)
REGION_LEGEND = (0.10, 0.92, 0.63, 0.08)
# Without a heatmap the column panel takes over the freed vertical span.
REGION_COL_PANEL_FULL = (0.10, 0.00, 0.63, 0.80)


@dataclass(frozen=True, eq=False)
class BarEntry:
    """One plain bar: its axis entity, raw total, and length as a fraction
    of the panel maximum."""

    entity_id: str
    total: float
    length: float

    def to_list(self) -> list:
        return [self.entity_id, self.total, self.length]


@dataclass(frozen=True, eq=False)
class StackedEntry:
    """One stacked bar: segments in cross-axis display order; segment values
    sum to the bar total."""

    entity_id: str
    total: float
    length: float
    segments: tuple[tuple[str, float, str], ...]  # (category id, value, color)

    def to_list(self) -> list:
        return [
            self.entity_id,
            self.total,
            self.length,
            [list(seg) for seg in self.segments],
        ]


@dataclass(frozen=True, eq=False)
class ViolinEntry:
    """One violin: a density curve, or a flat tick value when the entity's
    values are too few or all identical."""

    entity_id: str
    curve: DensityCurve | None
    flat_value: float | None

    def to_list(self) -> list:
        return [
            self.entity_id,
            self.curve.to_dict() if self.curve is not None else None,
            self.flat_value,
        ]


@dataclass(frozen=True, eq=False)
class Panel:
    kind: str  # none | bars | stacked_bars | violins
    entries: tuple

    def to_dict(self) -> dict:
        return {"kind": self.kind, "entries": [e.to_list() for e in self.entries]}


@dataclass(frozen=True, eq=False)
class Legend:
    colormap: str
    vmin: float
    vmax: float
    ticks: tuple[float, ...]
    anchors: tuple[tuple[float, str], ...]

    def to_dict(self) -> dict:
        return {
            "colormap": self.colormap,
            "vmin": self.vmin,
            "vmax": self.vmax,
            "ticks": list(self.ticks),
            "anchors": [list(a) for a in self.anchors],
        }


@dataclass(frozen=True, eq=False)
class RenderModel:
    """Everything a renderer needs, with no pixel coordinates.

    grid_cells hold (row index, col index, displayed value, raw count, color)
    for every non-expanded heatmap cell in row-major display order.
    expanded_rows pair each expanded row id with its per-column bars
    (col id, length as fraction of the row max, color), in display order.
    """

    theme: str
    grid_cells: list
    expanded_rows: tuple[tuple[str, tuple[tuple[str, float, str], ...]], ...]
    row_panel: Panel
    col_panel: Panel
    legend: Legend | None
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    layout_units: Mapping[str, tuple[float, float, float, float]]
    warnings: tuple[str, ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "theme": self.theme,
            "grid_cells": [list(cell) for cell in self.grid_cells],
            "expanded_rows": {
                row_id: [list(bar) for bar in bars]
                for row_id, bars in self.expanded_rows
            },
            "row_panel": self.row_panel.to_dict(),
            "col_panel": self.col_panel.to_dict(),
            "legend": self.legend.to_dict() if self.legend else None,
            "axis_labels": {
                "rows": list(self.row_labels),
                "cols": list(self.col_labels),
            },
            "layout_units": {
                name: list(rect) for name, rect in self.layout_units.items()
            },
            "warnings": list(self.warnings),
        }


def preset_stacked_bars(config: ViewConfig) -> ViewConfig:
    """The classic cell-population plot: transpose, hide the heatmap, stack
    per-sample proportions in the column side panel."""
    return replace(
        config,
        transpose=True,
        heatmap_visible=False,
        col_side_panel="stacked_bars",
        normalization="row_proportion",
    )


def _category_colors(
    ids: tuple[str, ...], overrides: Mapping[str, str]
) -> tuple[dict[str, str], bool]:
    colors = {}
    repeated = False
    for i, entity_id in enumerate(ids):
        if entity_id in overrides:
            colors[entity_id] = overrides[entity_id]
        else:
            if i >= len(CATEGORY_PALETTE):
                repeated = True
            colors[entity_id] = CATEGORY_PALETTE[i % len(CATEGORY_PALETTE)]
    return colors, repeated


def _bars_panel(ids: tuple[str, ...], totals: np.ndarray) -> Panel:
    peak = float(totals.max()) if totals.size else 0.0
    entries = tuple(
        BarEntry(
            entity_id=entity_id,
            total=float(total),
            length=float(total) / peak if peak > 0 else 0.0,
        )
        for entity_id, total in zip(ids, totals.tolist())
    )
    return Panel(kind="bars", entries=entries)


def _stacked_panel(
    ids: tuple[str, ...],
    categories: tuple[str, ...],
    values: np.ndarray,  # rows = ids, cols = categories
    colors: Mapping[str, str],
) -> Panel:
    totals = values.sum(axis=1)
    peak = float(totals.max()) if totals.size else 0.0
    entries = []
    for i, entity_id in enumerate(ids):
        segments = tuple(
            (cat, float(values[i, j]), colors[cat])
            for j, cat in enumerate(categories)
        )
        total = float(totals[i])
        entries.append(StackedEntry(
            entity_id=entity_id,
            total=total,
            length=total / peak if peak > 0 else 0.0,
            segments=segments,
        ))
    return Panel(kind="stacked_bars", entries=tuple(entries))


def _violin_panel(ids: tuple[str, ...], values: np.ndarray) -> Panel:
    """values rows correspond to ids; each violin summarizes one row."""
    entries = []
    for i, entity_id in enumerate(ids):
        row = values[i]
        try:
            curve = kde(row, PANEL_GRID_SIZE)
            entries.append(ViolinEntry(entity_id, curve, None))
        except (TooFewValuesError, DegenerateValuesError):
            flat = float(row[0]) if row.size else None
            entries.append(ViolinEntry(entity_id, None, flat))
    return Panel(kind="violins", entries=tuple(entries))


def _build_panel(
    kind: str,
    ids: tuple[str, ...],
    raw_axis_totals: np.ndarray,
    own_axis_values: np.ndarray,  # displayed values, rows aligned to ids
    categories: tuple[str, ...],
    category_colors: Mapping[str, str],
) -> Panel:
    if kind == "none":
        return Panel(kind="none", entries=())
    if kind == "bars":
        return _bars_panel(ids, raw_axis_totals)
    if kind == "stacked_bars":
        return _stacked_panel(ids, categories, own_axis_values, category_colors)
    return _violin_panel(ids, own_axis_values)


def build_render_model(view: DisplayedView, config: ViewConfig) -> RenderModel:
    """Assemble heatmap cells, expanded bar rows, side panels, and legend.

    Expanded rows replace their heatmap cells with per-column bars scaled
    to the row maximum. The color domain spans all displayed values, so
    zooming rescales contrast.
    """
    values_m, raw_m = view.values, view.raw
    if (values_m.row_ids != raw_m.row_ids or values_m.col_ids != raw_m.col_ids
            or view.row_order != values_m.row_ids
            or view.col_order != values_m.col_ids):
        raise InconsistentViewConfigError(
            "displayed matrices and axis orders disagree"
        )
    rows, cols = view.row_order, view.col_order
    values = values_m.values
    raw = raw_m.values
    warnings: list[str] = []

    overrides = config.category_colors
    col_colors: dict[str, str] = {}
    row_colors: dict[str, str] = {}
    needs_col_categories = bool(config.expanded_rows) or config.row_side_panel == "stacked_bars"
    needs_row_categories = config.col_side_panel == "stacked_bars"
    if needs_col_categories:
        col_colors, repeated = _category_colors(cols, overrides)
        if repeated:
            warnings.append(
                "column palette repeats: more than "
                f"{len(CATEGORY_PALETTE)} categories"
            )
    if needs_row_categories:
        row_colors, repeated = _category_colors(rows, overrides)
        if repeated:
            warnings.append(
                "row palette repeats: more than "
                f"{len(CATEGORY_PALETTE)} categories"
            )

    expanded_ids = config.expanded_rows & set(rows)
    expanded_rows = []
    for i, row_id in enumerate(rows):
        if row_id not in expanded_ids:
            continue
        row = values[i]
        peak = float(row.max()) if row.size else 0.0
        bars = tuple(
            (col_id, float(v) / peak if peak > 0 else 0.0, col_colors[col_id])
            for col_id, v in zip(cols, row.tolist())
        )
        expanded_rows.append((row_id, bars))

    grid_cells: list = []
    legend = None
    nonempty = values.size > 0
    if config.heatmap_visible and nonempty:
        vmin, vmax = float(values.min()), float(values.max())
        scale = ColorScale.from_colormap(config.heatmap_colormap, vmin, vmax)
        if expanded_ids:
            keep = np.array([r not in expanded_ids for r in rows])
            kept_idx = np.flatnonzero(keep)
        else:
            kept_idx = np.arange(len(rows))
        n_cols = len(cols)
        if kept_idx.size and n_cols:
            sub = values[kept_idx]
            colors = scale.map_values(sub)
            row_indices = np.repeat(kept_idx, n_cols).tolist()
            col_indices = np.tile(np.arange(n_cols), kept_idx.size).tolist()
            grid_cells = list(zip(
                row_indices,
                col_indices,
                sub.ravel().tolist(),
                raw[kept_idx].ravel().tolist(),
                colors,
            ))
        legend = Legend(
            colormap=config.heatmap_colormap,
            vmin=vmin,
            vmax=vmax,
            ticks=tuple(scale.ticks(5)),
            anchors=scale.anchors,
        )

    row_panel = _build_panel(
        config.row_side_panel, rows, raw.sum(axis=1), values, cols, col_colors,
    )
    col_panel = _build_panel(
        config.col_side_panel, cols, raw.sum(axis=0), values.T, rows, row_colors,
    )

    layout: dict[str, tuple[float, float, float, float]] = {}
    if config.heatmap_visible:
        layout["heatmap"] = REGION_HEATMAP
        layout["row_labels"] = REGION_ROW_LABELS
    if config.col_side_panel != "none":
        layout["col_panel"] = (
            REGION_COL_PANEL if config.heatmap_visible else REGION_COL_PANEL_FULL
        )
    if config.row_side_panel != "none":
        layout["row_panel"] = REGION_ROW_PANEL
    layout["col_labels"] = REGION_COL_LABELS
    if legend is not None:
        layout["legend"] = REGION_LEGEND

    return RenderModel(
        theme=config.theme,
        grid_cells=grid_cells,
        expanded_rows=tuple(expanded_rows),
        row_panel=row_panel,
        col_panel=col_panel,
        legend=legend,
        row_labels=rows,
        col_labels=cols,
        layout_units=layout,
        warnings=tuple(warnings),
    )
