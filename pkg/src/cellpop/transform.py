"""View pipeline: filter, group, normalize, log, sort, transpose, zoom.

All functions are pure over immutable inputs, so one Dataset can serve any
number of concurrent views.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    InvalidConfigError,
    NumericFieldNotGroupableError,
    UnknownFieldError,
)
from .model import (
    COUNT_TOTAL,
    FIELD_NUMERIC,
    CountsMatrix,
    Dataset,
    FilterPredicate,
    MetadataTable,
    SortKey,
    ValueMatrix,
    ViewConfig,
    validate_config,
)


@dataclass(frozen=True)
class DisplayedView:
    """What the renderer consumes: displayed values plus the raw counts
    behind them (for tooltips and side panels) and the final axis orders."""

    values: ValueMatrix
    raw: CountsMatrix
    row_order: tuple[str, ...]
    col_order: tuple[str, ...]
    warnings: tuple[str, ...] = ()


def _predicate_holds(
    pred: FilterPredicate, entity_id: str, total: int, meta: MetadataTable
) -> bool:
    if pred.field == COUNT_TOTAL:
        value: object = total
    else:
        if not meta.has_field(pred.field):
            raise UnknownFieldError(pred.field)
        value = meta.value(entity_id, pred.field)
    if value is None:
        return pred.missing_policy == "include"
    if pred.op == "equals":
        return value == pred.value
    if pred.op == "in_set":
        return value in pred.values
    low, high = pred.low, pred.high
    if pred.inclusive:
        return (low is None or value >= low) and (high is None or value <= high)
    return (low is None or value > low) and (high is None or value < high)


def apply_filters(
    dataset: Dataset, predicates: Sequence[FilterPredicate]
) -> CountsMatrix:
    """Keep exactly the rows/columns satisfying all predicates on their axis.

    Order is preserved. count_total predicates evaluate against pre-filter
    totals. An empty result is not an error; empty matrices flow through
    the pipeline and render as empty views.
    """
    counts = dataset.counts
    row_keep = np.ones(len(counts.row_ids), dtype=bool)
    col_keep = np.ones(len(counts.col_ids), dtype=bool)
    row_totals = counts.row_totals()
    col_totals = counts.col_totals()
    for pred in predicates:
        if pred.axis == "samples":
            ids, totals, keep, meta = (
                counts.row_ids, row_totals, row_keep, dataset.sample_meta,
            )
        else:
            ids, totals, keep, meta = (
                counts.col_ids, col_totals, col_keep, dataset.cell_type_meta,
            )
        for i, entity_id in enumerate(ids):
            if keep[i] and not _predicate_holds(pred, entity_id, int(totals[i]), meta):
                keep[i] = False
    return counts.submatrix(row_keep, col_keep)


UNASSIGNED_GROUP = "unassigned"


def group_rows(matrix: CountsMatrix, meta: MetadataTable, field: str) -> CountsMatrix:
    """Collapse rows to one per distinct field value, summing counts.

    Rows with a missing value fall into the "unassigned" group. Group order
    follows first appearance in the current row order.
    """
    if not meta.has_field(field):
        raise UnknownFieldError(field)
    if meta.field(field).kind == FIELD_NUMERIC:
        raise NumericFieldNotGroupableError(field)
    labels = []
    for row_id in matrix.row_ids:
        value = meta.value(row_id, field)
        labels.append(UNASSIGNED_GROUP if value is None else str(value))
    order: list[str] = []
    position: dict[str, int] = {}
    for label in labels:
        if label not in position:
            position[label] = len(order)
            order.append(label)
    summed = np.zeros((len(order), len(matrix.col_ids)), dtype=np.int64)
    for label, row in zip(labels, matrix.values):
        summed[position[label]] += row
    return CountsMatrix(order, matrix.col_ids, summed)


def normalize(matrix: CountsMatrix, mode: str) -> ValueMatrix:
    """Counts to reals: as-is, per-row proportions, or per-column proportions.

    Rows (or columns) that sum to zero stay all-zero rather than dividing
    to NaN.
    """
    values = matrix.values.astype(np.float64)
    if mode == "none":
        return ValueMatrix(matrix.row_ids, matrix.col_ids, values, "raw_count")
    if mode == "row_proportion":
        totals = values.sum(axis=1, keepdims=True)
    elif mode == "col_proportion":
        totals = values.sum(axis=0, keepdims=True)
    else:
        raise ValueError(f"unknown normalization mode {mode!r}")
    out = np.divide(values, totals, out=np.zeros_like(values), where=totals > 0)
    return ValueMatrix(matrix.row_ids, matrix.col_ids, out, mode)


def log_scale(values: ValueMatrix) -> ValueMatrix:
    """Apply x -> log10(1 + x) entry-wise; zero maps to zero."""
    return ValueMatrix(
        values.row_ids,
        values.col_ids,
        np.log10(1.0 + values.values),
        values.base_kind,
        log_applied=True,
    )


def _axis_ids_and_totals(matrix: CountsMatrix, axis: str) -> tuple[tuple[str, ...], np.ndarray]:
    if axis == "rows":
        return matrix.row_ids, matrix.row_totals()
    if axis == "cols":
        return matrix.col_ids, matrix.col_totals()
    raise ValueError("axis must be 'rows' or 'cols'")


def sort_axis(
    ids: Sequence[str],
    keys: Sequence[SortKey],
    matrix: CountsMatrix,
    meta: MetadataTable,
    axis: str = "rows",
) -> list[str]:
    """Stable lexicographic multi-key sort of axis ids.

    count_total compares the current matrix's axis totals (pre-normalization);
    alphabetical compares ids case-insensitively with the exact id as
    tiebreak; metadata and hierarchy keys place missing values last whatever
    the direction. The final implicit tiebreak is id ascending.
    """
    axis_ids, axis_totals = _axis_ids_and_totals(matrix, axis)
    totals = dict(zip(axis_ids, (int(t) for t in axis_totals)))

    def key_fn(sort_key: SortKey):
        if sort_key.kind == "count_total":
            return lambda i: (False, totals[i])
        if sort_key.kind == "alphabetical":
            return lambda i: (False, (i.lower(), i))
        if sort_key.kind == "metadata":
            name = sort_key.metadata_name
            if not meta.has_field(name):
                raise UnknownFieldError(name)
            return lambda i: ((v := meta.value(i, name)) is None, v)
        spec = meta.hierarchy_field(sort_key.hierarchy_level)
        if spec is None:
            raise UnknownFieldError(sort_key.field)
        return lambda i: ((v := meta.value(i, spec.name)) is None, v)

    order = sorted(ids)
    # apply keys last-to-first so earlier keys dominate under stable sorting
    for sort_key in reversed(list(keys)):
        fn = key_fn(sort_key)
        present = [i for i in order if not fn(i)[0]]
        missing = [i for i in order if fn(i)[0]]
        present.sort(key=lambda i: fn(i)[1], reverse=sort_key.direction == "desc")
        order = present + missing
    return order


def _ordered_counts(
    dataset: Dataset, config: ViewConfig
) -> tuple[CountsMatrix, list[str], list[str]]:
    counts = apply_filters(dataset, config.filters)
    if config.row_group_by is not None:
        counts = group_rows(counts, dataset.sample_meta, config.row_group_by)
    row_order = sort_axis(
        counts.row_ids, config.row_sort, counts, dataset.sample_meta, axis="rows"
    )
    col_order = sort_axis(
        counts.col_ids, config.col_sort, counts, dataset.cell_type_meta, axis="cols"
    )
    return counts, row_order, col_order


def displayed_axis_ids(
    dataset: Dataset, config: ViewConfig
) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """Displayed (row_ids, col_ids) after filter/group/sort/transpose, before
    zoom. Zoom windows and expanded_rows are defined against these."""
    counts, row_order, col_order = _ordered_counts(dataset, config)
    del counts
    if config.transpose:
        row_order, col_order = col_order, row_order
    return tuple(row_order), tuple(col_order)


def apply_view(dataset: Dataset, config: ViewConfig) -> DisplayedView:
    """Run the full pipeline: filter, group, normalize, log, sort rows,
    sort cols, transpose, zoom.

    Transposing swaps the axes and every row/col-qualified role downstream
    of it; zoom windows then slice the displayed orders.
    """
    violations = validate_config(dataset, config)
    if violations:
        raise InvalidConfigError(violations)
    counts, row_order, col_order = _ordered_counts(dataset, config)
    values = normalize(counts, config.normalization)
    if config.log_applied:
        values = log_scale(values)
    raw = counts.reordered(row_order, col_order)
    values = values.reordered(row_order, col_order)
    if config.transpose:
        raw = raw.transposed()
        values = values.transposed()
    if config.zoom is not None:
        raw = raw.sliced(config.zoom.row_window, config.zoom.col_window)
        values = values.sliced(config.zoom.row_window, config.zoom.col_window)
    return DisplayedView(
        values=values,
        raw=raw,
        row_order=raw.row_ids,
        col_order=raw.col_ids,
        warnings=(),
    )
