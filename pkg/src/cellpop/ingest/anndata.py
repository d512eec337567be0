"""Loading per-cell annotations from a zarr-backed AnnData store.

Population counts come from obs annotation columns, not the X matrix: the
plots need only the per-cell (sample, cell type) labels. Extra obs columns
are condensed to per-sample metadata by majority vote.
"""

from __future__ import annotations

import math
import warnings
from collections import Counter
from pathlib import Path

import numpy as np

from ..errors import CodeOutOfRangeError, IngestWarning, MissingKeyError
from ..model import (
    FIELD_CATEGORICAL,
    FIELD_NUMERIC,
    FieldSpec,
    MetadataTable,
)
from .tables import CellTable
from .zarr import is_array, is_group, read_array


def _as_labels(column_dir: Path) -> tuple[list[object], bool]:
    """One obs column as per-cell values; None marks a missing value.

    Returns (values, is_numeric). Categorical groups hold integer codes
    plus a categories array; code -1 is the conventional missing marker.
    """
    if is_group(column_dir):
        codes_dir = column_dir / "codes"
        categories_dir = column_dir / "categories"
        if not is_array(codes_dir):
            raise MissingKeyError(str(codes_dir))
        if not is_array(categories_dir):
            raise MissingKeyError(str(categories_dir))
        codes = read_array(codes_dir)
        categories = [str(c) for c in read_array(categories_dir).ravel().tolist()]
        values: list[object] = []
        for i, code in enumerate(codes.ravel().tolist()):
            code = int(code)
            if code == -1:
                values.append(None)
            elif 0 <= code < len(categories):
                values.append(categories[code])
            else:
                raise CodeOutOfRangeError(i, code, len(categories))
        return values, False
    if is_array(column_dir):
        data = read_array(column_dir)
        if data.dtype == object or data.dtype.kind == "U":
            return [str(v) if v != "" else None for v in data.ravel().tolist()], False
        out = []
        for v in data.ravel().tolist():
            v = float(v)
            out.append(v if math.isfinite(v) else None)
        return out, True
    raise MissingKeyError(str(column_dir))


def _majority(values: list[object]) -> tuple[object, bool]:
    """Most common non-missing value; a tie between distinct values counts
    as missing. Returns (value_or_None, tied)."""
    present = [v for v in values if v is not None]
    if not present:
        return None, False
    counts = Counter(present).most_common()
    if len(counts) > 1 and counts[0][1] == counts[1][1]:
        return None, True
    return counts[0][0], False


def load_anndata_zarr(
    root: str | Path,
    sample_key: str,
    type_key: str,
    extra_keys: tuple[str, ...] = (),
) -> tuple[CellTable, MetadataTable]:
    """Per-cell (sample, cell type) pairs plus per-sample metadata.

    Cells missing either label are skipped with one counted warning.
    Each extra obs column becomes a sample metadata field holding the
    per-sample majority value (ties go missing, with a warning).
    """
    root = Path(root)
    obs = root / "obs"
    if not obs.is_dir():
        raise MissingKeyError(str(obs))
    samples, _ = _as_labels(_require(obs, sample_key))
    types, _ = _as_labels(_require(obs, type_key))
    if len(samples) != len(types):
        raise MissingKeyError(
            f"obs/{sample_key} and obs/{type_key} lengths differ "
            f"({len(samples)} vs {len(types)})"
        )
    pairs = []
    skipped = 0
    for sample_id, type_id in zip(samples, types):
        if sample_id is None or type_id is None:
            skipped += 1
            continue
        pairs.append((str(sample_id), str(type_id)))
    if skipped:
        warnings.warn(
            f"skipped {skipped} cell(s) with missing {sample_key!r} or "
            f"{type_key!r}",
            IngestWarning,
            stacklevel=2,
        )
    table = CellTable(tuple(pairs))

    sample_order: list[str] = []
    seen = set()
    for sample_id, _ in pairs:
        if sample_id not in seen:
            seen.add(sample_id)
            sample_order.append(sample_id)
    catalog = []
    records: dict[str, dict[str, object]] = {s: {} for s in sample_order}
    for key in extra_keys:
        column, numeric = _as_labels(_require(obs, key))
        if len(column) != len(samples):
            raise MissingKeyError(
                f"obs/{key} length {len(column)} differs from obs/{sample_key} "
                f"length {len(samples)}"
            )
        catalog.append(FieldSpec(
            name=key, kind=FIELD_NUMERIC if numeric else FIELD_CATEGORICAL,
        ))
        per_sample: dict[str, list[object]] = {s: [] for s in sample_order}
        for sample_id, value in zip(samples, column):
            if sample_id is None:
                continue
            bucket = per_sample.get(str(sample_id))
            if bucket is not None:
                bucket.append(value)
        for sample_id in sample_order:
            value, tied = _majority(per_sample[sample_id])
            if tied:
                warnings.warn(
                    f"majority tie for {key!r} in sample {sample_id!r}; "
                    "value left missing",
                    IngestWarning,
                    stacklevel=2,
                )
            if value is not None:
                records[sample_id][key] = value
    meta = MetadataTable("samples", records, catalog)
    return table, meta


def _require(obs: Path, key: str) -> Path:
    column = obs / key
    if not column.exists():
        raise MissingKeyError(str(column))
    return column
