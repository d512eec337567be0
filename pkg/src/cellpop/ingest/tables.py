"""CSV parsers and the Dataset assembly step.

Dialect: comma separator, double-quote quoting, \\n or \\r\\n newlines,
UTF-8. Line numbers in errors are 1-based physical lines.
"""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass

import numpy as np

from ..errors import (
    DuplicateIdError,
    EmptyFileError,
    EmptyHeaderError,
    EmptyTableError,
    MissingKeyError,
    NegativeCountError,
    NonNumericCellError,
    RaggedRowError,
    UnknownEntityError,
)
from ..model import (
    FIELD_CATEGORICAL,
    FIELD_HIERARCHY,
    FIELD_NUMERIC,
    CountsMatrix,
    Dataset,
    FieldSpec,
    MetadataTable,
)

_INT_RE = re.compile(r"^-?\d+$")
_LEVEL_RE = re.compile(r"^level_([1-9]\d*)$")


def _read_rows(text: str) -> list[tuple[int, list[str]]]:
    """CSV rows paired with their 1-based starting line numbers; blank
    lines are skipped."""
    reader = csv.reader(io.StringIO(text, newline=""))
    rows = []
    last_line = 0
    for row in reader:
        line_no = last_line + 1
        last_line = reader.line_num
        if not row or all(cell == "" for cell in row):
            continue
        rows.append((line_no, row))
    return rows


def parse_counts_csv(text: str) -> CountsMatrix:
    """Header: row-axis name then column ids; each data line: row id then
    one non-negative integer per column. Order is preserved."""
    rows = _read_rows(text)
    if not rows:
        raise EmptyFileError("counts file has no content")
    _, header = rows[0]
    col_ids = header[1:]
    if not col_ids:
        raise EmptyHeaderError("counts header declares no columns")
    data_rows = rows[1:]
    if not data_rows:
        raise EmptyFileError("counts file has no data rows")
    seen_cols = set()
    for col_id in col_ids:
        if col_id in seen_cols:
            raise DuplicateIdError("cell_types", col_id)
        seen_cols.add(col_id)
    row_ids: list[str] = []
    seen_rows: set[str] = set()
    values = np.zeros((len(data_rows), len(col_ids)), dtype=np.int64)
    for r, (line_no, cells) in enumerate(data_rows):
        if len(cells) != len(col_ids) + 1:
            raise RaggedRowError(line_no, len(col_ids) + 1, len(cells))
        row_id = cells[0]
        if row_id in seen_rows:
            raise DuplicateIdError("samples", row_id)
        seen_rows.add(row_id)
        row_ids.append(row_id)
        for c, cell in enumerate(cells[1:]):
            stripped = cell.strip()
            if not _INT_RE.match(stripped):
                raise NonNumericCellError(row_id, col_ids[c], cell)
            value = int(stripped)
            if value < 0:
                raise NegativeCountError(row_id, col_ids[c], value)
            values[r, c] = value
    return CountsMatrix(row_ids, col_ids, values)


@dataclass(frozen=True)
class CellTable:
    """Long-format (sample, cell type) pairs, one per cell."""

    rows: tuple[tuple[str, str], ...]

    def __post_init__(self):
        for sample_id, type_id in self.rows:
            if not sample_id or not type_id:
                raise ValueError("cell table ids must be non-empty")

    def __len__(self) -> int:
        return len(self.rows)


def parse_cells_csv(text: str) -> CellTable:
    """Long format with named columns `sample` and `cell_type`."""
    rows = _read_rows(text)
    if not rows:
        raise EmptyFileError("cells file has no content")
    _, header = rows[0]
    try:
        sample_col = header.index("sample")
        type_col = header.index("cell_type")
    except ValueError as exc:
        raise MissingKeyError("cells.csv: columns sample, cell_type") from exc
    width = len(header)
    pairs = []
    for line_no, cells in rows[1:]:
        if len(cells) != width:
            raise RaggedRowError(line_no, width, len(cells))
        pairs.append((cells[sample_col], cells[type_col]))
    if not pairs:
        raise EmptyTableError("cells file has no data rows")
    return CellTable(tuple(pairs))


def aggregate_cell_table(table: CellTable) -> CountsMatrix:
    """Count cells per (sample, cell type); axis orders follow first
    appearance in the table."""
    if not table.rows:
        raise EmptyTableError("cell table is empty")
    row_ids: list[str] = []
    col_ids: list[str] = []
    row_pos: dict[str, int] = {}
    col_pos: dict[str, int] = {}
    pairs = []
    for sample_id, type_id in table.rows:
        if sample_id not in row_pos:
            row_pos[sample_id] = len(row_ids)
            row_ids.append(sample_id)
        if type_id not in col_pos:
            col_pos[type_id] = len(col_ids)
            col_ids.append(type_id)
        pairs.append((row_pos[sample_id], col_pos[type_id]))
    values = np.zeros((len(row_ids), len(col_ids)), dtype=np.int64)
    for r, c in pairs:
        values[r, c] += 1
    return CountsMatrix(row_ids, col_ids, values)


def _is_decimal(text: str) -> bool:
    try:
        return math.isfinite(float(text))
    except ValueError:
        return False


def parse_metadata_csv(text: str, axis: str) -> MetadataTable:
    """Header: id column then field names. A field is numeric iff every
    non-missing value is a finite decimal; columns named level_1..level_k
    become hierarchy levels; empty cells are missing."""
    rows = _read_rows(text)
    if not rows:
        raise EmptyHeaderError("metadata file has no header")
    _, header = rows[0]
    if not header or all(cell == "" for cell in header):
        raise EmptyHeaderError("metadata header is empty")
    field_names = header[1:]
    width = len(header)
    ids: list[str] = []
    seen: set[str] = set()
    columns: list[list[str]] = [[] for _ in field_names]
    for line_no, cells in rows[1:]:
        if len(cells) != width:
            raise RaggedRowError(line_no, width, len(cells))
        entity_id = cells[0]
        if entity_id in seen:
            raise DuplicateIdError(axis, entity_id)
        seen.add(entity_id)
        ids.append(entity_id)
        for c, cell in enumerate(cells[1:]):
            columns[c].append(cell)
    catalog: list[FieldSpec] = []
    parsed: list[list] = []
    for name, column in zip(field_names, columns):
        level_match = _LEVEL_RE.match(name)
        present = [cell for cell in column if cell != ""]
        if level_match:
            kind = FIELD_HIERARCHY
            level = int(level_match.group(1))
        elif present and all(_is_decimal(cell) for cell in present):
            kind, level = FIELD_NUMERIC, None
        else:
            kind, level = FIELD_CATEGORICAL, None
        catalog.append(FieldSpec(name=name, kind=kind, level=level))
        if kind == FIELD_NUMERIC:
            parsed.append([float(c) if c != "" else None for c in column])
        else:
            parsed.append([c if c != "" else None for c in column])
    records = {}
    for i, entity_id in enumerate(ids):
        record = {}
        for spec, column in zip(catalog, parsed):
            if column[i] is not None:
                record[spec.name] = column[i]
        records[entity_id] = record
    return MetadataTable(axis, records, catalog)


def assemble_dataset(
    counts: CountsMatrix,
    sample_meta: MetadataTable | None = None,
    cell_type_meta: MetadataTable | None = None,
    name: str = "dataset",
    source_descriptor: str = "",
) -> Dataset:
    """Bundle counts and metadata; metadata ids must be a subset of the
    counts axis ids (entities without metadata read as all-missing)."""
    if sample_meta is None:
        sample_meta = MetadataTable.empty("samples")
    if cell_type_meta is None:
        cell_type_meta = MetadataTable.empty("cell_types")
    for meta, axis_ids in (
        (sample_meta, counts.row_ids),
        (cell_type_meta, counts.col_ids),
    ):
        unknown = sorted(set(meta.records) - set(axis_ids))
        if unknown:
            raise UnknownEntityError(meta.axis, unknown)
    return Dataset(
        counts=counts,
        sample_meta=sample_meta,
        cell_type_meta=cell_type_meta,
        name=name,
        source_descriptor=source_descriptor,
    )
