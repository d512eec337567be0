"""Filesystem dataset discovery.

Each subdirectory of the data directory is one dataset, named after the
directory. Input precedence inside a dataset directory: counts.csv, then
cells.csv, then a zarr store (a child directory containing .zgroup, or the
dataset directory itself). samples.csv / cell_types.csv add metadata.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..errors import CellpopError, DatasetLoadError
from ..model import Dataset, MetadataTable
from .anndata import load_anndata_zarr
from .tables import (
    aggregate_cell_table,
    assemble_dataset,
    parse_cells_csv,
    parse_counts_csv,
    parse_metadata_csv,
)
from .zarr import is_group

DEFAULT_SAMPLE_KEY = "sample"
DEFAULT_TYPE_KEY = "cell_type"


def _find_zarr_store(directory: Path) -> Path | None:
    if is_group(directory):
        return directory
    for child in sorted(p for p in directory.iterdir() if p.is_dir()):
        if is_group(child):
            return child
    return None


def _read_text(path: Path) -> str:
    return path.read_text(encoding="utf-8")


def load_dataset_path(directory: str | Path, name: str | None = None) -> Dataset:
    """Load one dataset directory into a Dataset."""
    directory = Path(directory)
    if name is None:
        name = directory.name
    counts_csv = directory / "counts.csv"
    cells_csv = directory / "cells.csv"
    sample_meta: MetadataTable | None = None
    cell_type_meta: MetadataTable | None = None

    samples_csv = directory / "samples.csv"
    if samples_csv.is_file():
        sample_meta = parse_metadata_csv(_read_text(samples_csv), "samples")
    types_csv = directory / "cell_types.csv"
    if types_csv.is_file():
        cell_type_meta = parse_metadata_csv(_read_text(types_csv), "cell_types")

    if counts_csv.is_file():
        counts = parse_counts_csv(_read_text(counts_csv))
        source = str(counts_csv)
    elif cells_csv.is_file():
        counts = aggregate_cell_table(parse_cells_csv(_read_text(cells_csv)))
        source = str(cells_csv)
    else:
        store = _find_zarr_store(directory)
        if store is None:
            raise CellpopError(
                f"{directory}: no counts.csv, cells.csv, or zarr store"
            )
        options_path = directory / "anndata.json"
        options = {}
        if options_path.is_file():
            options = json.loads(_read_text(options_path))
        table, obs_meta = load_anndata_zarr(
            store,
            sample_key=options.get("sample_key", DEFAULT_SAMPLE_KEY),
            type_key=options.get("type_key", DEFAULT_TYPE_KEY),
            extra_keys=tuple(options.get("extra_obs", ())),
        )
        counts = aggregate_cell_table(table)
        if sample_meta is None and obs_meta.field_catalog:
            sample_meta = obs_meta
        source = str(store)
    return assemble_dataset(
        counts,
        sample_meta=sample_meta,
        cell_type_meta=cell_type_meta,
        name=name,
        source_descriptor=source,
    )


def discover_datasets(data_dir: str | Path) -> dict[str, Dataset]:
    """Load every dataset subdirectory; results keyed and ordered by name.

    A directory that fails to parse aborts discovery with a DatasetLoadError
    naming the offending source.
    """
    data_dir = Path(data_dir)
    if not data_dir.is_dir():
        raise DatasetLoadError(str(data_dir), NotADirectoryError("not a directory"))
    datasets: dict[str, Dataset] = {}
    for child in sorted(p for p in data_dir.iterdir() if p.is_dir()):
        try:
            datasets[child.name] = load_dataset_path(child)
        except CellpopError as exc:
            if isinstance(exc, DatasetLoadError):
                raise
            raise DatasetLoadError(str(child), exc) from exc
        except (OSError, ValueError, json.JSONDecodeError) as exc:
            raise DatasetLoadError(str(child), exc) from exc
    return datasets
