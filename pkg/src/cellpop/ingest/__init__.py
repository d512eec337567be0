"""Parsers turning CSV files, per-cell tables, and zarr stores into Datasets."""

from .tables import (
    CellTable,
    aggregate_cell_table,
    assemble_dataset,
    parse_cells_csv,
    parse_counts_csv,
    parse_metadata_csv,
)
from .anndata import load_anndata_zarr
from .discover import discover_datasets, load_dataset_path

__all__ = [
    "CellTable",
    "aggregate_cell_table",
    "assemble_dataset",
    "discover_datasets",
    "load_anndata_zarr",
    "load_dataset_path",
    "parse_cells_csv",
    "parse_counts_csv",
    "parse_metadata_csv",
]
