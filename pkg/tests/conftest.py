"""Shared fixtures: the 3x3 toy dataset and random data builders."""

from __future__ import annotations

import numpy as np
import pytest

from cellpop.ingest import assemble_dataset, parse_counts_csv, parse_metadata_csv
from cellpop.model import CountsMatrix, Dataset

TOY_COUNTS_CSV = "sample,T,B,NK\nS1,8,2,0\nS2,5,5,0\nS3,0,1,9\n"
TOY_SAMPLE_META_CSV = "sample,disease,age\nS1,healthy,40\nS2,healthy,35\nS3,CF,8\n"
TOY_TYPE_META_CSV = (
    "cell_type,lineage,level_1,level_2\n"
    "T,lymphoid,immune,T\n"
    "B,lymphoid,immune,B\n"
    "NK,lymphoid,immune,NK\n"
)


@pytest.fixture
def toy_dataset() -> Dataset:
    """3 samples x 3 cell types with disease/age sample metadata."""
    return assemble_dataset(
        parse_counts_csv(TOY_COUNTS_CSV),
        sample_meta=parse_metadata_csv(TOY_SAMPLE_META_CSV, "samples"),
        cell_type_meta=parse_metadata_csv(TOY_TYPE_META_CSV, "cell_types"),
        name="toy",
    )


@pytest.fixture
def toy_counts() -> CountsMatrix:
    return parse_counts_csv(TOY_COUNTS_CSV)


def random_counts(
    rng: np.random.Generator,
    max_rows: int = 50,
    max_cols: int = 30,
    zero_fraction: float = 0.3,
) -> CountsMatrix:
    """Random small matrix; some rows/cols forced to all zeros."""
    n_rows = int(rng.integers(1, max_rows + 1))
    n_cols = int(rng.integers(1, max_cols + 1))
    values = rng.integers(0, 100, size=(n_rows, n_cols))
    for i in range(n_rows):
        if rng.random() < zero_fraction / max(n_rows, 1):
            values[i, :] = 0
    for j in range(n_cols):
        if rng.random() < zero_fraction / max(n_cols, 1):
            values[:, j] = 0
    row_ids = tuple(f"R{i}" for i in range(n_rows))
    col_ids = tuple(f"C{j}" for j in range(n_cols))
    return CountsMatrix(row_ids, col_ids, values)


def random_dataset(rng: np.random.Generator, max_rows: int = 12, max_cols: int = 8) -> Dataset:
    """Random dataset with categorical/numeric metadata on both axes."""
    counts = random_counts(rng, max_rows=max_rows, max_cols=max_cols, zero_fraction=0.0)
    groups = ["g1", "g2", "g3"]
    sample_lines = ["sample,cohort,score"]
    for rid in counts.row_ids:
        cohort = rng.choice(groups + [""])
        score = "" if rng.random() < 0.25 else f"{rng.random() * 10:.3f}"
        sample_lines.append(f"{rid},{cohort},{score}")
    type_lines = ["cell_type,family"]
    for cid in counts.col_ids:
        family = rng.choice(["myeloid", "lymphoid", ""])
        type_lines.append(f"{cid},{family}")
    return assemble_dataset(
        counts,
        sample_meta=parse_metadata_csv("\n".join(sample_lines) + "\n", "samples"),
        cell_type_meta=parse_metadata_csv("\n".join(type_lines) + "\n", "cell_types"),
        name="random",
    )
