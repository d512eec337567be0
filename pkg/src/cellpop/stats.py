"""Derived quantities for side panels and reporting: totals, presence,
fractions, kernel density curves, and the per-dataset unique-type summary."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateValuesError,
    EmptyInputError,
    TooFewValuesError,
    ZeroGrandTotalError,
)
from .model import CountsMatrix, Dataset, ValueMatrix, _csv_quote

MIN_GRID_SIZE = 64


@dataclass(frozen=True, eq=False)
class DensityCurve:
    """A kernel density estimate sampled on a uniform grid.

    The grid spans [min - 3h, max + 3h], so the trapezoidal integral of
    density over grid stays within [0.99, 1.01].
    """

    grid: np.ndarray
    density: np.ndarray
    bandwidth: float
    n: int

    def integral(self) -> float:
        return float(np.trapezoid(self.density, self.grid))

    def to_dict(self) -> dict:
        return {
            "grid": [float(g) for g in self.grid],
            "density": [float(d) for d in self.density],
            "bandwidth": float(self.bandwidth),
            "n": int(self.n),
        }


def axis_totals(matrix: CountsMatrix | ValueMatrix, axis: str) -> np.ndarray:
    """Per-row or per-column sums."""
    if axis == "rows":
        return matrix.values.sum(axis=1)
    if axis == "cols":
        return matrix.values.sum(axis=0)
    raise ValueError("axis must be 'rows' or 'cols'")


def presence_counts(matrix: CountsMatrix) -> np.ndarray:
    """Per column: in how many rows the raw count is strictly positive."""
    return (matrix.values > 0).sum(axis=0)


def fraction_of_total(matrix: CountsMatrix, col_id: str) -> float:
    """Column total divided by the grand total."""
    grand = matrix.grand_total()
    if grand == 0:
        raise ZeroGrandTotalError("grand total is zero")
    col = matrix.col_index(col_id)
    return float(matrix.values[:, col].sum()) / grand


def kde(values: Sequence[float], grid_size: int = 256) -> DensityCurve:
    """Gaussian kernel density with Silverman's bandwidth.

    h = 0.9 * min(sd, IQR / 1.34) * n^(-1/5); if that collapses to zero
    (quartiles coincide) fall back to h = sd * n^(-1/5). All-equal input
    has no spread at all and raises DegenerateValuesError so the caller
    can draw a flat tick instead.
    """
    x = np.asarray(list(values), dtype=np.float64)
    n = x.size
    if n < 2:
        raise TooFewValuesError(f"need at least 2 values, got {n}")
    if np.all(x == x[0]):
        raise DegenerateValuesError("all values identical")
    if grid_size < MIN_GRID_SIZE:
        raise ValueError(f"grid_size must be >= {MIN_GRID_SIZE}")
    sd = float(x.std(ddof=1))
    iqr = float(np.percentile(x, 75) - np.percentile(x, 25))
    h = 0.9 * min(sd, iqr / 1.34) * n ** (-1 / 5)
    if h == 0:
        h = sd * n ** (-1 / 5)
    grid = np.linspace(x.min() - 3 * h, x.max() + 3 * h, grid_size)
    z = (grid[:, None] - x[None, :]) / h
    density = np.exp(-0.5 * z * z).sum(axis=1) / (n * h * math.sqrt(2 * math.pi))
    return DensityCurve(grid=grid, density=density, bandwidth=h, n=n)


@dataclass(frozen=True)
class UniqueTypeSummary:
    """Per-dataset count of cell types actually present, plus their mean."""

    entries: tuple[tuple[str, int], ...]
    mean: float


def unique_type_summary(datasets: Sequence[Dataset]) -> UniqueTypeSummary:
    """Count cell types with a positive column total in each dataset.

    The mean is reported to 2 decimals.
    """
    if not datasets:
        raise EmptyInputError("no datasets")
    entries = []
    for ds in datasets:
        present = int((ds.counts.col_totals() > 0).sum())
        entries.append((ds.name, present))
    mean = round(sum(c for _, c in entries) / len(entries), 2)
    return UniqueTypeSummary(entries=tuple(entries), mean=mean)


def summary_to_csv(summary: UniqueTypeSummary) -> str:
    """CSV with one row per dataset and a trailing mean row."""
    lines = ["dataset,name,unique_cell_types"]
    for i, (name, count) in enumerate(summary.entries, start=1):
        lines.append(f"{i},{_csv_quote(name)},{count}")
    lines.append(f"mean,,{summary.mean:.2f}")
    return "\n".join(lines) + "\n"
