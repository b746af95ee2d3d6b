"""CSV loading with schema validation against the producer's documented columns."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

SCHEMAS = {
    "trajectory": ["tau", "n", "re_c", "im_c", "abs2"],
    "wavefunction": ["tau", "phi", "re_psi", "im_psi", "abs2"],
    "bands": ["f", "band", "re_E", "im_E"],
    "levels": ["tau", "n", "e_diabatic"],
    "adiabatic": ["tau", "band", "re_E", "im_E"],
    "overlap": ["tau", "re_psi0_full", "re_psi0_off", "abs_diff"],
}


class SchemaError(ValueError):
    """Input CSV does not match the documented producer schema."""


def load_csv(path: Path, kind: str) -> dict[str, np.ndarray]:
    """Load one artifact, checking its header against the schema for ``kind``.

    Returns a column-name -> float array mapping.  Raises SchemaError naming
    the first offending column, or when the file carries no data rows.
    """
    required = SCHEMAS[kind]
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"{path}: file not found")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        for col in required:
            if col not in header:
                raise SchemaError(f"{path}: missing column {col!r} (found {header})")
        idx = [header.index(col) for col in required]
        rows = [[float(row[i]) for i in idx] for row in reader if row]
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    data = np.asarray(rows, float)
    return {col: data[:, k] for k, col in enumerate(required)}


def pivot(keys_a: np.ndarray, keys_b: np.ndarray, values: np.ndarray):
    """Long-form (a, b, value) triplets to a dense grid.

    Returns (sorted unique a, sorted unique b, grid[a_idx, b_idx]).
    """
    ua, ia = np.unique(keys_a, return_inverse=True)
    ub, ib = np.unique(keys_b, return_inverse=True)
    grid = np.full((len(ua), len(ub)), np.nan)
    grid[ia, ib] = values
    if np.isnan(grid).any():
        raise SchemaError("incomplete grid: some (row, column) pairs are missing")
    return ua, ub, grid
