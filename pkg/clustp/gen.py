"""
Synthetic clustered Euclidean instances.

Two families: ``grid`` (uniform points, clusters are the cells of an R x C
grid, named like ``4rand76-2x2``) and ``clustered`` (Gaussian clouds around
random centers, named like ``10rand51``). Both are complete graphs and are
fully determined by their seed.
"""

from __future__ import annotations

from typing import List, Optional

import numpy as np

from clustp import settings
from clustp.core import ClusteredInstance, build_instance
from clustp.errors import DataError, UnableToPopulateCellsError
from clustp.rng import make_rng

MAX_GRID_ATTEMPTS = 100


def generate_grid(
    n: int,
    rows: int,
    cols: int,
    extent: float = 1000.0,
    seed: int = 0,
    name: Optional[str] = None,
) -> ClusteredInstance:
    cells = rows * cols
    if rows < 1 or cols < 1:
        raise DataError(f"grid needs rows, cols >= 1 (got {rows}x{cols})")
    if n < cells:
        raise DataError(f"{n} points cannot populate {cells} cells")

    rng = make_rng(seed)
    for attempt in range(1, MAX_GRID_ATTEMPTS + 1):
        points = rng.uniform(0.0, extent, size=(n, 2))
        col_idx = np.minimum((points[:, 0] / extent * cols).astype(np.int64), cols - 1)
        row_idx = np.minimum((points[:, 1] / extent * rows).astype(np.int64), rows - 1)
        cell = row_idx * cols + col_idx
        if np.unique(cell).size == cells:
            break
        settings.log(f"[gen] grid attempt {attempt}: empty cells, redrawing")
    else:
        raise UnableToPopulateCellsError(
            f"{rows}x{cols} grid still had empty cells after {MAX_GRID_ATTEMPTS} draws of {n} points"
        )

    clusters: List[List[int]] = [np.flatnonzero(cell == c).tolist() for c in range(cells)]
    source = int(rng.integers(0, n))
    return build_instance(
        name or f"{cells}rand{n}-{rows}x{cols}",
        clusters,
        source,
        coords=points,
    )


def generate_clustered(
    n: int,
    k: int,
    spread: float,
    extent: float = 1000.0,
    seed: int = 0,
    name: Optional[str] = None,
) -> ClusteredInstance:
    """k uniform centers; every center gets one point, the rest pick a center uniformly."""
    if k < 1 or n < k:
        raise DataError(f"need 1 <= k <= n (got n={n}, k={k})")
    if spread < 0:
        raise DataError(f"spread must be nonnegative (got {spread})")

    rng = make_rng(seed)
    centers = rng.uniform(0.0, extent, size=(k, 2))
    owner = np.concatenate([np.arange(k), rng.integers(0, k, size=n - k)])
    points = centers[owner] + rng.normal(0.0, spread, size=(n, 2))

    clusters = [np.flatnonzero(owner == c).tolist() for c in range(k)]
    source = int(rng.integers(0, n))
    return build_instance(name or f"{k}rand{n}", clusters, source, coords=points)
