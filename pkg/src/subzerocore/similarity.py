"""Dense pairwise distances and similarity kernels over one class's rows.

Matrices are materialized densely, so memory is n^2 * 8 bytes per class;
classes larger than the row cap are rejected up front instead of thrashing.
Each matrix is produced by a single vectorized computation, so results do
not depend on how many worker threads drive the per-class pipelines.
"""

from __future__ import annotations

import numpy as np

from .types import KERNELS, InputError

DEFAULT_ROW_CAP = 20000


def _check_rows(rows, row_cap: int) -> np.ndarray:
    rows = np.ascontiguousarray(rows, dtype=np.float64)
    if rows.ndim != 2 or rows.shape[0] < 1 or rows.shape[1] < 1:
        raise InputError("rows must be a non-empty 2-d matrix")
    if not np.isfinite(rows).all():
        bad = int(np.flatnonzero(~np.isfinite(rows).all(axis=1))[0])
        raise InputError(f"non-finite value at row {bad}")
    n = rows.shape[0]
    if n > row_cap:
        need = n * n * 8
        raise InputError(
            f"{n} rows exceed the dense-matrix cap of {row_cap}; "
            f"a full matrix would need ~{need / 1e9:.1f} GB"
        )
    return rows


def _sq_distances(rows: np.ndarray) -> np.ndarray:
    """Squared Euclidean distances, exactly symmetric with a zero diagonal."""
    gram = rows @ rows.T
    sq = np.diagonal(gram).copy()
    d2 = sq[:, None] + sq[None, :] - 2.0 * gram
    np.maximum(d2, 0.0, out=d2)
    d2 = np.triu(d2, 1)
    return d2 + d2.T


def pairwise_distances(rows, row_cap: int = DEFAULT_ROW_CAP) -> np.ndarray:
    """Euclidean distance matrix of the given rows.

    The result is symmetric, non-negative, read-only, and has an exactly
    zero diagonal.
    """
    rows = _check_rows(rows, row_cap)
    dist = np.sqrt(_sq_distances(rows))
    dist.flags.writeable = False
    return dist


def pairwise_similarities(rows, kernel: str = "shifted_cosine",
                          bandwidth: float = 1.0,
                          row_cap: int = DEFAULT_ROW_CAP) -> np.ndarray:
    """Similarity matrix under the named kernel.

    shifted_cosine maps cosine into [0, 1] via (1 + cos)/2 and is the
    default: the greedy approximation guarantee assumes a monotone
    non-negative objective, which raw cosine does not provide. rbf is
    exp(-dist^2 / (2 * bandwidth^2)). Zero-norm rows are rejected under
    the cosine kernels.
    """
    if kernel not in KERNELS:
        raise InputError(f"unknown similarity {kernel!r}")
    rows = _check_rows(rows, row_cap)

    if kernel == "rbf":
        if not bandwidth > 0.0:
            raise InputError("rbf bandwidth must be > 0")
        sim = np.exp(_sq_distances(rows) / (-2.0 * bandwidth * bandwidth))
    else:
        gram = rows @ rows.T
        norms = np.sqrt(np.diagonal(gram))
        zero = np.flatnonzero(norms == 0.0)
        if zero.size:
            raise InputError(f"zero-norm row {int(zero[0])}")
        sim = gram / np.outer(norms, norms)
        np.clip(sim, -1.0, 1.0, out=sim)
        sim = np.triu(sim, 1)
        sim = sim + sim.T
        np.fill_diagonal(sim, 1.0)
        if kernel == "shifted_cosine":
            sim = (1.0 + sim) / 2.0
    sim.flags.writeable = False
    return sim
