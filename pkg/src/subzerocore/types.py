"""Shared domain types: the ground set, selection configuration, and results."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

METHODS = ("subzerocore", "facility_location", "kcenter_greedy", "random")
KERNELS = ("shifted_cosine", "cosine", "rbf")


class InputError(ValueError):
    """Invalid user-supplied data or configuration (CLI exit code 1)."""


def validate_embeddings(vectors, labels, ids=None) -> list[str]:
    """Check an embedding matrix and its labels, returning a list of diagnostics.

    An empty list means the inputs are valid. Each diagnostic names the
    offending row where one exists.
    """
    diags: list[str] = []
    vectors = np.asarray(vectors)
    if vectors.ndim != 2:
        diags.append(f"vectors must be a 2-d matrix, got {vectors.ndim} dimension(s)")
        return diags
    n, d = vectors.shape
    if n < 1 or d < 1:
        diags.append(f"empty embedding set ({n} rows x {d} columns)")
        return diags
    if not np.issubdtype(vectors.dtype, np.number):
        diags.append(f"vectors must be numeric, got dtype {vectors.dtype}")
        return diags
    finite_rows = np.isfinite(np.asarray(vectors, dtype=np.float64)).all(axis=1)
    for i in np.flatnonzero(~finite_rows):
        diags.append(f"non-finite value at row {i}")

    labels = np.asarray(labels)
    if labels.ndim != 1 or len(labels) != n:
        diags.append(f"label length mismatch: expected {n}, got {labels.size}")
    elif not np.issubdtype(labels.dtype, np.integer):
        diags.append(f"labels must be integers, got dtype {labels.dtype}")
    elif (labels < 0).any():
        for i in np.flatnonzero(labels < 0):
            diags.append(f"negative label at row {i}")

    if ids is not None:
        ids = np.asarray(ids)
        if ids.ndim != 1 or len(ids) != n:
            diags.append(f"id length mismatch: expected {n}, got {ids.size}")
        elif len(np.unique(ids)) != n:
            diags.append("ids contain duplicates")
    return diags


@dataclass(frozen=True)
class EmbeddingSet:
    """Immutable ground set: one embedding row per sample plus class labels.

    ``labels`` holds class ids normalized to the contiguous range 0..C-1;
    ``label_values`` maps a normalized id back to the original identifier.
    ``ids`` are the caller's sample identifiers (row indices by default).
    Build instances through :meth:`from_arrays`, which validates and
    normalizes; the raw constructor trusts its inputs.
    """

    vectors: np.ndarray
    labels: np.ndarray
    ids: np.ndarray
    label_values: np.ndarray

    @classmethod
    def from_arrays(cls, vectors, labels, ids=None) -> "EmbeddingSet":
        diags = validate_embeddings(vectors, labels, ids)
        if diags:
            raise InputError("; ".join(diags))
        vectors = np.array(vectors, dtype=np.float64, order="C")
        labels = np.asarray(labels, dtype=np.int64)
        if ids is None:
            ids = np.arange(len(labels), dtype=np.int64)
        else:
            ids = np.array(ids, dtype=np.int64)
        label_values, normalized = np.unique(labels, return_inverse=True)
        normalized = np.asarray(normalized, dtype=np.int64)
        for arr in (vectors, normalized, ids, label_values):
            arr.flags.writeable = False
        return cls(vectors=vectors, labels=normalized, ids=ids, label_values=label_values)

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    @property
    def n_classes(self) -> int:
        return len(self.label_values)

    def class_rows(self, class_id: int) -> np.ndarray:
        """Row indices belonging to a normalized class id, ascending."""
        return np.flatnonzero(self.labels == class_id)


@dataclass(frozen=True)
class SelectionConfig:
    """Knobs for one selection run.

    ``alpha`` is the fraction of samples removed; ``gamma`` the coverage
    target used to resolve the neighborhood size. ``threads`` bounds the
    number of concurrent per-class workers (None = one per CPU).
    """

    alpha: float
    gamma: float = 0.6
    method: str = "subzerocore"
    similarity: str = "shifted_cosine"
    rbf_bandwidth: float = 1.0
    seed: int = 0
    threads: Optional[int] = None

    def validate(self) -> None:
        if not (0.0 <= self.alpha):
            raise InputError("alpha must be >= 0")
        if not (self.alpha < 1.0):
            raise InputError("alpha must be < 1")
        if not (0.0 < self.gamma < 1.0):
            raise InputError("gamma must be in (0, 1)")
        if self.method not in METHODS:
            raise InputError(f"unknown method {self.method!r}")
        if self.similarity not in KERNELS:
            raise InputError(f"unknown similarity {self.similarity!r}")
        if self.similarity == "rbf" and not (self.rbf_bandwidth > 0.0):
            raise InputError("rbf bandwidth must be > 0")
        if not (0 <= int(self.seed) < 2**64):
            raise InputError("seed must be a non-negative 64-bit integer")
        if self.threads is not None and self.threads < 1:
            raise InputError("threads must be a positive integer")


@dataclass(frozen=True)
class ClassView:
    """One class's slice of the ground set plus its coreset budget."""

    class_id: int
    member_rows: np.ndarray
    budget: int

    def __post_init__(self):
        rows = np.asarray(self.member_rows)
        if rows.size == 0:
            raise InputError(f"class {self.class_id} has no members")
        if rows.size > 1 and not (np.diff(rows) > 0).all():
            raise InputError(f"class {self.class_id} rows must be strictly increasing")
        if not (1 <= self.budget <= rows.size):
            raise InputError(
                f"class {self.class_id} budget {self.budget} outside 1..{rows.size}"
            )


def compute_class_budgets(labels, alpha: float) -> list[tuple[int, int]]:
    """Per-class coreset sizes for a pruning ratio.

    budget_c = max(1, round_half_up((1 - alpha) * n_c)), so no class is
    ever emptied; classes are returned in ascending label order, each
    exactly once.
    """
    labels = np.asarray(labels)
    if labels.size == 0:
        raise InputError("empty label list")
    if not (0.0 <= alpha):
        raise InputError("alpha must be >= 0")
    if not (alpha < 1.0):
        raise InputError("alpha must be < 1")
    keep = 1.0 - alpha
    out = []
    values, counts = np.unique(labels, return_counts=True)
    for value, count in zip(values, counts):
        budget = max(1, math.floor(keep * int(count) + 0.5))
        out.append((int(value), budget))
    return out


@dataclass(frozen=True)
class ClassSelection:
    """Selection outcome for one class.

    ``selected_rows`` index into the owning EmbeddingSet, in pick order;
    ``selected_ids`` are the corresponding original sample ids. ``k`` is
    the neighborhood size used for the coverage diagnostics (None when
    the class is too small or fully selected). ``gains`` is the greedy
    marginal-gain sequence where one exists.
    """

    class_id: int
    label: int
    size: int
    budget: int
    k: Optional[int]
    achieved_coverage: Optional[float]
    capped: bool
    selected_rows: tuple[int, ...]
    selected_ids: tuple[int, ...]
    gains: Optional[tuple[float, ...]]
    objective: float
    mu: Optional[float]
    sigma: Optional[float]
    empirical_coverage: float


@dataclass(frozen=True)
class CoresetResult:
    """Merged outcome of a selection run over every class.

    ``budget_deviation`` records how far the rounded per-class budgets
    drifted from the requested global fraction. ``timings`` maps phase
    name to accumulated wall-clock seconds; it is in-memory diagnostics
    only and is never part of the serialized result.
    """

    config: SelectionConfig
    classes: tuple[ClassSelection, ...]
    total_samples: int
    total_selected: int
    requested_fraction: float
    budget_deviation: float
    timings: dict = field(default_factory=dict)

    def selected_rows(self) -> np.ndarray:
        """All selected row indices, ascending."""
        rows = [r for cls in self.classes for r in cls.selected_rows]
        return np.sort(np.asarray(rows, dtype=np.int64))
