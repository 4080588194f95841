"""Scikit-learn style front end for the selection pipelines."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .selectors import run_selection
from .types import EmbeddingSet, SelectionConfig


class CoresetSelector(BaseEstimator, TransformerMixin):
    """Select a class-wise coreset of the rows of X.

    Unlike a feature transformer, ``transform`` subsets rows: it returns
    the coreset rows learned during ``fit``. Use ``fit_resample`` to get
    the reduced (X, y) pair in one call.

    Parameters
    ----------
    alpha : float
        Pruning ratio, the fraction of samples to remove (0 <= alpha < 1).
    method : str
        One of ``subzerocore``, ``facility_location``, ``kcenter_greedy``,
        ``random``.
    gamma : float
        Coverage target in (0, 1) used to resolve the neighborhood size.
    similarity : str
        ``shifted_cosine`` (default), ``cosine``, or ``rbf``. Raw cosine
        can go negative, which voids the greedy approximation guarantee.
    rbf_bandwidth : float
        Bandwidth for the rbf kernel.
    seed : int
        Seed for the random baseline.
    threads : int or None
        Bound on concurrent per-class workers; None means one per CPU.
        Never affects the selected rows.

    Attributes
    ----------
    selected_indices_ : ndarray
        Row indices of the coreset, ascending.
    result_ : CoresetResult
        Full per-class diagnostics of the run.
    """

    def __init__(self, alpha=0.9, method="subzerocore", gamma=0.6,
                 similarity="shifted_cosine", rbf_bandwidth=1.0, seed=0,
                 threads=None):
        self.alpha = alpha
        self.method = method
        self.gamma = gamma
        self.similarity = similarity
        self.rbf_bandwidth = rbf_bandwidth
        self.seed = seed
        self.threads = threads

    def _config(self) -> SelectionConfig:
        return SelectionConfig(
            alpha=self.alpha,
            gamma=self.gamma,
            method=self.method,
            similarity=self.similarity,
            rbf_bandwidth=self.rbf_bandwidth,
            seed=self.seed,
            threads=self.threads,
        )

    def fit(self, X, y):
        """Learn the coreset rows of (X, y)."""
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y)
        emb = EmbeddingSet.from_arrays(X, y)
        self.result_ = run_selection(emb, self._config())
        self.selected_indices_ = self.result_.selected_rows()
        self.n_samples_in_ = X.shape[0]
        self.n_features_in_ = X.shape[1]
        return self

    def _check_fitted(self):
        if not hasattr(self, "selected_indices_"):
            raise NotFittedError("CoresetSelector is not fitted yet")

    def transform(self, X):
        """Return the coreset rows of X (must be the fitted training set)."""
        self._check_fitted()
        X = np.asarray(X)
        if X.shape[0] != self.n_samples_in_:
            raise ValueError(
                f"X has {X.shape[0]} rows but the selector was fitted on "
                f"{self.n_samples_in_}"
            )
        return X[self.selected_indices_]

    def fit_resample(self, X, y):
        """Fit and return the reduced (X, y) pair."""
        self.fit(X, y)
        y = np.asarray(y)
        return self.transform(X), y[self.selected_indices_]

    def get_support(self, indices: bool = False):
        """Boolean mask (or indices) of the selected rows."""
        self._check_fitted()
        if indices:
            return self.selected_indices_.copy()
        mask = np.zeros(self.n_samples_in_, dtype=bool)
        mask[self.selected_indices_] = True
        return mask
