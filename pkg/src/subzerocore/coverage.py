"""Coverage of a coreset: the empirical metric, its closed-form mean under
uniform subsets, and the inversion that picks a neighborhood size k for a
coverage target.

For a ground set of n points and a uniformly random subset of size s, the
probability that a fixed point's k nearest neighbors all avoid the subset
is C(n-k, s) / C(n, s) = prod_{j=0..k-1} (n-s-j)/(n-j). Expected coverage
is one minus that product; it depends only on (n, s, k), never on the
geometry. The product is evaluated in plain 64-bit arithmetic: every
factor lies in [0, 1], so there is no overflow and underflow only pushes
coverage toward 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .density import knn_radii
from .similarity import pairwise_distances
from .types import InputError


@dataclass(frozen=True)
class CoveragePlan:
    """A coverage target bound to a concrete neighborhood size.

    ``achieved`` is the closed-form expected coverage at ``k``; ``capped``
    is set when the scan hit its upper bound before reaching the target,
    in which case ``achieved`` < ``gamma``.
    """

    n: int
    size: int
    gamma: float
    k: int
    achieved: float
    capped: bool


@dataclass(frozen=True)
class CoverageEstimate:
    """Monte-Carlo mean coverage with its standard error."""

    mean: float
    stderr: float
    trials: int


def expected_coverage(n: int, s: int, k: int) -> float:
    """Closed-form mean coverage of a uniform size-s subset at radius rank k.

    Returns exactly 1.0 once s > n - k: avoiding the subset is then
    impossible.
    """
    if n < 2:
        raise InputError("ground size must be >= 2")
    if not (1 <= s <= n):
        raise InputError(f"coreset size must be in 1..{n}, got {s}")
    if not (1 <= k <= n - 1):
        raise InputError(f"k must be in 1..{n - 1}, got {k}")
    if s > n - k:
        return 1.0
    avoid = 1.0
    for j in range(k):
        avoid *= (n - s - j) / (n - j)
    return 1.0 - avoid


def _meets_target_exact(n: int, s: int, k: int, gamma: float) -> bool:
    # Exact rational comparison for coverage values within rounding
    # distance of the target; gamma itself is an exact binary rational.
    avoid = Fraction(math.comb(n - k, s) if n - k >= s else 0, math.comb(n, s))
    return 1 - avoid >= Fraction(gamma)


def find_k_for_coverage(n: int, s: int, gamma: float) -> CoveragePlan:
    """Smallest k whose expected coverage meets the target.

    For s <= n - 2 the scan is capped at n - s - 1; a bound scan is
    reported via ``capped`` rather than silently returned. s = n - 1 is
    degenerate but well-defined (a zero product factor forces coverage 1
    by k = 2); only s >= n is rejected. Coverage values within float
    rounding of the target are resolved by exact rational comparison, so
    the reported ``achieved`` can render an ulp under ``gamma`` when the
    two are mathematically equal.
    """
    if n < 2:
        raise InputError("ground size must be >= 2")
    if s < 1:
        raise InputError(f"coreset size must be >= 1, got {s}")
    if s >= n:
        raise InputError("coreset too large for coverage inversion")
    if not (0.0 < gamma < 1.0):
        raise InputError("gamma must be in (0, 1)")
    k_max = n - s - 1 if s <= n - 2 else n - 1
    avoid = 1.0
    k = 0
    cov = 0.0
    met = False
    while not met and k < k_max:
        if s > n - (k + 1):
            cov = 1.0
            k += 1
            met = True
            continue
        avoid *= (n - s - k) / (n - k)
        k += 1
        cov = 1.0 - avoid
        if abs(cov - gamma) <= 1e-9:
            met = _meets_target_exact(n, s, k, gamma)
        else:
            met = cov >= gamma
    return CoveragePlan(n=n, size=s, gamma=gamma, k=k, achieved=cov, capped=not met)


def empirical_coverage(dist: np.ndarray, selected, k: int) -> float:
    """Fraction of points whose closed k-NN ball contains a selected point.

    A selected point covers itself: its own distance 0 is inside any
    ball. ``selected`` holds row indices into ``dist``.
    """
    n = dist.shape[0]
    sel = np.unique(np.asarray(list(selected), dtype=np.int64))
    if sel.size == 0:
        raise InputError("empty selection")
    if sel[0] < 0 or sel[-1] >= n:
        raise InputError(f"selected index out of range 0..{n - 1}")
    radii = knn_radii(dist, k).radii
    nearest = dist[:, sel].min(axis=1)
    return float(np.count_nonzero(nearest <= radii) / n)


def mc_expected_coverage(n: int, s: int, k: int, trials: int, seed: int,
                         dim: int = 2) -> CoverageEstimate:
    """Monte-Carlo estimate of expected coverage on a random point cloud.

    The cloud is fixed by ``seed``; each trial draws a uniform s-subset
    from a generator derived from (seed, trial index), so estimates are
    reproducible for any worker split. A point counts as covered when the
    subset hits one of its k nearest neighbors (itself excluded) - the
    event whose probability the closed form states, which is what makes
    the estimate comparable to ``expected_coverage`` regardless of the
    cloud's dimension or distribution.
    """
    if trials < 1:
        raise InputError("trials must be >= 1")
    if n < 2:
        raise InputError("ground size must be >= 2")
    if not (1 <= s <= n):
        raise InputError(f"coreset size must be in 1..{n}, got {s}")
    if not (1 <= k <= n - 1):
        raise InputError(f"k must be in 1..{n - 1}, got {k}")
    cloud = np.random.default_rng(seed).standard_normal((n, dim))
    dist = pairwise_distances(cloud)
    radii = knn_radii(dist, k).radii
    neighbors = dist <= radii[:, None]
    np.fill_diagonal(neighbors, False)
    covs = np.empty(trials)
    for t in range(trials):
        rng = np.random.default_rng((seed, t))
        sel = rng.choice(n, size=s, replace=False)
        covs[t] = np.count_nonzero(neighbors[:, sel].any(axis=1)) / n
    mean = float(covs.mean())
    stderr = float(covs.std() / np.sqrt(trials))
    return CoverageEstimate(mean=mean, stderr=stderr, trials=trials)
