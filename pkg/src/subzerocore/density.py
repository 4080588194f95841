"""Neighborhood radii and the Gaussian density weights derived from them.

A sample's radius is the distance to its k-th nearest neighbor (the sample
itself excluded); ball membership uses closed balls, so the query point and
any tied neighbors are counted. Local density itself is only ever exposed
in log space: r^d and Gamma(d/2 + 1) overflow quickly at realistic
embedding dimensions, and the selection pipeline needs only the radii and
the weights, whose ordering is equivalent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .types import InputError

SIGMA_FLOOR = 1e-12


@dataclass(frozen=True)
class RadiusVector:
    """Per-sample k-th nearest-neighbor distances for a fixed k."""

    radii: np.ndarray
    k: int


@dataclass(frozen=True)
class DensityStats:
    """Population mean and standard deviation of a radius distribution."""

    mu: float
    sigma: float


def knn_radii(dist: np.ndarray, k: int) -> RadiusVector:
    """Distance from each point to its k-th nearest other point.

    Ties are resolved by multiset rank: the k-th smallest of the n-1
    distances, counted with multiplicity. The self distance 0 is always
    among the k smallest of the full row, so the rank-k entry of the full
    row (0-based) is exactly the k-th smallest with self excluded; rows
    are processed through a small reused buffer rather than one
    matrix-sized scratch copy.
    """
    n = dist.shape[0]
    if not (1 <= k <= n - 1):
        raise InputError(f"k must be in 1..{n - 1}, got {k}")
    radii = np.empty(n)
    block = max(1, (1 << 21) // max(1, n * 8))
    buf = np.empty((block, n))
    for start in range(0, n, block):
        stop = min(start + block, n)
        chunk = buf[: stop - start]
        np.copyto(chunk, dist[start:stop])
        chunk.partition(k, axis=1)
        radii[start:stop] = chunk[:, k]
    radii.flags.writeable = False
    return RadiusVector(radii=radii, k=k)


def ball_count(dist: np.ndarray, i: int, r: float) -> int:
    """Number of points within the closed ball of radius r around point i.

    The point itself is at distance 0 and is always counted; duplicate
    points and ties at exactly r make counts above k + 1 possible.
    """
    if r < 0:
        raise InputError("radius must be >= 0")
    return int(np.count_nonzero(dist[i] <= r))


def log_density(count: int, r: float, d: int) -> float:
    """Natural log of count / Vol(ball(r)) in d dimensions.

    Evaluated via log-gamma so large d cannot overflow. A zero radius
    means infinite density and returns math.inf rather than raising.
    """
    if count < 1:
        raise InputError("count must be >= 1")
    if d < 1:
        raise InputError("dimension must be >= 1")
    if r < 0:
        raise InputError("radius must be >= 0")
    if r == 0.0:
        return math.inf
    log_volume = (d / 2.0) * math.log(math.pi) - math.lgamma(d / 2.0 + 1.0) + d * math.log(r)
    return math.log(count) - log_volume


def density_scores(radii: np.ndarray) -> tuple[DensityStats, np.ndarray]:
    """Gaussian weights over the radius distribution.

    score_i = exp(-(r_i - mu)^2 / (2 sigma^2)) with population mu, sigma.
    When sigma is (relatively) zero the radii carry no density signal and
    every weight is 1, which reduces the weighted objective to plain
    facility location.
    """
    radii = np.asarray(radii, dtype=np.float64)
    if radii.size == 0:
        raise InputError("empty radius vector")
    mu = float(radii.mean())
    sigma = float(radii.std())
    if sigma < SIGMA_FLOOR * max(mu, 1.0):
        scores = np.ones_like(radii)
    else:
        z = radii - mu
        scores = np.exp(z * z / (-2.0 * sigma * sigma))
    scores.flags.writeable = False
    return DensityStats(mu=mu, sigma=sigma), scores
