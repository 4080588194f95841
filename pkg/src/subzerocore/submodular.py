"""Weighted facility location and its greedy maximizers.

The objective of a subset S is sum_i max_{j in S} w_j * sim[i, j], with
f(empty) = 0 so the first marginal gain is well defined. With similarities
and weights in [0, 1] the function is monotone submodular and lazy greedy
with stale upper bounds is an exact implementation of naive greedy, not an
approximation: both resolve ties by smallest index, gains are compared with
plain 64-bit equality (an epsilon would break the queue's exactness), and
every gain - initial or re-evaluated - goes through the same O(n) kernel,
so the two traces match bit for bit.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .types import InputError

BRUTE_FORCE_CAP = 10**6


def _exactly_symmetric(sim: np.ndarray) -> bool:
    # Tile the transpose comparison so large matrices are walked in
    # cache-sized blocks instead of one fully strided pass.
    n = sim.shape[0]
    tile = max(1, int(np.sqrt((1 << 22) / 8)))
    for i0 in range(0, n, tile):
        i1 = min(i0 + tile, n)
        for j0 in range(i0, n, tile):
            j1 = min(j0 + tile, n)
            if not np.array_equal(sim[i0:i1, j0:j1], sim[j0:j1, i0:i1].T):
                return False
    return True


@dataclass(frozen=True)
class WeightedFLInstance:
    """A similarity matrix plus per-candidate weights in (0, 1].

    All-ones weights give plain facility location.
    """

    sim: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        sim = np.asarray(self.sim, dtype=np.float64)
        weights = np.asarray(self.weights, dtype=np.float64)
        if sim.ndim != 2 or sim.shape[0] != sim.shape[1]:
            raise InputError("similarity matrix must be square")
        if not _exactly_symmetric(sim):
            # the gain kernel walks rows in place of columns
            raise InputError("similarity matrix must be exactly symmetric")
        if weights.shape != (sim.shape[0],):
            raise InputError("weights length must match the matrix size")
        if not ((weights > 0.0) & (weights <= 1.0)).all():
            raise InputError("weights must lie in (0, 1]")
        object.__setattr__(self, "sim", sim)
        object.__setattr__(self, "weights", weights)

    @property
    def n(self) -> int:
        return self.sim.shape[0]


@dataclass(frozen=True)
class GreedyTrace:
    """Pick order, per-pick marginal gains, and the final objective."""

    order: tuple[int, ...]
    gains: tuple[float, ...]
    objective: float


def _check_subset(n: int, subset) -> np.ndarray:
    sel = np.asarray(list(subset), dtype=np.int64)
    if sel.size and (sel.min() < 0 or sel.max() >= n):
        raise InputError(f"subset index out of range 0..{n - 1}")
    return sel


def objective(instance: WeightedFLInstance, subset) -> float:
    """Objective value of a subset; the empty set scores 0 by convention."""
    sel = _check_subset(instance.n, subset)
    if sel.size == 0:
        return 0.0
    vals = instance.sim[:, sel] * instance.weights[sel]
    return float(vals.max(axis=1).sum())


def _gain(sim: np.ndarray, weights: np.ndarray, best: np.ndarray, j: int,
          buf: np.ndarray = None) -> float:
    # Marginal gain of candidate j against the cached per-row maxima.
    # sim is exactly symmetric, so the contiguous row stands in for the
    # column; the greedy loops pass a scratch buffer to keep the hot path
    # allocation-free (values are identical either way).
    if buf is None:
        return float(np.maximum(weights[j] * sim[j] - best, 0.0).sum())
    np.multiply(sim[j], weights[j], out=buf)
    np.subtract(buf, best, out=buf)
    np.maximum(buf, 0.0, out=buf)
    return float(buf.sum())


def _best_of(instance: WeightedFLInstance, sel: np.ndarray) -> np.ndarray:
    if sel.size == 0:
        return np.zeros(instance.n)
    return (instance.sim[:, sel] * instance.weights[sel]).max(axis=1)


def marginal_gain(instance: WeightedFLInstance, subset, candidate: int) -> float:
    """objective(subset + candidate) - objective(subset), in O(n) from the
    cached per-row current maxima."""
    sel = _check_subset(instance.n, subset)
    if not (0 <= candidate < instance.n):
        raise InputError(f"candidate index out of range 0..{instance.n - 1}")
    if candidate in set(sel.tolist()):
        raise InputError(f"candidate {candidate} already selected")
    return _gain(instance.sim, instance.weights, _best_of(instance, sel), candidate)


def _check_budget(n: int, budget: int) -> None:
    if not (1 <= budget <= n):
        raise InputError(f"budget must be in 1..{n}, got {budget}")


def greedy_naive(instance: WeightedFLInstance, budget: int) -> GreedyTrace:
    """Reference greedy: re-evaluates every remaining candidate each round.

    Ties break toward the smallest index. Gains are clamped at zero inside
    the gain kernel, which cannot trigger under non-negative similarities
    and weights.
    """
    _check_budget(instance.n, budget)
    sim, weights = instance.sim, instance.weights
    n = instance.n
    best = np.zeros(n)
    buf = np.empty(n)
    taken = np.zeros(n, dtype=bool)
    order: list[int] = []
    gains: list[float] = []
    for _ in range(budget):
        winner = -1
        winner_gain = -math.inf
        for j in range(n):
            if taken[j]:
                continue
            g = _gain(sim, weights, best, j, buf)
            if g > winner_gain:
                winner, winner_gain = j, g
        order.append(winner)
        gains.append(winner_gain)
        taken[winner] = True
        np.maximum(best, weights[winner] * sim[winner], out=best)
    return GreedyTrace(tuple(order), tuple(gains), objective(instance, order))


def greedy_lazy(instance: WeightedFLInstance, budget: int) -> GreedyTrace:
    """Lazy greedy over a priority queue of stale upper bounds.

    The queue holds (-gain, index, round evaluated); the top is re-evaluated
    until its gain is current, which by submodularity is then the exact
    argmax. Produces the identical trace to greedy_naive on every input.
    """
    _check_budget(instance.n, budget)
    sim, weights = instance.sim, instance.weights
    n = instance.n
    best = np.zeros(n)
    buf = np.empty(n)
    heap = [(-_gain(sim, weights, best, j, buf), j, 0) for j in range(n)]
    heapq.heapify(heap)
    order: list[int] = []
    gains: list[float] = []
    for step in range(budget):
        while True:
            neg_g, j, evaluated = heapq.heappop(heap)
            if evaluated == step:
                winner, winner_gain = j, -neg_g
                break
            heapq.heappush(heap, (-_gain(sim, weights, best, j, buf), j, step))
        order.append(winner)
        gains.append(winner_gain)
        np.maximum(best, weights[winner] * sim[winner], out=best)
    return GreedyTrace(tuple(order), tuple(gains), objective(instance, order))


def brute_force_max(instance: WeightedFLInstance, budget: int) -> tuple[tuple[int, ...], float]:
    """Exhaustive maximum over all size-budget subsets.

    Test oracle for the greedy guarantee; refuses instances with more than
    10^6 candidate subsets. Ties resolve to the lexicographically smallest
    subset (the first one enumerated).
    """
    _check_budget(instance.n, budget)
    total = math.comb(instance.n, budget)
    if total > BRUTE_FORCE_CAP:
        raise InputError(
            f"brute force refused: C({instance.n}, {budget}) = {total} subsets "
            f"exceeds the cap of {BRUTE_FORCE_CAP}"
        )
    best_subset: tuple[int, ...] = ()
    best_value = -math.inf
    for subset in combinations(range(instance.n), budget):
        value = objective(instance, subset)
        if value > best_value:
            best_subset, best_value = subset, value
    return best_subset, best_value
