"""End-to-end class-wise selection pipelines.

Classes are processed independently (and in parallel when asked to) and the
per-class results merged in class order, so the output never depends on
scheduling. Every method reports the same diagnostics: the neighborhood
size k resolved from the coverage target, radius statistics, and the
empirical coverage of its selection at that k. Only the density-weighted
method needs k to run; for the others it is diagnostic, and for a fully
selected or single-point class (where no k exists) coverage is trivially 1.

Objectives are comparable across methods: the greedy methods report their
own maximized value, while k-center and random selections are scored with
the unweighted facility-location objective.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

import numpy as np

from .coverage import empirical_coverage, find_k_for_coverage
from .density import density_scores, knn_radii
from .similarity import pairwise_distances, pairwise_similarities
from .submodular import WeightedFLInstance, greedy_lazy, objective
from .types import (
    ClassSelection,
    ClassView,
    CoresetResult,
    EmbeddingSet,
    InputError,
    SelectionConfig,
    compute_class_budgets,
)

PHASES = ("distances", "similarity", "radii", "greedy", "coverage")


def _kcenter_order(dist: np.ndarray, budget: int) -> tuple[int, ...]:
    """Farthest-first traversal seeded at the medoid.

    The first center minimizes the sum of distances to all points; each
    later pick maximizes the distance to its nearest chosen center. All
    ties resolve to the smallest index.
    """
    n = dist.shape[0]
    order = [int(np.argmin(dist.sum(axis=1)))]
    taken = np.zeros(n, dtype=bool)
    taken[order[0]] = True
    nearest = dist[order[0]].copy()
    for _ in range(budget - 1):
        nxt = int(np.argmax(np.where(taken, -1.0, nearest)))
        order.append(nxt)
        taken[nxt] = True
        np.minimum(nearest, dist[nxt], out=nearest)
    return tuple(order)


def _select_class(emb: EmbeddingSet, view: ClassView, config: SelectionConfig,
                  method: str) -> tuple[ClassSelection, dict]:
    times = dict.fromkeys(PHASES, 0.0)
    rows = view.member_rows
    mat = emb.vectors[rows]
    n_c = rows.size
    budget = view.budget
    label = int(emb.label_values[view.class_id])

    if method == "subzerocore" and (n_c < 3 or budget > n_c - 2):
        raise InputError(
            f"class {label}: {n_c} members with budget {budget} leave no room "
            f"for coverage inversion (need budget <= members - 2)"
        )

    t0 = time.perf_counter()
    dist = pairwise_distances(mat)
    times["distances"] += time.perf_counter() - t0

    t0 = time.perf_counter()
    plan = None
    stats = None
    scores = None
    if n_c >= 2 and budget <= n_c - 1:
        plan = find_k_for_coverage(n_c, budget, config.gamma)
        stats, scores = density_scores(knn_radii(dist, plan.k).radii)
    times["radii"] += time.perf_counter() - t0

    t0 = time.perf_counter()
    sim = pairwise_similarities(mat, config.similarity, config.rbf_bandwidth)
    weights = scores if method == "subzerocore" else np.ones(n_c)
    instance = WeightedFLInstance(sim, weights)
    times["similarity"] += time.perf_counter() - t0

    t0 = time.perf_counter()
    gains = None
    if method in ("subzerocore", "facility_location"):
        trace = greedy_lazy(instance, budget)
        order, gains, obj = trace.order, trace.gains, trace.objective
    elif method == "kcenter_greedy":
        order = _kcenter_order(dist, budget)
        obj = objective(instance, order)
    elif method == "random":
        rng = np.random.default_rng((config.seed, view.class_id))
        order = tuple(int(i) for i in np.sort(rng.choice(n_c, size=budget, replace=False)))
        obj = objective(instance, order)
    else:
        raise InputError(f"unknown method {method!r}")
    times["greedy"] += time.perf_counter() - t0

    t0 = time.perf_counter()
    emp = empirical_coverage(dist, order, plan.k) if plan is not None else 1.0
    times["coverage"] += time.perf_counter() - t0

    global_rows = tuple(int(rows[i]) for i in order)
    selection = ClassSelection(
        class_id=view.class_id,
        label=label,
        size=int(n_c),
        budget=budget,
        k=plan.k if plan is not None else None,
        achieved_coverage=plan.achieved if plan is not None else None,
        capped=plan.capped if plan is not None else False,
        selected_rows=global_rows,
        selected_ids=tuple(int(emb.ids[r]) for r in global_rows),
        gains=gains,
        objective=obj,
        mu=stats.mu if stats is not None else None,
        sigma=stats.sigma if stats is not None else None,
        empirical_coverage=emp,
    )
    return selection, times


def _run(emb: EmbeddingSet, config: SelectionConfig) -> CoresetResult:
    config.validate()
    budgets = compute_class_budgets(emb.labels, config.alpha)
    views = [ClassView(cid, emb.class_rows(cid), b) for cid, b in budgets]
    workers = config.threads or os.cpu_count() or 1

    def work(view):
        return _select_class(emb, view, config, config.method)

    if workers > 1 and len(views) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(work, views))
    else:
        outcomes = [work(v) for v in views]

    classes = tuple(sel for sel, _ in outcomes)
    timings = dict.fromkeys(PHASES, 0.0)
    for _, times in outcomes:
        for phase, dt in times.items():
            timings[phase] += dt
    total_selected = sum(sel.budget for sel in classes)
    requested = (1.0 - config.alpha) * emb.n
    return CoresetResult(
        config=config,
        classes=classes,
        total_samples=emb.n,
        total_selected=total_selected,
        requested_fraction=1.0 - config.alpha,
        budget_deviation=total_selected - requested,
        timings=timings,
    )


def run_selection(emb: EmbeddingSet, config: SelectionConfig) -> CoresetResult:
    """Run the method named in the config over every class."""
    return _run(emb, config)


def select_subzerocore(emb: EmbeddingSet, config: SelectionConfig) -> CoresetResult:
    """Density-weighted facility location with k resolved from the coverage
    target; requires every class to keep at least two unselected members."""
    return _run(emb, replace(config, method="subzerocore"))


def select_facility_location(emb: EmbeddingSet, config: SelectionConfig) -> CoresetResult:
    """Plain facility location (all weights one)."""
    return _run(emb, replace(config, method="facility_location"))


def select_kcenter_greedy(emb: EmbeddingSet, config: SelectionConfig) -> CoresetResult:
    """Farthest-first traversal from the class medoid."""
    return _run(emb, replace(config, method="kcenter_greedy"))


def select_random(emb: EmbeddingSet, config: SelectionConfig) -> CoresetResult:
    """Uniform per-class subsets from a generator seeded by (seed, class)."""
    return _run(emb, replace(config, method="random"))
