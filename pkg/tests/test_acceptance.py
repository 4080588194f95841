"""Acceptance suite: one test per release criterion, each printing a
PASS line (run with ``pytest tests/test_acceptance.py -v -s``).

Tolerances are pinned here, not configurable. Accuracy-after-training
comparisons are out of scope by design (criterion 10): they require
training image classifiers on reference datasets, which this toolkit
deliberately does not do.
"""

import math
import time
from pathlib import Path

import numpy as np
import pytest

from oracles import enum_expected_coverage, enum_min_k, random_instance
from subzerocore.cli import build_coverage_table, main
from subzerocore.coverage import expected_coverage, find_k_for_coverage, mc_expected_coverage
from subzerocore.density import ball_count, knn_radii, log_density
from subzerocore.io_formats import write_embeddings, write_labels
from subzerocore.selectors import select_facility_location, select_subzerocore
from subzerocore.similarity import pairwise_distances
from subzerocore.submodular import brute_force_max, greedy_lazy, greedy_naive, marginal_gain, objective
from subzerocore.types import EmbeddingSet, SelectionConfig

GOLDEN = Path(__file__).parent / "golden"


def _announce(number: int, label: str) -> None:
    print(f"ACCEPTANCE {number} {label}: PASS")


def test_c01_expected_coverage_exact_vs_enumeration():
    start = time.perf_counter()
    checked = 0
    for n in range(3, 13):
        for k in range(1, n - 1):
            for s in range(1, n - k + 1):
                exact = float(enum_expected_coverage(n, s, k))
                assert abs(expected_coverage(n, s, k) - exact) < 1e-12, (n, s, k)
                checked += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0, f"enumeration sweep took {elapsed:.1f}s"
    assert checked == 275
    _announce(1, f"expected-coverage exactness ({checked} cases, {elapsed:.1f}s)")


def test_c02_monte_carlo_validates_closed_form():
    start = time.perf_counter()
    for n, s in ((200, 20), (500, 25)):
        plan = find_k_for_coverage(n, s, 0.6)
        closed = expected_coverage(n, s, plan.k)
        for dim in (2, 16):
            est = mc_expected_coverage(n, s, plan.k, trials=20000, seed=97, dim=dim)
            assert abs(est.mean - closed) <= 0.01, (n, s, dim, est.mean, closed)
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0, f"Monte-Carlo validation took {elapsed:.1f}s"
    _announce(2, f"Monte-Carlo coverage validation ({elapsed:.1f}s)")


def test_c03_find_k_minimal_vs_enumeration():
    gammas = (0.1, 0.25, 0.4, 0.5, 0.6, 0.75, 0.9, 0.95, 0.99)
    checked = 0
    for n in range(3, 13):
        for s in range(1, n - 1):
            cap = n - s - 1
            for gamma in gammas:
                plan = find_k_for_coverage(n, s, gamma)
                want_k, want_capped = enum_min_k(n, s, gamma, cap)
                assert (plan.k, plan.capped) == (want_k, want_capped), (n, s, gamma)
                checked += 1
    worked = find_k_for_coverage(5, 2, 0.6)
    assert worked.k == 2 and worked.achieved == pytest.approx(0.7, abs=1e-15)
    _announce(3, f"find-k minimality ({checked} cases)")


def test_c04_submodularity_and_monotonicity():
    rng = np.random.default_rng(113)
    for _ in range(1000):
        n = int(rng.integers(3, 31))
        inst = random_instance(rng, n)
        b_size = int(rng.integers(1, n))
        b = rng.choice(n, size=b_size, replace=False)
        a = b[: int(rng.integers(0, b_size))]
        j = int(rng.choice([x for x in range(n) if x not in set(b.tolist())]))
        assert marginal_gain(inst, a, j) >= marginal_gain(inst, b, j) - 1e-9
    for _ in range(1000):
        n = int(rng.integers(2, 31))
        inst = random_instance(rng, n)
        b_size = int(rng.integers(1, n + 1))
        b = rng.choice(n, size=b_size, replace=False)
        a = b[: int(rng.integers(0, b_size))]
        assert objective(inst, a) <= objective(inst, b) + 1e-9
    _announce(4, "submodularity suite (1000 triples + 1000 nested pairs)")


def test_c05_greedy_guarantee():
    bound = 1.0 - 1.0 / math.e
    rng = np.random.default_rng(127)
    violations = 0
    for _ in range(200):
        n = int(rng.integers(3, 13))
        inst = random_instance(rng, n)
        budget = int(rng.integers(1, min(6, n) + 1))
        _, best = brute_force_max(inst, budget)
        if greedy_lazy(inst, budget).objective < bound * best:
            violations += 1
    assert violations == 0
    _announce(5, "greedy (1 - 1/e) guarantee (200 instances, 0 violations)")


def test_c06_lazy_equals_naive_bitwise():
    rng = np.random.default_rng(131)
    for _ in range(500):
        n = int(rng.integers(2, 41))
        inst = random_instance(rng, n)
        budget = int(rng.integers(1, n + 1))
        lazy = greedy_lazy(inst, budget)
        naive = greedy_naive(inst, budget)
        assert lazy.order == naive.order
        assert [g.hex() for g in lazy.gains] == [g.hex() for g in naive.gains]
        assert lazy.objective.hex() == naive.objective.hex()
    _announce(6, "lazy/naive trace equality (500 instances, bit-identical)")


def test_c07_radius_order_equals_density_order():
    for seed in range(100):
        dim = (2, 8)[seed % 2]
        k = (1, 3, 5)[seed % 3]
        cloud = np.random.default_rng(5000 + seed).standard_normal((50, dim))
        dist = pairwise_distances(cloud)
        radii = knn_radii(dist, k).radii
        counts = [ball_count(dist, i, radii[i]) for i in range(50)]
        assert all(c == k + 1 for c in counts)  # generic position
        dens = np.array([log_density(counts[i], radii[i], dim) for i in range(50)])
        by_radius = np.argsort(radii, kind="stable")
        by_density = np.argsort(-dens, kind="stable")
        assert np.array_equal(by_radius, by_density), seed
    _announce(7, "radius order equals log-density order (100 clouds)")


def test_c08_reduction_to_facility_location():
    for seed in range(50):
        rng = np.random.default_rng(1000 + seed)
        locations = rng.integers(-50, 51, (10, 4)).astype(np.float64)
        locations[np.all(locations == 0, axis=1)] = 1.0
        points = np.repeat(locations, 5, axis=0)  # all radii exactly 0 at k <= 4
        emb = EmbeddingSet.from_arrays(points, np.zeros(50, dtype=np.int64))
        config = SelectionConfig(alpha=0.7)
        weighted = select_subzerocore(emb, config).classes[0]
        plain = select_facility_location(emb, config).classes[0]
        assert weighted.sigma == 0.0
        assert weighted.selected_rows == plain.selected_rows, seed
    _announce(8, "sigma=0 reduction to facility location (50 cases)")


def test_c09_coverage_trend_and_golden_table(benchmark_set):
    table, raw = build_coverage_table(benchmark_set, (0.7, 0.9, 0.99), gamma=0.6, seed=0)
    szc = raw["coverage"][("subzerocore", 0.7)]
    fl = raw["coverage"][("facility_location", 0.7)]
    assert szc > fl, f"subzerocore {szc:.4f} <= facility_location {fl:.4f} at alpha=0.7"
    golden = (GOLDEN / "coverage_table.txt").read_text()
    assert table == golden, "coverage table drifted from the pinned golden file"
    _announce(9, f"coverage trend at alpha=0.7 ({szc:.4f} > {fl:.4f}) + golden table")


def test_c10_training_accuracy_out_of_scope():
    # Accuracy-vs-pruning tables require training image classifiers on
    # reference datasets; the toolkit asserts no accuracy numbers at all.
    _announce(10, "no model-training accuracy criteria asserted (out of scope)")


def test_c11_cli_byte_identical_across_threads(tmp_path, benchmark_set):
    epath = tmp_path / "bench.bin"
    lpath = tmp_path / "bench.csv"
    write_embeddings(epath, benchmark_set.vectors)
    write_labels(lpath, benchmark_set.label_values[benchmark_set.labels])
    outputs = []
    for threads in (1, 4, 8):
        out = tmp_path / f"result_t{threads}.json"
        code = main(["select", "--embeddings", str(epath), "--labels", str(lpath),
                     "--alpha", "0.9", "--gamma", "0.6", "--seed", "0",
                     "--threads", str(threads), "--output", str(out)])
        assert code == 0
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1] == outputs[2]
    golden = (GOLDEN / "select_alpha09.json").read_bytes()
    assert outputs[0] == golden, "selection result drifted from the pinned golden file"
    _announce(11, "byte-identical results for --threads 1/4/8 + golden result")


def test_c12_performance_budget():
    config = SelectionConfig(alpha=0.9, threads=1)

    emb = _perf_set(2000)
    start = time.perf_counter()
    select_subzerocore(emb, config)
    full_run = time.perf_counter() - start
    assert full_run < 5.0, f"n=2000 d=128 took {full_run:.2f}s"

    phase_time = {}
    for n in (1000, 2000, 4000):
        emb = _perf_set(n)
        best = math.inf
        for _ in range(3):
            res = select_subzerocore(emb, config)
            best = min(best, res.timings["radii"] + res.timings["greedy"])
        phase_time[n] = best
    r1 = phase_time[2000] / phase_time[1000]
    r2 = phase_time[4000] / phase_time[2000]
    assert r1 <= 4.5, f"1000->2000 radii+greedy grew {r1:.2f}x"
    assert r2 <= 4.5, f"2000->4000 radii+greedy grew {r2:.2f}x"
    _announce(12, f"performance budget (full {full_run:.2f}s; scaling {r1:.2f}x, {r2:.2f}x)")


def _perf_set(n: int) -> EmbeddingSet:
    from subzerocore.synthetic import gaussian_mixture

    return gaussian_mixture(1, n, 128, seed=5)
