import numpy as np
import pytest

from subzerocore.types import (
    ClassView,
    EmbeddingSet,
    InputError,
    SelectionConfig,
    compute_class_budgets,
    validate_embeddings,
)


class TestComputeClassBudgets:
    def test_ten_percent_of_ten(self):
        assert compute_class_budgets([0] * 10, 0.9) == [(0, 1)]

    def test_one_percent_of_5000(self):
        assert compute_class_budgets([0] * 5000, 0.99) == [(0, 50)]

    def test_round_half_up(self):
        # (1 - 0.5) * 7 = 3.5 rounds up
        assert compute_class_budgets([0] * 7, 0.5) == [(0, 4)]

    def test_every_class_once_ascending(self):
        labels = [2, 0, 1, 2, 0, 1, 2]
        out = compute_class_budgets(labels, 0.0)
        assert [c for c, _ in out] == [0, 1, 2]
        assert [b for _, b in out] == [2, 2, 3]

    def test_empty_labels(self):
        with pytest.raises(InputError):
            compute_class_budgets([], 0.5)

    def test_alpha_range(self):
        with pytest.raises(InputError):
            compute_class_budgets([0], 1.0)
        with pytest.raises(InputError):
            compute_class_budgets([0], -0.1)

    def test_floor_of_one(self):
        assert compute_class_budgets([0] * 3, 0.99) == [(0, 1)]

    def test_sum_within_half_per_class(self):
        # with the floor inactive, each class deviates by at most 0.5
        rng = np.random.default_rng(11)
        for _ in range(50):
            n_classes = int(rng.integers(1, 8))
            labels = np.repeat(np.arange(n_classes), rng.integers(10, 80, n_classes))
            alpha = float(rng.uniform(0.0, 0.9))
            budgets = compute_class_budgets(labels, alpha)
            total = sum(b for _, b in budgets)
            assert all(b >= 1 for _, b in budgets)
            assert abs(total - (1 - alpha) * len(labels)) <= 0.5 * n_classes + 1e-9

    def test_permutation_invariant(self):
        rng = np.random.default_rng(5)
        labels = rng.integers(0, 5, 200)
        shuffled = labels.copy()
        rng.shuffle(shuffled)
        assert compute_class_budgets(labels, 0.73) == compute_class_budgets(shuffled, 0.73)


class TestValidateEmbeddings:
    def test_valid(self):
        assert validate_embeddings([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]], [0, 0, 1]) == []

    def test_nan_row(self):
        vectors = np.ones((3, 2))
        vectors[1, 0] = np.nan
        diags = validate_embeddings(vectors, [0, 0, 1])
        assert diags == ["non-finite value at row 1"]

    def test_label_length_mismatch(self):
        diags = validate_embeddings(np.ones((3, 2)), [0, 1])
        assert any("label length mismatch" in d for d in diags)

    def test_empty(self):
        diags = validate_embeddings(np.ones((0, 2)), [])
        assert any("empty" in d for d in diags)

    def test_multiple_violations_reported(self):
        vectors = np.ones((3, 2))
        vectors[0, 0] = np.inf
        vectors[2, 1] = np.nan
        diags = validate_embeddings(vectors, [0, 0, 1])
        assert "non-finite value at row 0" in diags
        assert "non-finite value at row 2" in diags


class TestEmbeddingSet:
    def test_label_normalization(self):
        emb = EmbeddingSet.from_arrays(np.ones((4, 2)), [7, 3, 7, 9])
        assert emb.labels.tolist() == [1, 0, 1, 2]
        assert emb.label_values.tolist() == [3, 7, 9]
        assert emb.ids.tolist() == [0, 1, 2, 3]
        assert emb.n == 4 and emb.dim == 2 and emb.n_classes == 3

    def test_class_rows_ascending(self):
        emb = EmbeddingSet.from_arrays(np.ones((5, 2)), [1, 0, 1, 0, 1])
        assert emb.class_rows(1).tolist() == [0, 2, 4]

    def test_invalid_raises(self):
        with pytest.raises(InputError, match="non-finite"):
            EmbeddingSet.from_arrays([[np.nan, 1.0]], [0])

    def test_arrays_read_only(self):
        emb = EmbeddingSet.from_arrays(np.ones((2, 2)), [0, 1])
        with pytest.raises(ValueError):
            emb.vectors[0, 0] = 5.0


class TestSelectionConfig:
    def test_defaults_valid(self):
        SelectionConfig(alpha=0.5).validate()

    def test_alpha_one_rejected(self):
        with pytest.raises(InputError, match="alpha must be < 1"):
            SelectionConfig(alpha=1.0).validate()

    def test_gamma_bounds(self):
        with pytest.raises(InputError, match="gamma"):
            SelectionConfig(alpha=0.5, gamma=1.0).validate()

    def test_unknown_method(self):
        with pytest.raises(InputError, match="unknown method"):
            SelectionConfig(alpha=0.5, method="herding").validate()

    def test_rbf_bandwidth(self):
        with pytest.raises(InputError, match="bandwidth"):
            SelectionConfig(alpha=0.5, similarity="rbf", rbf_bandwidth=0.0).validate()

    def test_threads(self):
        with pytest.raises(InputError, match="threads"):
            SelectionConfig(alpha=0.5, threads=0).validate()


class TestClassView:
    def test_valid(self):
        ClassView(0, np.array([1, 4, 9]), 2)

    def test_budget_range(self):
        with pytest.raises(InputError):
            ClassView(0, np.array([1, 2]), 3)

    def test_rows_strictly_increasing(self):
        with pytest.raises(InputError):
            ClassView(0, np.array([3, 1]), 1)

    def test_empty_rows(self):
        with pytest.raises(InputError):
            ClassView(0, np.array([], dtype=np.int64), 1)
