import math

import numpy as np
import pytest
from scipy import stats

from hio_framework.features.ttest import Grouping, ttest_select, welch_t_test
from hio_framework.system.errors import SelectionError


def welch_oracle(a, b):
    mean_a, mean_b = sum(a) / len(a), sum(b) / len(b)
    var_a = sum((v - mean_a) ** 2 for v in a) / (len(a) - 1)
    var_b = sum((v - mean_b) ** 2 for v in b) / (len(b) - 1)
    se_a, se_b = var_a / len(a), var_b / len(b)
    t = (mean_a - mean_b) / math.sqrt(se_a + se_b)
    dof = (se_a + se_b) ** 2 / (se_a**2 / (len(a) - 1) + se_b**2 / (len(b) - 1))
    return t, dof


def test_four_sample_welch_case_matches_direct_formula():
    features = np.array([[3.0], [5.0], [1.0], [2.0]])
    labels = np.array([1, 1, 0, 0])
    result = ttest_select(features, labels, k=1, grouping=Grouping.BINARY)
    t, dof = welch_oracle([3.0, 5.0], [1.0, 2.0])
    assert result.t_statistics[0] == pytest.approx(t)
    assert result.p_values[0] == pytest.approx(2 * stats.t.sf(abs(t), dof))
    assert result.p_values[0] == pytest.approx(
        stats.ttest_ind([3.0, 5.0], [1.0, 2.0], equal_var=False).pvalue
    )


def test_constant_feature_has_zero_t_and_unit_p_and_ranks_last():
    features = np.array(
        [[4.0, 1.0, 0.3], [4.0, 1.2, 0.1], [4.0, 3.0, 0.2], [4.0, 3.3, 0.9]]
    )
    labels = np.array([0, 0, 2, 2])
    result = ttest_select(features, labels, k=3)
    assert result.t_statistics[0] == 0.0
    assert result.p_values[0] == 1.0
    assert result.selected_indices[-1] == 0


def test_perfect_zero_variance_separation_ranks_first():
    features = np.array([[0.3, 0.0], [0.1, 0.0], [0.2, 1.0], [0.9, 1.0]])
    labels = np.array([0, 0, 1, 1])
    result = ttest_select(features, labels, k=2, grouping=Grouping.BINARY)
    assert result.selected_indices == (1, 0)


def test_ternary_labels_compare_positive_against_negative_only():
    rng = np.random.default_rng(0)
    features = rng.normal(size=(12, 5))
    labels = np.array([0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2])
    t, _, _ = welch_t_test(features[labels == 2], features[labels == 0])
    result = ttest_select(features, labels, k=5)
    assert np.allclose(result.t_statistics, t)


def test_one_vs_rest_grouping_uses_every_sample():
    rng = np.random.default_rng(1)
    features = rng.normal(size=(12, 3))
    labels = np.repeat([0, 1, 2], 4)
    t, _, _ = welch_t_test(features[labels == 2], features[labels != 2])
    result = ttest_select(features, labels, k=3, grouping=Grouping.ONE_VS_REST)
    assert np.allclose(result.t_statistics, t)


def test_selection_is_deterministic_and_capped_at_feature_count():
    rng = np.random.default_rng(2)
    features = rng.normal(size=(20, 8))
    labels = rng.integers(0, 3, size=20)
    labels[:3], labels[3:6] = 0, 2
    first = ttest_select(features, labels, k=100)
    second = ttest_select(features, labels, k=100)
    assert first.selected_indices == second.selected_indices
    assert sorted(first.selected_indices) == list(range(8))


def test_ties_are_broken_by_ascending_index():
    features = np.ones((6, 4))
    labels = np.array([0, 0, 0, 2, 2, 2])
    assert ttest_select(features, labels, k=4).selected_indices == (0, 1, 2, 3)


@pytest.mark.parametrize(
    "labels",
    [np.array([1, 1, 1, 1, 1]), np.array([0, 2, 2, 2, 2])],
)
def test_degenerate_grouping_is_rejected(labels):
    with pytest.raises(SelectionError):
        ttest_select(np.zeros((5, 2)), labels, k=1)


def test_ternary_grouping_without_positive_rows_is_rejected():
    with pytest.raises(SelectionError, match="top_vs_bottom"):
        ttest_select([[1.0], [2.0], [3.0], [5.0]], [0, 0, 1, 1], k=1)


def test_one_vs_rest_without_positive_rows_is_rejected():
    with pytest.raises(SelectionError):
        ttest_select(np.zeros((4, 2)), [0, 0, 1, 1], k=1, grouping="one_vs_rest")


def test_binary_grouping_rejects_a_third_label():
    with pytest.raises(SelectionError, match=r"\[2\]"):
        ttest_select(np.zeros((5, 2)), [0, 0, 1, 1, 2], k=1, grouping=Grouping.BINARY)
