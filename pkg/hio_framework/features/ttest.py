from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import stats

from hio_framework.features.labels import TraitClass
from hio_framework.system.errors import SelectionError

VARIANCE_FLOOR = 1e-12
MIN_SAMPLES = 4
MIN_GROUP_SIZE = 2


class Grouping(str, Enum):
    # ternary labels: positive against negative, neutral dropped
    TOP_VS_BOTTOM = "top_vs_bottom"
    # ternary labels: positive against every other sample
    ONE_VS_REST = "one_vs_rest"
    # 0/1 labels: class 1 against class 0
    BINARY = "binary"


@dataclass(frozen=True)
class SelectionResult:
    selected_indices: tuple[int, ...]
    t_statistics: np.ndarray
    p_values: np.ndarray

    def apply(self, features: np.ndarray) -> np.ndarray:
        return np.asarray(features)[:, list(self.selected_indices)]


def welch_t_test(
    group_a: np.ndarray, group_b: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Column-wise Welch t statistics, two-sided p-values and Welch-Satterthwaite
    degrees of freedom. Sample variances are floored at VARIANCE_FLOOR."""
    n_a, n_b = group_a.shape[0], group_b.shape[0]
    var_a = np.maximum(group_a.var(axis=0, ddof=1), VARIANCE_FLOOR) / n_a
    var_b = np.maximum(group_b.var(axis=0, ddof=1), VARIANCE_FLOOR) / n_b
    standard_error = np.sqrt(var_a + var_b)
    t = (group_a.mean(axis=0) - group_b.mean(axis=0)) / standard_error
    dof = (var_a + var_b) ** 2 / (var_a**2 / (n_a - 1) + var_b**2 / (n_b - 1))
    p = np.clip(2.0 * stats.t.sf(np.abs(t), dof), 0.0, 1.0)
    return t, p, dof


def _groups(labels: np.ndarray, grouping: Grouping) -> tuple[np.ndarray, np.ndarray]:
    grouping = Grouping(grouping)
    if grouping is Grouping.BINARY:
        top, bottom, allowed = labels == 1, labels == 0, {0, 1}
    else:
        top = labels == TraitClass.POSITIVE
        bottom = labels == TraitClass.NEGATIVE
        if grouping is Grouping.ONE_VS_REST:
            bottom = ~top
        allowed = {int(c) for c in TraitClass}
    unknown = set(np.unique(labels).tolist()) - allowed
    if unknown:
        raise SelectionError(f"labels {sorted(unknown)} outside {sorted(allowed)}")
    if not top.any() or not bottom.any():
        raise SelectionError(
            f"{grouping.value} grouping needs both compared classes present"
        )
    return top, bottom


def ttest_select(
    features, labels, k: int = 100, grouping: Grouping = Grouping.TOP_VS_BOTTOM
) -> SelectionResult:
    features = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels)
    if k < 1:
        raise SelectionError(f"k must be positive, got {k}")
    if features.ndim != 2 or labels.shape != (features.shape[0],):
        raise SelectionError(
            f"{labels.shape} labels for a feature matrix of shape {features.shape}"
        )
    if features.shape[0] < MIN_SAMPLES:
        raise SelectionError(f"need at least {MIN_SAMPLES} samples")
    in_a, in_b = _groups(labels, grouping)
    if in_a.sum() < MIN_GROUP_SIZE or in_b.sum() < MIN_GROUP_SIZE:
        raise SelectionError(
            f"each group needs {MIN_GROUP_SIZE} samples, "
            f"got {in_a.sum()} and {in_b.sum()}"
        )
    t, p, _ = welch_t_test(features[in_a], features[in_b])
    order = np.lexsort((np.arange(features.shape[1]), p))
    selected = order[: min(k, features.shape[1])]
    return SelectionResult(tuple(int(i) for i in selected), t, p)
