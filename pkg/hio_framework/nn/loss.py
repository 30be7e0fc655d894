import numpy as np

from hio_framework.nn.activation import Activation, activation_backward
from hio_framework.system.errors import NumericError, ShapeError

# true-class probabilities below this are clamped before the log
LOG_CLAMP = 1e-12
NORMALIZATION_TOLERANCE = 1e-6


def _check_labels(probs: np.ndarray, labels) -> np.ndarray:
    labels = np.asarray(labels)
    if probs.ndim != 2 or labels.shape != (probs.shape[0],):
        raise ShapeError(
            f"labels of shape {labels.shape} for a probability batch {probs.shape}"
        )
    if not np.issubdtype(labels.dtype, np.integer):
        if not np.array_equal(labels, np.round(labels)):
            raise ShapeError("labels must be class indices")
        labels = labels.astype(np.int64)
    if labels.size and (labels.min() < 0 or labels.max() >= probs.shape[1]):
        raise ShapeError(f"labels outside [0, {probs.shape[1]})")
    return labels


def one_hot(labels, n_classes: int) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.int64)
    encoded = np.zeros((labels.shape[0], n_classes))
    encoded[np.arange(labels.shape[0]), labels] = 1.0
    return encoded


def cross_entropy_loss(probs, labels) -> float:
    probs = np.atleast_2d(np.asarray(probs, dtype=np.float64))
    labels = _check_labels(probs, np.atleast_1d(labels))
    row_sums = probs.sum(axis=1)
    if np.any(np.abs(row_sums - 1.0) > NORMALIZATION_TOLERANCE):
        raise NumericError("probability rows must sum to 1")
    true_class = probs[np.arange(probs.shape[0]), labels]
    return float(np.sum(-np.log(np.maximum(true_class, LOG_CLAMP))))


def output_delta(
    activation: Activation, pre_activation: np.ndarray, probs: np.ndarray, labels
) -> np.ndarray:
    labels = _check_labels(probs, labels)
    targets = one_hot(labels, probs.shape[1])
    if activation is Activation.SOFTMAX:
        return probs - targets
    grad_probs = -targets / np.maximum(probs, LOG_CLAMP)
    return activation_backward(activation, pre_activation, probs, grad_probs)
