from typing import Iterator, Optional

import numpy as np

from hio_framework.nn.gradients import Gradients
from hio_framework.nn.mlp import Mlp
from hio_framework.system.errors import NumericError


def sgd_step(mlp: Mlp, grads: Gradients, learning_rate: float) -> Mlp:
    if learning_rate < 0:
        raise NumericError(f"learning rate must be non-negative, got {learning_rate}")
    grads.check_congruent(mlp)
    if not grads.is_finite():
        raise NumericError("non-finite gradient, update rejected")
    updated = [
        (
            layer.weights - learning_rate * d_w,
            layer.bias - learning_rate * d_b,
        )
        for layer, d_w, d_b in zip(mlp.layers, grads.weight_grads, grads.bias_grads)
    ]
    if not all(np.isfinite(w).all() and np.isfinite(b).all() for w, b in updated):
        raise NumericError("update would produce non-finite parameters, rejected")
    for layer, (weights, bias) in zip(mlp.layers, updated):
        layer.weights = weights
        layer.bias = bias
    return mlp


def iterate_batches(
    n_samples: int, batch_size: Optional[int], rng: np.random.Generator
) -> Iterator[np.ndarray]:
    # full batch draws nothing from rng
    if batch_size is None or batch_size >= n_samples:
        yield np.arange(n_samples)
        return
    order = rng.permutation(n_samples)
    for start in range(0, n_samples, batch_size):
        yield order[start : start + batch_size]
